#include "clbic/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "clbic/error.hpp"

namespace clbic {

namespace {

using Index = Eigen::Index;

// Squared distances, points x centers.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers) {
  Eigen::MatrixXd d = (-2.0 * points * centers.transpose()).eval();
  d.colwise() += points.rowwise().squaredNorm();
  d.rowwise() += centers.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

// Index of the first occurrence of each distinct row, and for every row the
// position of its representative in that list.
std::pair<std::vector<Index>, Eigen::VectorXi> distinct_rows(const Eigen::MatrixXd& points) {
  const Index n = points.rows();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  auto row_less = [&](Index a, Index b) {
    for (Index c = 0; c < points.cols(); ++c) {
      if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), row_less);
  Eigen::VectorXi rep(n);
  std::vector<Index> firsts;
  std::vector<Index> group_of(n);
  for (Index pos = 0; pos < n; ++pos) {
    const Index i = order[pos];
    if (pos == 0 || points.row(i) != points.row(order[pos - 1])) firsts.push_back(i);
    group_of[i] = static_cast<Index>(firsts.size()) - 1;
  }
  // Renumber groups by first appearance in the original row order.
  std::vector<Index> by_index(firsts.size());
  std::iota(by_index.begin(), by_index.end(), Index{0});
  std::sort(by_index.begin(), by_index.end(),
            [&](Index a, Index b) { return firsts[a] < firsts[b]; });
  std::vector<int> rank(firsts.size());
  std::vector<Index> sorted_firsts(firsts.size());
  for (std::size_t r = 0; r < by_index.size(); ++r) {
    rank[by_index[r]] = static_cast<int>(r);
    sorted_firsts[r] = firsts[by_index[r]];
  }
  for (Index i = 0; i < n; ++i) rep(i) = rank[group_of[i]];
  return {sorted_firsts, rep};
}

}  // namespace

double within_cluster_ss(const Eigen::MatrixXd& points, const Eigen::VectorXi& labels, int k) {
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(k, points.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (Index i = 0; i < points.rows(); ++i) {
    centers.row(labels(i)) += points.row(i);
    counts(labels(i)) += 1.0;
  }
  for (int c = 0; c < k; ++c) {
    if (counts(c) > 0) centers.row(c) /= counts(c);
  }
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centers.row(labels(i))).squaredNorm();
  }
  return total;
}

Eigen::MatrixXd kmeanspp_centers(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.row(0) = points.row(pick(rng));
  Eigen::VectorXd nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    if (!(total > 0.0)) throw NumericalError("k-means++: fewer distinct points than clusters");
    const double target = unit(rng) * total;
    double acc = 0.0;
    Index chosen = -1;
    for (Index i = 0; i < n; ++i) {
      if (nearest(i) <= 0.0) continue;
      chosen = i;
      acc += nearest(i);
      if (acc >= target) break;
    }
    centers.row(c) = points.row(chosen);
    nearest = nearest.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

LloydResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers,
                  const KMeansOptions& options) {
  const Index n = points.rows();
  const auto k = static_cast<int>(centers.rows());
  LloydResult out;
  out.labels = Eigen::VectorXi::Constant(n, -1);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::MatrixXd dist = squared_distances(points, centers);
    bool changed = false;
    Eigen::VectorXd own(n);
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      own(i) = dist.row(i).minCoeff(&best);
      if (out.labels(i) != best) {
        out.labels(i) = static_cast<int>(best);
        changed = true;
      }
    }

    Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
    for (Index i = 0; i < n; ++i) ++counts(out.labels(i));
    for (int c = 0; c < k; ++c) {
      if (counts(c) > 0) continue;
      // Steal the worst-fitting point from a cluster that can spare it.
      Index worst = -1;
      for (Index i = 0; i < n; ++i) {
        if (counts(out.labels(i)) > 1 && (worst < 0 || own(i) > own(worst))) worst = i;
      }
      if (worst < 0) break;
      --counts(out.labels(worst));
      out.labels(worst) = c;
      counts(c) = 1;
      own(worst) = 0.0;
      changed = true;
    }

    centers.setZero();
    for (Index i = 0; i < n; ++i) centers.row(out.labels(i)) += points.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts(c) > 0) centers.row(c) /= static_cast<double>(counts(c));
    }

    double wcss = 0.0;
    for (Index i = 0; i < n; ++i) wcss += (points.row(i) - centers.row(out.labels(i))).squaredNorm();
    const double previous = out.wcss_history.empty() ? std::numeric_limits<double>::infinity()
                                                     : out.wcss_history.back();
    out.wcss_history.push_back(wcss);
    if (!changed) break;
    if (std::isfinite(previous) && previous - wcss <= options.tolerance * previous) break;
  }
  out.centers = std::move(centers);
  out.wcss = out.wcss_history.empty() ? 0.0 : out.wcss_history.back();
  return out;
}

Labeling kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                const KMeansOptions& options) {
  const Index n = points.rows();
  if (k < 1 || k > n) throw DataError("kmeans: k must lie in [1, n]");
  if (k == 1) return make_labeling(Eigen::VectorXi::Zero(n), 1);

  auto [firsts, rep] = distinct_rows(points);
  if (static_cast<Index>(firsts.size()) <= k) {
    // Every distinct point becomes its own cluster; leftover labels stay empty.
    return make_labeling(rep, k);
  }

  Eigen::VectorXi best_labels;
  double best_wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    LloydResult run = lloyd(points, kmeanspp_centers(points, k, rng), options);
    if (run.wcss < best_wcss) {
      best_wcss = run.wcss;
      best_labels = std::move(run.labels);
    }
  }
  return make_labeling(std::move(best_labels), k);
}

}  // namespace clbic
