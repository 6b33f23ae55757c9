#include "clbic/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace clbic {

namespace {

void check_lengths(const Labeling& z, const Labeling& zhat) {
  if (z.size() != zhat.size()) throw DataError("labelings have different lengths");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Eigen::MatrixXd confusion(const Labeling& z, const Labeling& zhat, int k) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, k);
  for (Index i = 0; i < z.size(); ++i) c(z.labels(i), zhat.labels(i)) += 1.0;
  return c;
}

}  // namespace

double rand_gf(const Labeling& z, const Labeling& zhat) {
  check_lengths(z, zhat);
  const Index n = z.size();
  if (n < 2) return 1.0;
  // Agreement count from the contingency table rather than an O(N^2) loop.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(z.k, zhat.k);
  for (Index i = 0; i < n; ++i) c(z.labels(i), zhat.labels(i)) += 1.0;
  auto pairs = [](const auto& x) { return (x.array() * (x.array() - 1.0) / 2.0).sum(); };
  const double both = pairs(c.reshaped());
  const double same_z = pairs(c.rowwise().sum());
  const double same_hat = pairs(c.colwise().sum().transpose());
  const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double disagree = same_z + same_hat - 2.0 * both;
  return (total - disagree) / total;
}

std::optional<double> median_ratio_mr(const Adjacency& a, const Labeling& zhat) {
  if (zhat.k < 2) return std::nullopt;
  const BlockCounts counts = block_counts(a, zhat);
  std::vector<double> within;
  std::vector<double> between;
  for (int x = 0; x < zhat.k; ++x) {
    for (int y = x; y < zhat.k; ++y) {
      const auto m = static_cast<double>(counts.edges(pair_index(x, y, zhat.k)));
      (x == y ? within : between).push_back(m);
    }
  }
  const double denom = median(between);
  if (denom == 0.0) return std::nullopt;
  return median(within) / denom;
}

Eigen::VectorXi hungarian_max(const Eigen::MatrixXd& weights) {
  // Classical O(n^3) potentials formulation on costs = max - weights.
  const Index n = weights.rows();
  const double big = weights.size() > 0 ? weights.maxCoeff() : 0.0;
  const Eigen::MatrixXd cost = (big - weights.array()).matrix();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Eigen::VectorXi assignment(n);
  for (Index j = 1; j <= n; ++j) assignment(p[j] - 1) = static_cast<int>(j - 1);
  return assignment;
}

double misclustering_rate_hungarian(const Labeling& z, const Labeling& zhat) {
  check_lengths(z, zhat);
  if (z.size() == 0) return 0.0;
  const int k = std::max(z.k, zhat.k);
  const Eigen::MatrixXd c = confusion(z, zhat, k);
  const Eigen::VectorXi match = hungarian_max(c);
  double hits = 0.0;
  for (int r = 0; r < k; ++r) hits += c(r, match(r));
  return 1.0 - hits / static_cast<double>(z.size());
}

double misclustering_rate(const Labeling& z, const Labeling& zhat) {
  check_lengths(z, zhat);
  const int k = std::max(z.k, zhat.k);
  if (k > 8) return misclustering_rate_hungarian(z, zhat);
  if (z.size() == 0) return 0.0;
  const Eigen::MatrixXd c = confusion(z, zhat, k);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double hits = 0.0;
    for (int r = 0; r < k; ++r) hits += c(r, perm[r]);
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 1.0 - best / static_cast<double>(z.size());
}

Eigen::MatrixXd expected_adjacency(const Labeling& z, const DcbmParams& params) {
  const Index n = z.size();
  if (params.omega.size() != n) throw DataError("expected_adjacency: omega length mismatch");
  Eigen::MatrixXd out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      out(i, j) = i == j ? 0.0
                         : params.omega(i) * params.omega(j) *
                               params.theta(pair_index(z.labels(i), z.labels(j), z.k));
    }
  }
  return out;
}

}  // namespace clbic
