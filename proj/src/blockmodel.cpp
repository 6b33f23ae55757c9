#include "clbic/blockmodel.hpp"

#include <algorithm>
#include <cmath>

#include "clbic/error.hpp"

namespace clbic {

namespace {

void check_sizes(const Adjacency& a, const Labeling& z) {
  if (z.size() != a.size()) throw DataError("labeling length does not match the graph");
}

// m log p with 0 log 0 = 0; p is clamped only where it would be zero.
double count_log(double m, double p) {
  if (m == 0.0) return 0.0;
  return m * std::log(std::max(p, kProbabilityClamp));
}

}  // namespace

Eigen::MatrixXi community_degrees(const Adjacency& a, const Labeling& z) {
  check_sizes(a, z);
  Eigen::MatrixXi membership = Eigen::MatrixXi::Zero(z.size(), z.k);
  for (Index i = 0; i < z.size(); ++i) membership(i, z.labels(i)) = 1;
  return a.matrix() * membership;
}

BlockCounts block_counts(const Adjacency& a, const Labeling& z) {
  return block_counts(community_degrees(a, z), z);
}

BlockCounts block_counts(const Eigen::MatrixXi& cdeg, const Labeling& z) {
  const int k = z.k;
  BlockCounts out;
  out.k = k;
  out.sizes = z.sizes().cast<std::int64_t>();
  out.pairs = CountVector::Zero(pair_count(k));
  out.edges = CountVector::Zero(pair_count(k));

  // Ordered tallies: each within edge is seen twice, each cross edge once from
  // either side.
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> tally =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(k, k);
  for (Index i = 0; i < z.size(); ++i) tally.row(z.labels(i)) += cdeg.row(i).cast<std::int64_t>();

  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const Index p = pair_index(a, b, k);
      if (a == b) {
        out.pairs(p) = out.sizes(a) * (out.sizes(a) - 1) / 2;
        out.edges(p) = tally(a, a) / 2;
      } else {
        out.pairs(p) = out.sizes(a) * out.sizes(b);
        out.edges(p) = tally(a, b);
      }
    }
  }
  return out;
}

SbmParams sbm_mle(const BlockCounts& counts) {
  SbmParams out;
  out.k = counts.k;
  out.theta = Eigen::VectorXd::Zero(counts.pairs.size());
  out.empty = counts.pairs.array() == 0;
  for (Index p = 0; p < counts.pairs.size(); ++p) {
    if (counts.pairs(p) > 0) {
      out.theta(p) = static_cast<double>(counts.edges(p)) / static_cast<double>(counts.pairs(p));
    }
  }
  return out;
}

double sbm_loglik(const BlockCounts& counts, const SbmParams& params) {
  if (params.theta.size() != counts.pairs.size()) {
    throw DataError("sbm_loglik: parameter length does not match the labeling");
  }
  double total = 0.0;
  for (Index p = 0; p < counts.pairs.size(); ++p) {
    const auto m = static_cast<double>(counts.edges(p));
    const auto n = static_cast<double>(counts.pairs(p));
    total += count_log(m, params.theta(p)) + count_log(n - m, 1.0 - params.theta(p));
  }
  return total;
}

double sbm_loglik(const Adjacency& a, const Labeling& z, const SbmParams& params) {
  return sbm_loglik(block_counts(a, z), params);
}

DcbmParams dcbm_mle(const Eigen::VectorXi& degrees, const BlockCounts& counts, const Labeling& z) {
  DcbmParams out;
  out.k = counts.k;
  out.theta = counts.edges.cast<double>();
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(z.k);
  for (Index i = 0; i < z.size(); ++i) totals(z.labels(i)) += degrees(i);
  out.zero_degree_community = totals.array() == 0.0;
  out.omega = Eigen::VectorXd::Zero(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    const double t = totals(z.labels(i));
    if (t > 0.0) out.omega(i) = degrees(i) / t;
  }
  return out;
}

DcbmParams dcbm_mle(const Adjacency& a, const Labeling& z) {
  return dcbm_mle(degrees(a), block_counts(a, z), z);
}

double dcbm_loglik(const Eigen::VectorXi& deg, const BlockCounts& counts,
                   const DcbmParams& params) {
  if (params.theta.size() != counts.edges.size() || params.omega.size() != deg.size()) {
    throw DataError("dcbm_loglik: parameter dimensions do not match");
  }
  double total = 0.0;
  for (Index i = 0; i < deg.size(); ++i) {
    if (deg(i) == 0) continue;
    total += 2.0 * deg(i) * std::log(std::max(params.omega(i), kProbabilityClamp));
  }
  // Ordered double sum over (a, b): the symmetric count matrix has 2 m_aa on
  // the diagonal and m_ab twice off it.
  const int k = counts.k;
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const Index p = pair_index(a, b, k);
      const auto m = static_cast<double>(counts.edges(p));
      const double scale = a == b ? 2.0 : 1.0;
      const double theta = params.theta(p);
      if (m > 0.0) total += 2.0 * m * std::log(std::max(scale * theta, kProbabilityClamp));
      total -= 2.0 * theta;
    }
  }
  return total;
}

double dcbm_loglik(const Adjacency& a, const Labeling& z, const DcbmParams& params) {
  check_sizes(a, z);
  return dcbm_loglik(degrees(a), block_counts(a, z), params);
}

Eigen::VectorXd sbm_score(const BlockCounts& counts, const Eigen::VectorXd& theta) {
  const Eigen::ArrayXd m = counts.edges.cast<double>().array();
  const Eigen::ArrayXd n = counts.pairs.cast<double>().array();
  return (m / theta.array() - (n - m) / (1.0 - theta.array())).matrix();
}

Eigen::VectorXd dcbm_score(const BlockCounts& counts, const Eigen::VectorXd& theta) {
  return (counts.edges.cast<double>().array() / theta.array() - 1.0).matrix();
}

}  // namespace clbic
