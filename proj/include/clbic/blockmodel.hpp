#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "clbic/graph.hpp"
#include "clbic/labeling.hpp"

namespace clbic {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using FlagVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Position of the unordered block pair (a, b) in the a <= b row-major
/// upper-triangle layout used for every per-block vector.
inline Index pair_index(int a, int b, int k) {
  if (a > b) std::swap(a, b);
  return static_cast<Index>(a) * k - static_cast<Index>(a) * (a - 1) / 2 + (b - a);
}

inline Index pair_count(int k) { return static_cast<Index>(k) * (k + 1) / 2; }

/// Per-block sizes, node pairs n_ab and edges m_ab. For a != b, m_ab counts
/// every edge joining a and b regardless of node order.
struct BlockCounts {
  int k = 0;
  CountVector sizes;
  CountVector pairs;
  CountVector edges;
};

/// N x k matrix: entry (i, c) is the number of neighbours of i in community c.
Eigen::MatrixXi community_degrees(const Adjacency& a, const Labeling& z);

BlockCounts block_counts(const Adjacency& a, const Labeling& z);
BlockCounts block_counts(const Eigen::MatrixXi& community_degrees, const Labeling& z);

struct SbmParams {
  int k = 0;
  Eigen::VectorXd theta;  // edge probability per block pair
  FlagVector empty;       // n_ab = 0; theta set to 0
};

struct DcbmParams {
  int k = 0;
  Eigen::VectorXd theta;  // expected edge count per block pair
  Eigen::VectorXd omega;  // per-node degree effect, sums to 1 within each community
  FlagVector zero_degree_community;
};

/// theta_ab = m_ab / n_ab.
SbmParams sbm_mle(const BlockCounts& counts);

/// sum_{i<j} A_ij log theta + (1 - A_ij) log(1 - theta), aggregated per block.
/// 0 log 0 = 0; otherwise probabilities are clamped to [eps, 1 - eps].
double sbm_loglik(const Adjacency& a, const Labeling& z, const SbmParams& params);
double sbm_loglik(const BlockCounts& counts, const SbmParams& params);

/// theta_ab = m_ab, omega_i = d_i / (total degree of i's community).
DcbmParams dcbm_mle(const Adjacency& a, const Labeling& z);
DcbmParams dcbm_mle(const Eigen::VectorXi& degrees, const BlockCounts& counts, const Labeling& z);

/// Poisson log-likelihood summed over ordered block pairs:
///   2 sum_i d_i log omega_i + sum_{a,b} (M_ab log T_ab - T_ab)
/// with M_ab = m_ab, T_ab = theta_ab off the diagonal and M_aa = 2 m_aa,
/// T_aa = 2 theta_aa on it. Maximized at dcbm_mle.
double dcbm_loglik(const Adjacency& a, const Labeling& z, const DcbmParams& params);
double dcbm_loglik(const Eigen::VectorXi& degrees, const BlockCounts& counts,
                   const DcbmParams& params);

/// Composite score d cl / d theta_ab per block pair.
Eigen::VectorXd sbm_score(const BlockCounts& counts, const Eigen::VectorXd& theta);
Eigen::VectorXd dcbm_score(const BlockCounts& counts, const Eigen::VectorXd& theta);

inline constexpr double kProbabilityClamp = 1e-10;

}  // namespace clbic
