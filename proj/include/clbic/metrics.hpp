#pragma once

#include <optional>

#include <Eigen/Dense>

#include "clbic/blockmodel.hpp"
#include "clbic/graph.hpp"
#include "clbic/labeling.hpp"

namespace clbic {

/// Rand index: fraction of node pairs on which both labelings agree about
/// co-membership.
double rand_gf(const Labeling& z, const Labeling& zhat);

/// median_a m_aa / median_{a<b} m_ab. Empty when k = 1 or the between-block
/// median is zero. Even-length medians average the two central values.
std::optional<double> median_ratio_mr(const Adjacency& a, const Labeling& zhat);

/// Minimum fraction of mismatched nodes over label matchings. Exact
/// permutation search when both labelings have k <= 8, Hungarian assignment
/// on the confusion matrix otherwise. Unequal k is padded with empty
/// communities.
double misclustering_rate(const Labeling& z, const Labeling& zhat);

/// Same quantity, always through the Hungarian assignment.
double misclustering_rate_hungarian(const Labeling& z, const Labeling& zhat);

/// ||estimate - truth||_F / ||truth||_F. Throws DataError for a zero truth.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frobenius_rel_err(const Eigen::MatrixBase<DerivedA>& estimate,
                                            const Eigen::MatrixBase<DerivedB>& truth);

/// Expected adjacency omega_i omega_j theta_{z_i z_j} off the diagonal.
Eigen::MatrixXd expected_adjacency(const Labeling& z, const DcbmParams& params);

/// Maximum-weight assignment on a square matrix; returns the column of each row.
Eigen::VectorXi hungarian_max(const Eigen::MatrixXd& weights);

}  // namespace clbic

#include "clbic/error.hpp"

namespace clbic {

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frobenius_rel_err(const Eigen::MatrixBase<DerivedA>& estimate,
                                            const Eigen::MatrixBase<DerivedB>& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw DataError("frobenius_rel_err: shapes differ");
  }
  const auto denom = truth.norm();
  if (!(denom > 0)) throw DataError("frobenius_rel_err: truth has zero norm");
  return (estimate - truth).norm() / denom;
}

}  // namespace clbic
