#include "clbic/spectral.hpp"

#include <string>

namespace clbic {

namespace {

void check_embedding(const Eigen::MatrixXd& e) {
  if (!e.allFinite()) throw NumericalError("embedding has non-finite entries");
}

}  // namespace

Eigen::MatrixXd spectral_embed(const Eigen::MatrixXd& laplacian, Index k) {
  return spectral_embed(top_eigenpairs(laplacian, k), k);
}

Eigen::MatrixXd spectral_embed(const Eigenpairs<double>& basis, Index k) {
  if (k < 1 || k > basis.vectors.cols()) throw DataError("spectral_embed: k must lie in [1, n]");
  Eigen::MatrixXd u = basis.vectors.leftCols(k);
  check_embedding(u);
  return u;
}

Eigen::MatrixXd score_embed(const Adjacency& a, Index k) {
  return score_embed(top_eigenpairs(a.matrix().cast<double>(), k), k);
}

Eigen::MatrixXd score_embed(const Eigenpairs<double>& basis, Index k) {
  const Index n = basis.vectors.rows();
  if (k < 1 || k > basis.vectors.cols()) throw DataError("score_embed: k must lie in [1, n]");
  const auto lead = basis.vectors.col(0);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(lead(i)) < kScoreZeroTolerance) {
      throw NumericalError("score_embed: leading eigenvector vanishes at node " +
                           std::to_string(i) + " (ratio undefined)");
    }
  }
  const double clip = std::log(static_cast<double>(n));
  Eigen::MatrixXd v(n, k);
  v.col(0).setOnes();
  for (Index c = 1; c < k; ++c) {
    v.col(c) = basis.vectors.col(c).cwiseQuotient(lead).cwiseMax(-clip).cwiseMin(clip);
  }
  check_embedding(v);
  return v;
}

}  // namespace clbic
