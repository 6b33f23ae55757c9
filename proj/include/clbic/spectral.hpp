#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "clbic/error.hpp"
#include "clbic/graph.hpp"

namespace clbic {

template <typename Scalar>
struct Eigenpairs {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // one unit column per value
};

namespace detail {

template <typename Vector>
Index first_max_coordinate(const Vector& v) {
  Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  return at;
}

}  // namespace detail

/// Full eigendecomposition of a symmetric matrix, ordered for community
/// detection: decreasing |lambda|, ties by signed lambda (descending) and then
/// by the index of the first maximal coordinate. Each eigenvector is flipped
/// so that its first nonzero coordinate is positive.
template <typename Derived>
Eigenpairs<typename Derived::Scalar> ordered_eigenpairs(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols()) throw DataError("eigendecomposition needs a square matrix");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.derived());
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge (n=" << m.rows()
        << ", frobenius norm=" << m.norm() << ", max |entry|=" << m.cwiseAbs().maxCoeff()
        << ", asymmetry=" << (m - m.transpose()).cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }

  const auto& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  const Index n = values.size();
  const Scalar scale = std::max(Scalar(1), n > 0 ? values.cwiseAbs().maxCoeff() : Scalar(1));
  const Scalar tie = Scalar(1e-12) * scale;

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Scalar ma = std::abs(values(a));
    const Scalar mb = std::abs(values(b));
    if (std::abs(ma - mb) > tie) return ma > mb;
    if (std::abs(values(a) - values(b)) > tie) return values(a) > values(b);
    return detail::first_max_coordinate(vectors.col(a)) <
           detail::first_max_coordinate(vectors.col(b));
  });

  Eigenpairs<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const Scalar zero_tol = Scalar(1e-12);
  for (Index c = 0; c < n; ++c) {
    out.values(c) = values(order[c]);
    auto col = out.vectors.col(c);
    col = vectors.col(order[c]).normalized();
    for (Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > zero_tol) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
  }
  return out;
}

/// The k eigenpairs of largest |eigenvalue| under the ordering above.
template <typename Derived>
Eigenpairs<typename Derived::Scalar> top_eigenpairs(const Eigen::MatrixBase<Derived>& m, Index k) {
  if (k < 1 || k > m.rows()) throw DataError("top_eigenpairs: k must lie in [1, n]");
  auto all = ordered_eigenpairs(m);
  all.values.conservativeResize(k);
  all.vectors.conservativeResize(Eigen::NoChange, k);
  return all;
}

/// Rows of the top-k Laplacian eigenvectors (the matrix U).
Eigen::MatrixXd spectral_embed(const Eigen::MatrixXd& laplacian, Index k);
Eigen::MatrixXd spectral_embed(const Eigenpairs<double>& laplacian_basis, Index k);

/// Ratio embedding (1, v2/v1, ..., vk/v1) of the adjacency eigenvectors, with
/// ratios clipped to [-log n, log n]. Throws NumericalError when some
/// |v1_i| < 1e-12.
Eigen::MatrixXd score_embed(const Adjacency& a, Index k);
Eigen::MatrixXd score_embed(const Eigenpairs<double>& adjacency_basis, Index k);

inline constexpr double kScoreZeroTolerance = 1e-12;

}  // namespace clbic
