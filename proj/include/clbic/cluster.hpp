#pragma once

#include <cstdint>
#include <optional>

#include "clbic/graph.hpp"
#include "clbic/kmeans.hpp"
#include "clbic/labeling.hpp"
#include "clbic/spectral.hpp"

namespace clbic {

/// Spectral community detection for one graph across many candidate k.
///
/// The eigendecomposition (of the Laplacian for Model::Sbm, of A for
/// Model::Dcbm) is computed once on first use; every k then reuses its
/// leading columns, which gives the same embedding as a fresh top-k solve.
class SpectralClusterer {
 public:
  SpectralClusterer(const Adjacency& a, Model model, KMeansOptions options = {});

  /// k = 1 short-circuits to the all-ones labeling without an eigensolve.
  Labeling operator()(int k, std::uint64_t seed) const;

  Eigen::MatrixXd embedding(int k) const;

 private:
  const Eigenpairs<double>& basis() const;

  const Adjacency* graph_;
  Model model_;
  KMeansOptions options_;
  mutable std::optional<Eigenpairs<double>> basis_;
};

/// Spectral clustering (SBM) or SCORE (DCBM) followed by k-means.
Labeling cluster(const Adjacency& a, int k, Model model, std::uint64_t seed);

}  // namespace clbic
