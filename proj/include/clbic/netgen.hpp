#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "clbic/blockmodel.hpp"
#include "clbic/graph.hpp"
#include "clbic/labeling.hpp"

namespace clbic {

enum class CorrelationKind { None, Equal, Decaying };

/// Gaussian correlation between coordinates j != l: rho (Equal) or
/// rho^|j - l| (Decaying), with j, l the original node indices.
struct CorrelationStructure {
  CorrelationKind kind = CorrelationKind::None;
  double rho = 0.0;

  double at(Index j, Index l) const;
};

enum class CorrelationScope {
  Global,     // `within` spans every coordinate of a row, across communities
  Blockwise,  // `within` among same-community coordinates, `between` across
};

struct CorrelationSpec {
  CorrelationScope scope = CorrelationScope::Global;
  CorrelationStructure within;
  CorrelationStructure between;
};

enum class OmegaKind { ConstantOne, KnMixture, Uniform };

/// Degree-effect distribution, unit mean in every case:
///  - KnMixture: Uniform[0, 2] w.p. 0.8, 2/11 w.p. 0.1, 20/11 w.p. 0.1
///  - Uniform: Uniform(lo, hi)
struct OmegaDist {
  OmegaKind kind = OmegaKind::ConstantOne;
  double lo = 0.2;
  double hi = 1.8;

  double supremum() const;
};

Eigen::VectorXd draw_omega(const OmegaDist& dist, Index n, std::mt19937_64& rng);
Eigen::VectorXd draw_omega(const OmegaDist& dist, Index n, std::uint64_t seed);

struct SimSpec {
  std::vector<int> sizes;
  Eigen::MatrixXd theta;  // k x k symmetric; probabilities (SBM) or base rates (DCBM)
  double gamma = 1.0;     // DCBM scale
  CorrelationSpec corr;
  OmegaDist omega;
  Model model = Model::Sbm;
  int reps = 1;
  std::uint64_t seed = 0;

  int k() const { return static_cast<int>(sizes.size()); }
  Index nodes() const;

  /// Throws DataError on inconsistent dimensions, probabilities outside
  /// [0, 1], omega_i omega_j gamma theta_ab that could exceed 1, or
  /// unsupported correlation parameters.
  void validate() const;
};

/// Planted communities in contiguous index blocks of the given sizes.
Labeling planted_labels(const std::vector<int>& sizes);

/// Draws a Gaussian vector with correlation `corr` and returns the indicators
/// W_j >= -mu_j, so coordinate j is Bernoulli(Phi(mu_j)). Throws DataError if
/// `corr` is not a PSD correlation matrix.
Eigen::VectorXi correlated_bernoulli_row(const Eigen::VectorXd& mus, const Eigen::MatrixXd& corr,
                                         std::mt19937_64& rng);
Eigen::VectorXi correlated_bernoulli_row(const Eigen::VectorXd& mus, const Eigen::MatrixXd& corr,
                                         std::uint64_t seed);

struct SimulatedNetwork {
  Adjacency graph;
  Labeling planted;
  Eigen::VectorXd omega;       // all ones for SBM
  Eigen::MatrixXd edge_probs;  // P_ij off the diagonal, zero on it
  std::optional<DcbmParams> planted_params;
};

/// Correlation-contaminated blockmodel sampler. Rows of the upper triangle
/// are drawn independently; within a row, coordinates are thresholded
/// Gaussians correlated according to the spec. Replicate r is a pure
/// function of (spec, r).
class NetworkGenerator {
 public:
  explicit NetworkGenerator(SimSpec spec);

  SimulatedNetwork operator()(int rep) const;
  const SimSpec& spec() const { return spec_; }

 private:
  void fill_gaussians(Index i, std::mt19937_64& rng, Eigen::VectorXd& w) const;

  SimSpec spec_;
  Labeling planted_;
  // Lower Cholesky factor of the reversed full correlation matrix; only for
  // blockwise specs with a between-community structure.
  Eigen::MatrixXd reversed_factor_;
};

SimulatedNetwork generate(const SimSpec& spec, int rep);

}  // namespace clbic
