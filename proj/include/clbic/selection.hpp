#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clbic/blockmodel.hpp"
#include "clbic/graph.hpp"
#include "clbic/kmeans.hpp"
#include "clbic/labeling.hpp"

namespace clbic {

/// Diagonal of the estimated sensitivity matrix H_k, one entry per block
/// pair. Blocks whose estimate sits on the boundary of the parameter space
/// are excluded from every complexity sum.
struct HessianDiagonal {
  Eigen::VectorXd values;
  FlagVector excluded;

  Index excluded_count() const { return excluded.count(); }
};

/// SBM: sum over pairs in the block of A/theta^2 + (1 - A)/(1 - theta)^2.
/// Blocks with theta in {0, 1} or no node pairs are excluded.
HessianDiagonal hessian_diag(const BlockCounts& counts, const SbmParams& params);

/// DCBM: 1/theta_ab, with theta_ab = 0 excluded.
HessianDiagonal hessian_diag(const DcbmParams& params);

/// Leave-one-vertex-out covariance of the block estimates, labels held fixed.
struct JackknifeCovariance {
  Eigen::MatrixXd matrix;     // pair_count(k) square
  int flagged_deletions = 0;  // (deletion, block) combinations left undefined
};

JackknifeCovariance jackknife_cov(const Adjacency& a, const Labeling& z, Model model);
JackknifeCovariance jackknife_cov(const Eigen::MatrixXi& community_degrees, const BlockCounts& counts,
                                  const Labeling& z, Model model);

/// trace(Var_jack * H) over the non-excluded blocks.
double complexity_dhat(const HessianDiagonal& h, const JackknifeCovariance& v);

/// -2 loglik + complexity * log(N (N - 1) / 2).
double criterion(double loglik, double complexity, Index n);

struct SelectionRecord {
  int k = 0;
  double loglik = 0.0;
  double d_hat = 0.0;
  double clbic = 0.0;
  double bic = 0.0;
  int bic_dimension = 0;  // estimable block parameters
  int excluded_blocks = 0;
  int flagged_deletions = 0;
  bool degenerate_labeling = false;
  Labeling labeling;

  std::string flags() const;
};

struct SelectionResult {
  std::vector<SelectionRecord> records;  // ascending k
  int chosen_clbic = 0;
  int chosen_bic = 0;

  const SelectionRecord& record(int k) const;
};

struct KRange {
  int min = 1;
  int max = 18;
};

enum class ComplexityMode {
  Jackknife,       // d_hat from the jackknife: CL-BIC
  ParameterCount,  // d_hat replaced by the BIC dimension
};

struct SelectOptions {
  KMeansOptions kmeans;
  ComplexityMode complexity = ComplexityMode::Jackknife;
};

/// Evaluates one candidate k on a fixed labeling.
SelectionRecord evaluate_candidate(const Adjacency& a, const Labeling& z, Model model,
                                   ComplexityMode mode = ComplexityMode::Jackknife);

/// Clusters for every k in `range`, fits, and picks argmin CL-BIC and argmin
/// BIC (ties to the smaller k). Deterministic given `seed`.
SelectionResult select_k(const Adjacency& a, KRange range, Model model, std::uint64_t seed,
                         const SelectOptions& options = {});

}  // namespace clbic
