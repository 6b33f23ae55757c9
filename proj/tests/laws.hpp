#pragma once

#include <cmath>
#include <string>

#include "clbic/netgen.hpp"
#include "support.hpp"

namespace testing {

/// Monte Carlo check of the edge law of NetworkGenerator on rows 0 and 1:
/// marginal edge rates, joint rates of pairs in row 0 against the bivariate
/// orthant probability, and joint rates across rows 0 and 1 against the
/// product of marginals. Every statistic is reported as a z-score.
struct LawCheck {
  int checks = 0;
  int outside = 0;  // |z| > 3
  double worst = 0.0;
  std::string worst_label;

  void add(double observed, double expected, int draws, const std::string& label) {
    const double se = std::sqrt(std::max(expected * (1 - expected), 1e-300) / draws);
    const double z = std::abs(observed - expected) / se;
    ++checks;
    if (z > 3.0) ++outside;
    if (z > worst) {
      worst = z;
      worst_label = label;
    }
  }
};

inline double correlation_between(const clbic::SimSpec& spec, const clbic::Labeling& z, Index j,
                                  Index l) {
  if (spec.corr.scope == clbic::CorrelationScope::Global) return spec.corr.within.at(j, l);
  return z.labels(j) == z.labels(l) ? spec.corr.within.at(j, l) : spec.corr.between.at(j, l);
}

inline LawCheck check_generator_laws(const clbic::SimSpec& spec, int draws) {
  const clbic::NetworkGenerator gen(spec);
  const Index n = spec.nodes();
  Eigen::MatrixXd single = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd row0_pairs = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd probs;
  for (int r = 0; r < draws; ++r) {
    const clbic::SimulatedNetwork net = gen(r);
    if (r == 0) probs = net.edge_probs;
    const auto& a = net.graph;
    for (Index j = 1; j < n; ++j) {
      single(0, j) += a(0, j);
      if (j >= 2) single(1, j) += a(1, j);
      for (Index l = j + 1; l < n; ++l) row0_pairs(j, l) += a(0, j) * a(0, l);
      if (j >= 2) {
        for (Index l = 2; l < n; ++l) cross(j, l) += a(0, j) * a(1, l);
      }
    }
  }
  const clbic::Labeling z = clbic::planted_labels(spec.sizes);
  LawCheck out;
  for (Index j = 1; j < n; ++j) {
    out.add(single(0, j) / draws, probs(0, j), draws, "mean A(0," + std::to_string(j) + ")");
    for (Index l = j + 1; l < n; ++l) {
      const double mj = bisect_quantile(probs(0, j));
      const double ml = bisect_quantile(probs(0, l));
      const double rho = correlation_between(spec, z, j, l);
      const double expected = std::abs(rho) < 1 ? simpson_orthant(-mj, -ml, rho)
                                                : std::min(probs(0, j), probs(0, l));
      out.add(row0_pairs(j, l) / draws, expected, draws,
              "joint A(0," + std::to_string(j) + ") A(0," + std::to_string(l) + ")");
    }
  }
  for (Index j = 2; j < n; ++j) {
    for (Index l = 2; l < n; ++l) {
      out.add(cross(j, l) / draws, probs(0, j) * probs(1, l), draws,
              "cross A(0," + std::to_string(j) + ") A(1," + std::to_string(l) + ")");
    }
  }
  return out;
}

inline clbic::SimSpec law_spec(clbic::CorrelationKind kind, double rho,
                               clbic::CorrelationScope scope = clbic::CorrelationScope::Global,
                               clbic::CorrelationStructure between = {}) {
  clbic::SimSpec spec;
  spec.sizes = {2, 2};
  spec.theta.resize(2, 2);
  spec.theta << 0.35, 0.2, 0.2, 0.5;
  spec.corr.scope = scope;
  spec.corr.within = {kind, rho};
  spec.corr.between = between;
  spec.seed = 424242;
  return spec;
}

}  // namespace testing
