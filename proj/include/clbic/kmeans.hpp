#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "clbic/labeling.hpp"

namespace clbic {

struct KMeansOptions {
  int restarts = 20;
  int max_iterations = 300;
  double tolerance = 1e-9;  // relative WCSS improvement that ends Lloyd iterations
};

struct LloydResult {
  Eigen::VectorXi labels;
  Eigen::MatrixXd centers;           // k x dim
  std::vector<double> wcss_history;  // after each update step
  double wcss = 0.0;
};

/// k-means++ seeding: k distinct rows of `points` chosen with D^2 weighting.
/// Requires at least k distinct rows.
Eigen::MatrixXd kmeanspp_centers(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng);

/// Lloyd iterations from the given centers. Empty clusters are re-seeded with
/// the point farthest from its current center.
LloydResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers,
                  const KMeansOptions& options = {});

/// Best of `options.restarts` k-means++/Lloyd runs by within-cluster sum of
/// squares; deterministic given `seed`. When there are fewer distinct rows
/// than k, identical rows share a label and the result is flagged degenerate.
Labeling kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                const KMeansOptions& options = {});

double within_cluster_ss(const Eigen::MatrixXd& points, const Eigen::VectorXi& labels, int k);

}  // namespace clbic
