#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace clbic {

using Index = Eigen::Index;

/// Symmetric 0/1 adjacency matrix of an undirected simple graph.
///
/// Instances can only be obtained through validate(), so every Adjacency in
/// the program is symmetric, binary and has an empty diagonal.
class Adjacency {
 public:
  Adjacency() = default;

  /// Checks the invariants and takes a copy. Throws DataError when the input
  /// is not square, not symmetric, has a nonzero diagonal or a non-binary
  /// entry. Nothing is symmetrized.
  static Adjacency validate(const Eigen::Ref<const Eigen::MatrixXi>& raw);

  Index size() const { return entries_.rows(); }
  int operator()(Index i, Index j) const { return entries_(i, j); }
  const Eigen::MatrixXi& matrix() const { return entries_; }

  std::int64_t edge_count() const;

  /// Subgraph induced by `nodes`, in the given order.
  Adjacency induced(std::span<const Index> nodes) const;

 private:
  explicit Adjacency(Eigen::MatrixXi entries) : entries_(std::move(entries)) {}

  Eigen::MatrixXi entries_;
};

Eigen::VectorXi degrees(const Adjacency& a);

/// D^{-1/2} A D^{-1/2}. Throws DataError if some node is isolated.
Eigen::MatrixXd laplacian(const Adjacency& a);

struct Component {
  Adjacency graph;
  std::vector<Index> original_index;  // new index -> index in the parent graph
};

/// Induced subgraph on the largest connected component. Ties go to the
/// component containing the smallest node index.
Component largest_connected_component(const Adjacency& a);

}  // namespace clbic
