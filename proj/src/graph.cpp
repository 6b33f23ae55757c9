#include "clbic/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "clbic/error.hpp"

namespace clbic {

Adjacency Adjacency::validate(const Eigen::Ref<const Eigen::MatrixXi>& raw) {
  if (raw.rows() != raw.cols()) {
    throw DataError("adjacency matrix is not square (" + std::to_string(raw.rows()) + "x" +
                    std::to_string(raw.cols()) + ")");
  }
  const Index n = raw.rows();
  for (Index j = 0; j < n; ++j) {
    if (raw(j, j) != 0) {
      throw DataError("adjacency matrix has a nonzero diagonal entry at node " + std::to_string(j));
    }
    for (Index i = 0; i < n; ++i) {
      const int v = raw(i, j);
      if (v != 0 && v != 1) {
        throw DataError("adjacency entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") is not 0/1");
      }
      if (v != raw(j, i)) {
        throw DataError("adjacency matrix is asymmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
  return Adjacency(raw);
}

std::int64_t Adjacency::edge_count() const {
  return entries_.cast<std::int64_t>().sum() / 2;
}

Adjacency Adjacency::induced(std::span<const Index> nodes) const {
  const auto m = static_cast<Index>(nodes.size());
  Eigen::MatrixXi sub(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) sub(i, j) = entries_(nodes[i], nodes[j]);
  }
  return Adjacency(std::move(sub));
}

Eigen::VectorXi degrees(const Adjacency& a) { return a.matrix().rowwise().sum(); }

Eigen::MatrixXd laplacian(const Adjacency& a) {
  const Eigen::VectorXi d = degrees(a);
  for (Index i = 0; i < d.size(); ++i) {
    if (d(i) == 0) {
      throw DataError("laplacian undefined: node " + std::to_string(i) + " is isolated");
    }
  }
  const Eigen::VectorXd inv_sqrt = d.cast<double>().array().rsqrt();
  return inv_sqrt.asDiagonal() * a.matrix().cast<double>() * inv_sqrt.asDiagonal();
}

Component largest_connected_component(const Adjacency& a) {
  const Index n = a.size();
  std::vector<int> component(n, -1);
  std::vector<std::vector<Index>> members;
  for (Index start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    std::deque<Index> queue{start};
    component[start] = id;
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      members.back().push_back(u);
      for (Index v = 0; v < n; ++v) {
        if (a(u, v) && component[v] < 0) {
          component[v] = id;
          queue.push_back(v);
        }
      }
    }
  }
  if (members.empty()) return {};

  // Components are discovered in order of their smallest node, so the first
  // maximum wins ties.
  std::size_t best = 0;
  for (std::size_t c = 1; c < members.size(); ++c) {
    if (members[c].size() > members[best].size()) best = c;
  }
  std::vector<Index> nodes = members[best];
  std::sort(nodes.begin(), nodes.end());
  Adjacency sub = a.induced(nodes);
  return {std::move(sub), std::move(nodes)};
}

}  // namespace clbic
