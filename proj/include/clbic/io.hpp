#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clbic/graph.hpp"
#include "clbic/selection.hpp"

namespace clbic {

struct NamedGraph {
  Adjacency graph;
  std::vector<std::string> names;
};

/// "u v" per line; '#' starts a comment. Identifiers are arbitrary tokens
/// numbered by first appearance. Duplicate and reversed pairs collapse;
/// self-loops and lines without exactly two tokens are DataErrors naming the
/// line.
NamedGraph parse_edge_list(std::istream& in);
NamedGraph parse_edge_list(const std::filesystem::path& path);

struct WeightMatrix {
  Eigen::MatrixXd weights;  // symmetrized: W_ij = X_ij + X_ji
  std::vector<std::string> names;
};

/// Square nonnegative matrix with a header row of node names. Cells are split
/// on commas, else tabs, else whitespace; a leading label cell on the header
/// and on each row is accepted.
WeightMatrix read_weight_matrix(std::istream& in);
WeightMatrix read_weight_matrix(const std::filesystem::path& path);

enum class QuantileConvention {
  Lower,   // largest value whose empirical CDF is <= alpha
  Higher,  // smallest value whose empirical CDF is >= alpha
  Linear,  // linear interpolation between order statistics (R type 7)
};

QuantileConvention parse_quantile_convention(const std::string& name);
std::string to_string(QuantileConvention c);

double weight_quantile(std::vector<double> values, double alpha, QuantileConvention c);

/// A_ij = 1 iff W_ij >= the alpha-quantile of {W_ij}_{i<j}.
Adjacency weights_to_adjacency(const Eigen::MatrixXd& w, double alpha,
                               QuantileConvention c = QuantileConvention::Lower);

/// Serialized run_select output: '#'-prefixed key=value metadata, then the
/// per-k table, then the node labelings of both chosen models.
struct SelectionFile {
  std::map<std::string, std::string> metadata;
  std::vector<SelectionRecord> records;  // labelings not stored per record
  int chosen_clbic = 0;
  int chosen_bic = 0;
  std::vector<std::string> node_names;
  std::vector<int> labels_clbic;  // 1-based
  std::vector<int> labels_bic;
};

SelectionFile to_selection_file(const SelectionResult& result,
                                const std::vector<std::string>& node_names,
                                std::map<std::string, std::string> metadata);

void write_selection(std::ostream& out, const SelectionFile& file);
SelectionFile read_selection(std::istream& in);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace clbic
