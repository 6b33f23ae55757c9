#pragma once

#include <Eigen/Dense>

namespace clbic {

/// Assignment of nodes to k communities. Labels are 0-based internally;
/// files and reports print them 1-based.
struct Labeling {
  int k = 0;
  Eigen::VectorXi labels;
  bool degenerate = false;  // at least one community is empty

  Eigen::Index size() const { return labels.size(); }
  Eigen::VectorXi sizes() const;
};

/// Throws DataError if a label falls outside [0, k). Sets `degenerate`.
Labeling make_labeling(Eigen::VectorXi labels, int k);

inline Labeling single_community(Eigen::Index n) {
  return make_labeling(Eigen::VectorXi::Zero(n), 1);
}

enum class Model { Sbm, Dcbm };

}  // namespace clbic
