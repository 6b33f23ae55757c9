#include "clbic/labeling.hpp"

#include <string>

#include "clbic/error.hpp"

namespace clbic {

Eigen::VectorXi Labeling::sizes() const {
  Eigen::VectorXi s = Eigen::VectorXi::Zero(k);
  for (Eigen::Index i = 0; i < labels.size(); ++i) ++s(labels(i));
  return s;
}

Labeling make_labeling(Eigen::VectorXi labels, int k) {
  if (k < 1) throw DataError("labeling needs at least one community");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) < 0 || labels(i) >= k) {
      throw DataError("label " + std::to_string(labels(i)) + " of node " + std::to_string(i) +
                      " outside [0, " + std::to_string(k) + ")");
    }
  }
  Labeling z{k, std::move(labels), false};
  z.degenerate = (z.sizes().array() == 0).any();
  return z;
}

}  // namespace clbic
