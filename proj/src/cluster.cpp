#include "clbic/cluster.hpp"

namespace clbic {

SpectralClusterer::SpectralClusterer(const Adjacency& a, Model model, KMeansOptions options)
    : graph_(&a), model_(model), options_(options) {}

const Eigenpairs<double>& SpectralClusterer::basis() const {
  if (!basis_) {
    basis_ = model_ == Model::Sbm ? ordered_eigenpairs(laplacian(*graph_))
                                  : ordered_eigenpairs(graph_->matrix().cast<double>());
  }
  return *basis_;
}

Eigen::MatrixXd SpectralClusterer::embedding(int k) const {
  return model_ == Model::Sbm ? spectral_embed(basis(), k) : score_embed(basis(), k);
}

Labeling SpectralClusterer::operator()(int k, std::uint64_t seed) const {
  if (k < 1 || k > graph_->size()) throw DataError("cluster: k must lie in [1, n]");
  if (k == 1) return single_community(graph_->size());
  return kmeans(embedding(k), k, seed, options_);
}

Labeling cluster(const Adjacency& a, int k, Model model, std::uint64_t seed) {
  return SpectralClusterer(a, model)(k, seed);
}

}  // namespace clbic
