#include "clbic/netgen.hpp"

#include <cmath>
#include <string>

#include "clbic/error.hpp"
#include "clbic/normal.hpp"
#include "clbic/rng.hpp"

namespace clbic {

double CorrelationStructure::at(Index j, Index l) const {
  if (j == l) return 1.0;
  switch (kind) {
    case CorrelationKind::None:
      return 0.0;
    case CorrelationKind::Equal:
      return rho;
    case CorrelationKind::Decaying:
      return std::pow(rho, static_cast<double>(std::abs(j - l)));
  }
  return 0.0;
}

double OmegaDist::supremum() const {
  switch (kind) {
    case OmegaKind::ConstantOne:
      return 1.0;
    case OmegaKind::KnMixture:
      return 2.0;
    case OmegaKind::Uniform:
      return hi;
  }
  return 1.0;
}

Eigen::VectorXd draw_omega(const OmegaDist& dist, Index n, std::mt19937_64& rng) {
  Eigen::VectorXd out = Eigen::VectorXd::Ones(n);
  switch (dist.kind) {
    case OmegaKind::ConstantOne:
      break;
    case OmegaKind::KnMixture: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::uniform_real_distribution<double> eta(0.0, 2.0);
      for (Index i = 0; i < n; ++i) {
        const double u = unit(rng);
        out(i) = u < 0.8 ? eta(rng) : (u < 0.9 ? 2.0 / 11.0 : 20.0 / 11.0);
      }
      break;
    }
    case OmegaKind::Uniform: {
      std::uniform_real_distribution<double> draw(dist.lo, dist.hi);
      for (Index i = 0; i < n; ++i) out(i) = draw(rng);
      break;
    }
  }
  return out;
}

Eigen::VectorXd draw_omega(const OmegaDist& dist, Index n, std::uint64_t seed) {
  auto rng = make_engine(seed);
  return draw_omega(dist, n, rng);
}

Index SimSpec::nodes() const {
  Index n = 0;
  for (int s : sizes) n += s;
  return n;
}

namespace {

void validate_structure(const CorrelationStructure& s, const char* what) {
  const std::string name(what);
  switch (s.kind) {
    case CorrelationKind::None:
      return;
    case CorrelationKind::Equal:
      if (s.rho < 0.0 || s.rho > 1.0) {
        throw DataError(name + ": equal correlation must lie in [0, 1]");
      }
      return;
    case CorrelationKind::Decaying:
      if (std::abs(s.rho) > 1.0) throw DataError(name + ": decaying correlation needs |rho| <= 1");
      return;
  }
}

}  // namespace

void SimSpec::validate() const {
  if (sizes.empty()) throw DataError("simulation needs at least one community");
  for (int s : sizes) {
    if (s < 1) throw DataError("community sizes must be positive");
  }
  const int kk = k();
  if (theta.rows() != kk || theta.cols() != kk) {
    throw DataError("theta must be " + std::to_string(kk) + "x" + std::to_string(kk));
  }
  if ((theta - theta.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw DataError("theta must be symmetric");
  }
  if (theta.minCoeff() < 0.0) throw DataError("theta entries must be nonnegative");
  if (reps < 1) throw DataError("reps must be positive");
  if (model == Model::Sbm) {
    if (theta.maxCoeff() > 1.0) throw DataError("SBM probabilities must lie in [0, 1]");
    if (omega.kind != OmegaKind::ConstantOne) throw DataError("SBM specs take constant omega");
    if (gamma != 1.0) throw DataError("gamma applies to DCBM specs only");
  } else {
    if (!(gamma > 0.0)) throw DataError("gamma must be positive");
    if (omega.kind == OmegaKind::Uniform && !(omega.lo >= 0.0 && omega.lo < omega.hi)) {
      throw DataError("uniform omega needs 0 <= lo < hi");
    }
    const double sup = omega.supremum();
    if (sup * sup * gamma * theta.maxCoeff() > 1.0) {
      throw DataError("omega_i omega_j gamma theta_ab can exceed 1 for this spec");
    }
  }
  validate_structure(corr.within, "within correlation");
  validate_structure(corr.between, "between correlation");
  if (corr.scope == CorrelationScope::Global && corr.between.kind != CorrelationKind::None) {
    throw DataError("global correlation scope takes a single structure");
  }
}

Labeling planted_labels(const std::vector<int>& sizes) {
  Index n = 0;
  for (int s : sizes) n += s;
  Eigen::VectorXi labels(n);
  Index at = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    labels.segment(at, sizes[c]).setConstant(static_cast<int>(c));
    at += sizes[c];
  }
  return make_labeling(std::move(labels), static_cast<int>(sizes.size()));
}

Eigen::VectorXi correlated_bernoulli_row(const Eigen::VectorXd& mus, const Eigen::MatrixXd& corr,
                                         std::mt19937_64& rng) {
  const Index m = mus.size();
  if (corr.rows() != m || corr.cols() != m) throw DataError("correlation matrix size mismatch");
  if ((corr - corr.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DataError("correlation matrix is not symmetric");
  }
  if ((corr.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12) {
    throw DataError("correlation matrix needs a unit diagonal");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(corr);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() < -1e-10) {
    throw DataError("correlation matrix is not positive semidefinite");
  }
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(m);
  for (Index j = 0; j < m; ++j) z(j) = normal(rng);
  const Eigen::VectorXd scaled = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt().cwiseProduct(z);
  Eigen::VectorXd w = ldlt.matrixL() * scaled;
  w = ldlt.transpositionsP().transpose() * w;
  Eigen::VectorXi out(m);
  for (Index j = 0; j < m; ++j) out(j) = w(j) >= -mus(j) ? 1 : 0;
  return out;
}

Eigen::VectorXi correlated_bernoulli_row(const Eigen::VectorXd& mus, const Eigen::MatrixXd& corr,
                                         std::uint64_t seed) {
  auto rng = make_engine(seed);
  return correlated_bernoulli_row(mus, corr, rng);
}

NetworkGenerator::NetworkGenerator(SimSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  planted_ = planted_labels(spec_.sizes);
  if (spec_.corr.scope == CorrelationScope::Blockwise &&
      spec_.corr.between.kind != CorrelationKind::None) {
    const Index n = spec_.nodes();
    Eigen::MatrixXd reversed(n, n);
    for (Index r = 0; r < n; ++r) {
      for (Index s = 0; s < n; ++s) {
        const Index j = n - 1 - r;
        const Index l = n - 1 - s;
        const bool same = planted_.labels(j) == planted_.labels(l);
        reversed(r, s) = same ? spec_.corr.within.at(j, l) : spec_.corr.between.at(j, l);
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(reversed);
    if (llt.info() != Eigen::Success) {
      throw DataError("blockwise correlation structure is not positive definite");
    }
    reversed_factor_ = llt.matrixL();
  }
}

namespace {

// Fills w(pos[0..]) for the coordinate indices `cols` (ascending) with unit
// Gaussians correlated by `s`.
void structured_gaussians(const CorrelationStructure& s, const std::vector<Index>& cols,
                          Index offset, std::mt19937_64& rng, Eigen::VectorXd& w) {
  std::normal_distribution<double> normal;
  switch (s.kind) {
    case CorrelationKind::None:
      for (Index j : cols) w(j - offset) = normal(rng);
      return;
    case CorrelationKind::Equal: {
      const double shared = std::sqrt(s.rho) * normal(rng);
      const double own = std::sqrt(1.0 - s.rho);
      for (Index j : cols) w(j - offset) = shared + own * normal(rng);
      return;
    }
    case CorrelationKind::Decaying: {
      double prev = 0.0;
      Index prev_j = -1;
      for (Index j : cols) {
        if (prev_j < 0) {
          prev = normal(rng);
        } else {
          const double r = std::pow(s.rho, static_cast<double>(j - prev_j));
          prev = r * prev + std::sqrt(std::max(0.0, 1.0 - r * r)) * normal(rng);
        }
        prev_j = j;
        w(j - offset) = prev;
      }
      return;
    }
  }
}

}  // namespace

void NetworkGenerator::fill_gaussians(Index i, std::mt19937_64& rng, Eigen::VectorXd& w) const {
  const Index n = spec_.nodes();
  const Index m = n - 1 - i;
  w.resize(m);
  if (m == 0) return;
  const CorrelationSpec& corr = spec_.corr;

  if (reversed_factor_.size() > 0) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(m);
    for (Index t = 0; t < m; ++t) z(t) = normal(rng);
    // Leading block of the reversed factor is the factor of the trailing
    // principal submatrix over columns j > i.
    const Eigen::VectorXd rev =
        reversed_factor_.topLeftCorner(m, m).triangularView<Eigen::Lower>() * z;
    for (Index t = 0; t < m; ++t) w(m - 1 - t) = rev(t);
    return;
  }

  if (corr.scope == CorrelationScope::Global) {
    std::vector<Index> cols(m);
    for (Index t = 0; t < m; ++t) cols[t] = i + 1 + t;
    structured_gaussians(corr.within, cols, i + 1, rng, w);
    return;
  }
  std::vector<std::vector<Index>> groups(spec_.k());
  for (Index j = i + 1; j < n; ++j) groups[planted_.labels(j)].push_back(j);
  for (const auto& g : groups) {
    if (!g.empty()) structured_gaussians(corr.within, g, i + 1, rng, w);
  }
}

SimulatedNetwork NetworkGenerator::operator()(int rep) const {
  const Index n = spec_.nodes();
  const auto r = static_cast<std::uint64_t>(rep);
  SimulatedNetwork out;
  out.planted = planted_;
  out.omega = spec_.model == Model::Dcbm
                  ? draw_omega(spec_.omega, n, stream_seed(spec_.seed, {r, kStreamOmega}))
                  : Eigen::VectorXd::Ones(n);

  out.edge_probs = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      double p = spec_.theta(planted_.labels(i), planted_.labels(j));
      if (spec_.model == Model::Dcbm) p *= spec_.gamma * out.omega(i) * out.omega(j);
      out.edge_probs(i, j) = p;
    }
  }

  auto rng = make_engine(stream_seed(spec_.seed, {r, kStreamGraph}));
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  Eigen::VectorXd w;
  for (Index i = 0; i + 1 < n; ++i) {
    fill_gaussians(i, rng, w);
    for (Index j = i + 1; j < n; ++j) {
      const double p = out.edge_probs(i, j);
      int edge = 0;
      if (p >= 1.0) {
        edge = 1;
      } else if (p > 0.0) {
        edge = w(j - i - 1) >= -threshold_from_theta(p) ? 1 : 0;
      }
      a(i, j) = edge;
      a(j, i) = edge;
    }
  }
  out.graph = Adjacency::validate(a);

  if (spec_.model == Model::Dcbm) {
    DcbmParams params;
    params.k = spec_.k();
    params.theta.resize(pair_count(spec_.k()));
    for (int x = 0; x < spec_.k(); ++x) {
      for (int y = x; y < spec_.k(); ++y) {
        params.theta(pair_index(x, y, spec_.k())) = spec_.gamma * spec_.theta(x, y);
      }
    }
    params.omega = out.omega;
    params.zero_degree_community = FlagVector::Constant(spec_.k(), false);
    out.planted_params = std::move(params);
  }
  return out;
}

SimulatedNetwork generate(const SimSpec& spec, int rep) { return NetworkGenerator(spec)(rep); }

}  // namespace clbic
