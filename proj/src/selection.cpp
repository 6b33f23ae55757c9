#include "clbic/selection.hpp"

#include <cmath>
#include <string>

#include "clbic/cluster.hpp"
#include "clbic/error.hpp"
#include "clbic/rng.hpp"

namespace clbic {

HessianDiagonal hessian_diag(const BlockCounts& counts, const SbmParams& params) {
  const Index p_count = counts.pairs.size();
  HessianDiagonal h{Eigen::VectorXd::Zero(p_count), FlagVector::Constant(p_count, false)};
  for (Index p = 0; p < p_count; ++p) {
    const double theta = params.theta(p);
    if (counts.pairs(p) == 0 || theta <= 0.0 || theta >= 1.0) {
      h.excluded(p) = true;
      continue;
    }
    const auto m = static_cast<double>(counts.edges(p));
    const auto n = static_cast<double>(counts.pairs(p));
    h.values(p) = m / (theta * theta) + (n - m) / ((1.0 - theta) * (1.0 - theta));
  }
  return h;
}

HessianDiagonal hessian_diag(const DcbmParams& params) {
  const Index p_count = params.theta.size();
  HessianDiagonal h{Eigen::VectorXd::Zero(p_count), FlagVector::Constant(p_count, false)};
  for (Index p = 0; p < p_count; ++p) {
    if (params.theta(p) <= 0.0) {
      h.excluded(p) = true;
    } else {
      h.values(p) = 1.0 / params.theta(p);
    }
  }
  return h;
}

JackknifeCovariance jackknife_cov(const Eigen::MatrixXi& cdeg, const BlockCounts& counts,
                                  const Labeling& z, Model model) {
  const int k = z.k;
  const Index n = z.size();
  if (n < 3) throw DataError("jackknife needs at least 3 nodes");
  const Index p_count = pair_count(k);

  Eigen::VectorXd theta(p_count);
  for (Index p = 0; p < p_count; ++p) {
    const auto m = static_cast<double>(counts.edges(p));
    if (model == Model::Dcbm) {
      theta(p) = m;
    } else {
      theta(p) = counts.pairs(p) > 0 ? m / static_cast<double>(counts.pairs(p)) : 0.0;
    }
  }

  JackknifeCovariance out{Eigen::MatrixXd::Zero(p_count, p_count), 0};
  // Only the k blocks touching the deleted node's community move.
  Eigen::VectorXd delta(k);
  std::vector<Index> touched(k);
  for (Index l = 0; l < n; ++l) {
    const int c = z.labels(l);
    const std::int64_t size_c = counts.sizes(c) - 1;
    for (int b = 0; b < k; ++b) {
      const Index p = pair_index(c, b, k);
      touched[b] = p;
      const std::int64_t m_left = counts.edges(p) - cdeg(l, b);
      std::int64_t pairs_left = 0;
      if (b == c) {
        pairs_left = size_c * (size_c - 1) / 2;
      } else {
        pairs_left = size_c * counts.sizes(b);
      }
      const bool undefined = model == Model::Dcbm ? size_c == 0 : pairs_left == 0;
      if (undefined) {
        ++out.flagged_deletions;
        delta(b) = 0.0;
        continue;
      }
      const double theta_left = model == Model::Dcbm
                                    ? static_cast<double>(m_left)
                                    : static_cast<double>(m_left) / static_cast<double>(pairs_left);
      delta(b) = theta_left - theta(p);
    }
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) out.matrix(touched[a], touched[b]) += delta(a) * delta(b);
    }
  }
  out.matrix *= static_cast<double>(n - 1) / static_cast<double>(n);
  return out;
}

JackknifeCovariance jackknife_cov(const Adjacency& a, const Labeling& z, Model model) {
  const Eigen::MatrixXi cdeg = community_degrees(a, z);
  return jackknife_cov(cdeg, block_counts(cdeg, z), z, model);
}

double complexity_dhat(const HessianDiagonal& h, const JackknifeCovariance& v) {
  if (v.matrix.rows() != h.values.size()) {
    throw DataError("complexity_dhat: Hessian and covariance dimensions differ");
  }
  double total = 0.0;
  for (Index p = 0; p < h.values.size(); ++p) {
    if (!h.excluded(p)) total += v.matrix(p, p) * h.values(p);
  }
  return total;
}

double criterion(double loglik, double complexity, Index n) {
  if (n < 2) throw DataError("criterion needs at least 2 nodes");
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return -2.0 * loglik + complexity * std::log(pairs);
}

std::string SelectionRecord::flags() const {
  std::string out;
  auto add = [&](const std::string& s) { out += (out.empty() ? "" : ";") + s; };
  if (degenerate_labeling) add("empty_community");
  if (excluded_blocks > 0) add("excluded_blocks=" + std::to_string(excluded_blocks));
  if (flagged_deletions > 0) add("flagged_deletions=" + std::to_string(flagged_deletions));
  return out;
}

const SelectionRecord& SelectionResult::record(int k) const {
  for (const auto& r : records) {
    if (r.k == k) return r;
  }
  throw DataError("no selection record for k=" + std::to_string(k));
}

SelectionRecord evaluate_candidate(const Adjacency& a, const Labeling& z, Model model,
                                   ComplexityMode mode) {
  const Eigen::MatrixXi cdeg = community_degrees(a, z);
  const BlockCounts counts = block_counts(cdeg, z);

  SelectionRecord rec;
  rec.k = z.k;
  rec.degenerate_labeling = z.degenerate;

  HessianDiagonal h;
  if (model == Model::Sbm) {
    const SbmParams params = sbm_mle(counts);
    rec.loglik = sbm_loglik(counts, params);
    h = hessian_diag(counts, params);
  } else {
    const Eigen::VectorXi deg = degrees(a);
    const DcbmParams params = dcbm_mle(deg, counts, z);
    rec.loglik = dcbm_loglik(deg, counts, params);
    h = hessian_diag(params);
  }
  rec.excluded_blocks = static_cast<int>(h.excluded_count());
  rec.bic_dimension = static_cast<int>(pair_count(z.k)) - rec.excluded_blocks;

  if (mode == ComplexityMode::Jackknife) {
    const JackknifeCovariance v = jackknife_cov(cdeg, counts, z, model);
    rec.flagged_deletions = v.flagged_deletions;
    rec.d_hat = complexity_dhat(h, v);
  } else {
    rec.d_hat = rec.bic_dimension;
  }
  rec.clbic = criterion(rec.loglik, rec.d_hat, a.size());
  rec.bic = criterion(rec.loglik, rec.bic_dimension, a.size());
  rec.labeling = z;
  return rec;
}

SelectionResult select_k(const Adjacency& a, KRange range, Model model, std::uint64_t seed,
                         const SelectOptions& options) {
  if (range.min < 1 || range.min > range.max) throw DataError("invalid candidate range");
  if (range.max > a.size()) {
    throw DataError("candidate k=" + std::to_string(range.max) + " exceeds the node count " +
                    std::to_string(a.size()));
  }
  const SpectralClusterer clusterer(a, model, options.kmeans);
  SelectionResult result;
  for (int k = range.min; k <= range.max; ++k) {
    const Labeling z = clusterer(k, stream_seed(seed, {kStreamCluster, static_cast<std::uint64_t>(k)}));
    result.records.push_back(evaluate_candidate(a, z, model, options.complexity));
  }
  const SelectionRecord* best_cl = &result.records.front();
  const SelectionRecord* best_bic = &result.records.front();
  for (const auto& r : result.records) {
    if (r.clbic < best_cl->clbic) best_cl = &r;
    if (r.bic < best_bic->bic) best_bic = &r;
  }
  result.chosen_clbic = best_cl->k;
  result.chosen_bic = best_bic->k;
  return result;
}

}  // namespace clbic
