#include "clbic/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <mutex>
#include <set>
#include <thread>

#include "clbic/error.hpp"
#include "clbic/metrics.hpp"
#include "clbic/rng.hpp"

namespace clbic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw DataError(ctx + ": expected a number, got '" + s + "'");
}

long long to_integer(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw DataError(ctx + ": expected an integer, got '" + s + "'");
}

bool to_bool(const std::string& s, const std::string& ctx) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw DataError(ctx + ": expected true/false, got '" + s + "'");
}

CorrelationStructure parse_structure(const std::string& value, const std::string& ctx) {
  const auto w = words(value);
  if (w.empty() || w[0] == "none") return {};
  if (w.size() != 2) throw DataError(ctx + ": expected 'none', 'equal RHO' or 'decaying RHO'");
  const double rho = to_double(w[1], ctx);
  if (w[0] == "equal") return {CorrelationKind::Equal, rho};
  if (w[0] == "decaying") return {CorrelationKind::Decaying, rho};
  throw DataError(ctx + ": unknown correlation kind '" + w[0] + "'");
}

OmegaDist parse_omega(const std::string& value, const std::string& ctx) {
  const auto w = words(value);
  if (w.empty() || w[0] == "constant_one") return {};
  if (w[0] == "knmixture") return {OmegaKind::KnMixture};
  if (w[0] == "uniform") {
    if (w.size() != 3) throw DataError(ctx + ": expected 'uniform LO HI'");
    return {OmegaKind::Uniform, to_double(w[1], ctx), to_double(w[2], ctx)};
  }
  throw DataError(ctx + ": unknown omega distribution '" + w[0] + "'");
}

struct Section {
  std::string id;
  std::map<std::string, std::string> values;
  int line = 0;
};

Eigen::MatrixXd build_theta(const Section& s, int k) {
  const std::string ctx = "setting [" + s.id + "]";
  Eigen::MatrixXd theta(k, k);
  if (auto it = s.values.find("theta"); it != s.values.end()) {
    const auto w = words(it->second);
    if (static_cast<Index>(w.size()) != pair_count(k)) {
      throw DataError(ctx + ": theta needs " + std::to_string(pair_count(k)) + " values");
    }
    std::size_t at = 0;
    for (int a = 0; a < k; ++a) {
      for (int b = a; b < k; ++b) theta(a, b) = theta(b, a) = to_double(w[at++], ctx);
    }
    return theta;
  }
  const auto within = s.values.find("theta_within");
  const auto between = s.values.find("theta_between");
  if (within == s.values.end() || between == s.values.end()) {
    throw DataError(ctx + ": give theta or theta_within and theta_between");
  }
  const double tw = to_double(within->second, ctx);
  theta.setConstant(to_double(between->second, ctx));
  theta.diagonal().setConstant(tw);
  if (auto hub = s.values.find("hub"); hub != s.values.end() && to_bool(hub->second, ctx)) {
    theta.row(k - 1).setConstant(tw);
    theta.col(k - 1).setConstant(tw);
  }
  return theta;
}

std::vector<BenchSetting> expand_section(const Section& s, std::uint64_t default_seed) {
  static const std::set<std::string> known = {
      "model", "sizes", "theta", "theta_within", "theta_between", "hub", "gamma", "scope",
      "within", "between", "omega", "reps", "seed", "k_min", "k_max", "diagnostics", "grow_k"};
  const std::string ctx = "setting [" + s.id + "]";
  for (const auto& [key, _] : s.values) {
    if (!known.contains(key)) throw DataError(ctx + ": unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = s.values.find(key);
    return it == s.values.end() ? fallback : it->second;
  };

  BenchSetting base;
  base.id = s.id;
  const std::string model = get("model", "sbm");
  if (model == "sbm") {
    base.spec.model = Model::Sbm;
  } else if (model == "dcbm") {
    base.spec.model = Model::Dcbm;
  } else {
    throw DataError(ctx + ": model must be sbm or dcbm");
  }
  std::vector<int> sizes;
  for (const auto& w : words(get("sizes", ""))) sizes.push_back(static_cast<int>(to_integer(w, ctx)));
  if (sizes.empty()) throw DataError(ctx + ": sizes missing");
  base.spec.gamma = to_double(get("gamma", "1"), ctx);
  const std::string scope = get("scope", "global");
  if (scope == "global") {
    base.spec.corr.scope = CorrelationScope::Global;
  } else if (scope == "blockwise") {
    base.spec.corr.scope = CorrelationScope::Blockwise;
  } else {
    throw DataError(ctx + ": scope must be global or blockwise");
  }
  base.spec.corr.within = parse_structure(get("within", "none"), ctx);
  base.spec.corr.between = parse_structure(get("between", "none"), ctx);
  base.spec.omega = parse_omega(get("omega", "constant_one"), ctx);
  base.spec.reps = static_cast<int>(to_integer(get("reps", "50"), ctx));
  base.spec.seed = static_cast<std::uint64_t>(
      to_integer(get("seed", std::to_string(default_seed)), ctx));
  base.range.min = static_cast<int>(to_integer(get("k_min", "1"), ctx));
  base.range.max = static_cast<int>(to_integer(get("k_max", "18"), ctx));
  base.diagnostics = to_bool(get("diagnostics", "false"), ctx);

  std::vector<int> ks;
  if (auto grow = s.values.find("grow_k"); grow != s.values.end()) {
    const auto w = words(grow->second);
    if (w.size() != 2) throw DataError(ctx + ": grow_k expects KMIN KMAX");
    const auto lo = static_cast<int>(to_integer(w[0], ctx));
    const auto hi = static_cast<int>(to_integer(w[1], ctx));
    if (lo < 1 || lo > hi) throw DataError(ctx + ": invalid grow_k range");
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
  }

  std::vector<BenchSetting> out;
  if (ks.empty()) {
    base.spec.sizes = sizes;
    base.spec.theta = build_theta(s, static_cast<int>(sizes.size()));
    base.spec.validate();
    out.push_back(std::move(base));
    return out;
  }
  for (int k : ks) {
    BenchSetting b = base;
    b.id = s.id + "_K" + std::to_string(k);
    b.spec.sizes.clear();
    for (int c = 0; c < k; ++c) b.spec.sizes.push_back(sizes[c % sizes.size()]);
    b.spec.theta = build_theta(s, k);
    // Independent streams per K.
    b.spec.seed = stream_seed(base.spec.seed, {static_cast<std::uint64_t>(k)});
    b.spec.validate();
    out.push_back(std::move(b));
  }
  return out;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string cell(double v) { return cell(std::optional<double>(v)); }

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<BenchSetting> parse_bench_config(std::istream& in, std::uint64_t default_seed) {
  std::vector<Section> sections;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw DataError("bench config line " + std::to_string(line_no) + ": bad section header");
      }
      sections.push_back({trim(line.substr(1, line.size() - 2)), {}, line_no});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || sections.empty()) {
      throw DataError("bench config line " + std::to_string(line_no) +
                      ": expected 'key = value' inside a [section]");
    }
    sections.back().values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  if (sections.empty()) throw DataError("bench config has no settings");
  std::vector<BenchSetting> out;
  for (const auto& s : sections) {
    for (auto& b : expand_section(s, default_seed)) out.push_back(std::move(b));
  }
  return out;
}

ReplicateOutcome run_replicate(const BenchSetting& setting, const NetworkGenerator& generator,
                               int rep) {
  const SimulatedNetwork net = generator(rep);
  const Component lcc = largest_connected_component(net.graph);
  const Adjacency& a = lcc.graph;
  const Index n = a.size();
  Eigen::VectorXi planted_labels(n);
  for (Index i = 0; i < n; ++i) planted_labels(i) = net.planted.labels(lcc.original_index[i]);
  const Labeling planted = make_labeling(planted_labels, net.planted.k);

  KRange range = setting.range;
  range.max = static_cast<int>(std::min<Index>(range.max, n));
  const Model model = setting.spec.model;
  const std::uint64_t seed =
      stream_seed(setting.spec.seed, {static_cast<std::uint64_t>(rep), kStreamCluster});
  const SelectionResult sel = select_k(a, range, model, seed);

  ReplicateOutcome out;
  out.nodes = n;
  out.chosen_clbic = sel.chosen_clbic;
  out.chosen_bic = sel.chosen_bic;
  const int k_true = setting.true_k();
  const bool has_true = k_true >= range.min && k_true <= range.max;
  if (has_true) out.dhat_true_k = sel.record(k_true).d_hat;

  const Labeling& zc = sel.record(sel.chosen_clbic).labeling;
  const Labeling& zb = sel.record(sel.chosen_bic).labeling;
  out.gf_clbic = rand_gf(planted, zc);
  out.gf_bic = rand_gf(planted, zb);
  out.mr_clbic = median_ratio_mr(a, zc);
  out.mr_bic = median_ratio_mr(a, zb);

  if (setting.diagnostics && has_true) {
    const Labeling& zhat = sel.record(k_true).labeling;
    out.misclustering = misclustering_rate(planted, zhat);
    Eigen::MatrixXd truth(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        truth(i, j) = net.edge_probs(lcc.original_index[i], lcc.original_index[j]);
      }
    }
    auto fitted = [&](const Labeling& z) {
      if (model == Model::Dcbm) return expected_adjacency(z, dcbm_mle(a, z));
      DcbmParams p;
      p.k = z.k;
      p.theta = sbm_mle(block_counts(a, z)).theta;
      p.omega = Eigen::VectorXd::Ones(n);
      return expected_adjacency(z, p);
    };
    out.oracle_err = frobenius_rel_err(fitted(planted), truth);
    out.est_err = frobenius_rel_err(fitted(zhat), truth);
  }
  return out;
}

std::pair<std::optional<double>, std::optional<double>> median_deviation(
    const std::vector<int>& chosen, int truth) {
  std::vector<double> dev;
  for (int c : chosen) {
    if (c != truth) dev.push_back(static_cast<double>(c - truth));
  }
  if (dev.empty()) return {std::nullopt, std::nullopt};
  const double md = median_of(dev);
  std::vector<double> abs_dev;
  for (double d : dev) abs_dev.push_back(std::abs(d - md));
  return {md, 1.4826 * median_of(abs_dev)};
}

BenchRow summarize(const BenchSetting& setting, const std::vector<ReplicateOutcome>& outcomes) {
  BenchRow row;
  row.id = setting.id;
  row.model = setting.spec.model;
  row.k_true = setting.true_k();
  row.reps = static_cast<int>(outcomes.size());
  std::vector<int> cl, bic;
  std::vector<double> gf_c, gf_b, mr_c, mr_b, dhat, misc, orac, est, nodes;
  for (const auto& o : outcomes) {
    cl.push_back(o.chosen_clbic);
    bic.push_back(o.chosen_bic);
    gf_c.push_back(o.gf_clbic);
    gf_b.push_back(o.gf_bic);
    if (o.mr_clbic) mr_c.push_back(*o.mr_clbic);
    if (o.mr_bic) mr_b.push_back(*o.mr_bic);
    if (o.dhat_true_k) dhat.push_back(*o.dhat_true_k);
    if (o.misclustering) misc.push_back(*o.misclustering);
    if (o.oracle_err) orac.push_back(*o.oracle_err);
    if (o.est_err) est.push_back(*o.est_err);
    nodes.push_back(static_cast<double>(o.nodes));
  }
  const double reps = std::max(1, row.reps);
  row.prop_clbic = std::count(cl.begin(), cl.end(), row.k_true) / reps;
  row.prop_bic = std::count(bic.begin(), bic.end(), row.k_true) / reps;
  std::tie(row.md_clbic, row.rsd_clbic) = median_deviation(cl, row.k_true);
  std::tie(row.md_bic, row.rsd_bic) = median_deviation(bic, row.k_true);
  row.gf_clbic = mean_of(gf_c).value_or(0.0);
  row.gf_bic = mean_of(gf_b).value_or(0.0);
  row.mr_clbic = mean_of(mr_c);
  row.mr_bic = mean_of(mr_b);
  row.dhat_true_k = mean_of(dhat);
  row.misclustering = mean_of(misc);
  row.oracle_err = mean_of(orac);
  row.est_err = mean_of(est);
  row.mean_nodes = mean_of(nodes).value_or(0.0);
  return row;
}

std::vector<ReplicateOutcome> run_replicates(const BenchSetting& setting, int threads) {
  const NetworkGenerator generator(setting.spec);
  const int reps = setting.spec.reps;
  std::vector<ReplicateOutcome> outcomes(reps);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int r = next++; r < reps; r = next++) {
      try {
        outcomes[r] = run_replicate(setting, generator, r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads, 1, reps);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

BenchRow run_setting(const BenchSetting& setting, int threads) {
  return summarize(setting, run_replicates(setting, threads));
}

std::map<std::string, std::string> run_metadata() {
  return {
      {"version", kVersion},
      {"kmeans", "kmeans++ init, 20 restarts, 300 iterations, rel tol 1e-9"},
      {"score_clip", "log(n)"},
      {"bic_dimension", "estimable block parameters (k(k+1)/2 minus boundary blocks)"},
      {"degenerate_blocks", "excluded from Hessian, jackknife trace and BIC dimension"},
      {"seed_policy", "one seed per run; k-means stream derived from (seed, k)"},
      {"preprocessing", "restricted to the largest connected component"},
  };
}

BenchReport run_bench(const std::vector<BenchSetting>& settings, int threads) {
  BenchReport report;
  report.metadata = run_metadata();
  for (const auto& s : settings) {
    report.metadata["seed." + s.id] = std::to_string(s.spec.seed);
    report.rows.push_back(run_setting(s, threads));
  }
  return report;
}

void write_report(std::ostream& out, const BenchReport& report) {
  out << "# clbic bench report\n";
  for (const auto& [key, value] : report.metadata) out << "# " << key << "=" << value << "\n";
  out << "setting,model,k_true,reps,prop_clbic,prop_bic,md_clbic,rsd_clbic,md_bic,rsd_bic,"
         "gf_clbic,mr_clbic,gf_bic,mr_bic,dhat_true_k,misclustering,oracle_err,est_err,"
         "mean_nodes\n";
  for (const auto& r : report.rows) {
    out << r.id << ',' << (r.model == Model::Sbm ? "sbm" : "dcbm") << ',' << r.k_true << ','
        << r.reps << ',' << cell(r.prop_clbic) << ',' << cell(r.prop_bic) << ','
        << cell(r.md_clbic) << ',' << cell(r.rsd_clbic) << ',' << cell(r.md_bic) << ','
        << cell(r.rsd_bic) << ',' << cell(r.gf_clbic) << ',' << cell(r.mr_clbic) << ','
        << cell(r.gf_bic) << ',' << cell(r.mr_bic) << ',' << cell(r.dhat_true_k) << ','
        << cell(r.misclustering) << ',' << cell(r.oracle_err) << ',' << cell(r.est_err) << ','
        << cell(r.mean_nodes) << "\n";
  }
}

}  // namespace clbic
