// Acceptance gate: one line per criterion, "criterion N: PASS|FAIL|BLOCKED ...".
// Exit status 0 when every selected criterion passes, 77 when the only
// non-passing criteria are blocked on missing data, 1 otherwise.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clbic/bench.hpp"
#include "clbic/error.hpp"
#include "clbic/io.hpp"
#include "laws.hpp"
#include "support.hpp"

using namespace clbic;
namespace fs = std::filesystem;

namespace {

enum class Status { Pass, Fail, Blocked };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

struct Checks {
  bool ok = true;
  std::ostringstream text;

  void expect(bool cond, const std::string& what) {
    if (!text.str().empty()) text << "; ";
    text << what << (cond ? "" : " [missed]");
    ok = ok && cond;
  }
  Outcome outcome() const { return {ok ? Status::Pass : Status::Fail, text.str()}; }
};

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

std::string fmt(const std::optional<double>& x, int digits = 3) {
  return x ? fmt(*x, digits) : std::string("n/a");
}

fs::path data_dir() {
  if (const char* env = std::getenv("CLBIC_DATA_DIR")) return env;
  return CLBIC_DATA_DIR;
}

int g_threads = 1;

BenchRow run_named(const std::string& file, const std::string& id) {
  std::ifstream in(data_dir() / file);
  if (!in) throw DataError("cannot open " + (data_dir() / file).string());
  for (const BenchSetting& s : parse_bench_config(in)) {
    if (s.id == id) return run_setting(s, g_threads);
  }
  throw DataError("setting " + id + " not found in " + file);
}

Outcome criterion1() {
  const BenchRow r = run_named("sim1.ini", "sim1_eq_0.10");
  Checks c;
  c.expect(r.prop_clbic >= 0.90, "CL-BIC " + fmt(r.prop_clbic, 2) + " >= 0.90");
  c.expect(r.prop_bic >= 0.20 && r.prop_bic <= 0.60, "BIC " + fmt(r.prop_bic, 2) + " in [0.20, 0.60]");
  return c.outcome();
}

Outcome criterion2() {
  const BenchRow r = run_named("sim1.ini", "sim1_eq_0.20");
  Checks c;
  c.expect(r.prop_clbic >= 0.65, "CL-BIC " + fmt(r.prop_clbic, 2) + " >= 0.65");
  c.expect(r.prop_bic <= 0.15, "BIC " + fmt(r.prop_bic, 2) + " <= 0.15");
  c.expect(r.md_bic && *r.md_bic >= 3.0, "BIC median deviation " + fmt(r.md_bic, 1) + " >= 3");
  return c.outcome();
}

Outcome criterion3() {
  const BenchRow r = run_named("sim2.ini", "sim2_eq_0.10_ind");
  Checks c;
  c.expect(r.prop_clbic >= 0.90, "CL-BIC " + fmt(r.prop_clbic, 2) + " >= 0.90");
  c.expect(r.prop_bic >= 0.45 && r.prop_bic <= 0.80, "BIC " + fmt(r.prop_bic, 2) + " in [0.45, 0.80]");
  return c.outcome();
}

Outcome criterion4() {
  const BenchRow r = run_named("sim3.ini", "sim3_ind");
  Checks c;
  c.expect(r.prop_clbic >= 0.95, "CL-BIC " + fmt(r.prop_clbic, 2) + " >= 0.95");
  const double target = 10.0;
  c.expect(r.dhat_true_k && std::abs(*r.dhat_true_k - target) <= 0.3 * target,
           "mean d_hat at K=4 " + fmt(r.dhat_true_k, 2) + " within 30% of 10");
  return c.outcome();
}

Outcome criterion5() {
  const BenchRow r = run_named("sim4.ini", "sim4_eq_0.20_g0.03");
  Checks c;
  c.expect(r.prop_clbic >= 0.85, "CL-BIC " + fmt(r.prop_clbic, 2) + " >= 0.85");
  c.expect(r.prop_bic <= 0.75, "BIC " + fmt(r.prop_bic, 2) + " <= 0.75");
  return c.outcome();
}

Outcome criterion6() {
  const BenchRow r = run_named("dcbm_uniform.ini", "dcbm_uniform_K4");
  Checks c;
  c.expect(r.misclustering && *r.misclustering <= 0.08,
           "misclustering " + fmt(r.misclustering) + " <= 0.08");
  c.expect(r.oracle_err && std::abs(*r.oracle_err - 0.55) <= 0.08,
           "oracle error " + fmt(r.oracle_err) + " within 0.08 of 0.55");
  c.expect(r.est_err && std::abs(*r.est_err - 0.58) <= 0.08,
           "estimate error " + fmt(r.est_err) + " within 0.08 of 0.58");
  c.expect(r.prop_clbic >= 0.70, "CL-BIC " + fmt(r.prop_clbic, 2) + " >= 0.70");
  c.expect(r.prop_bic <= 0.35, "BIC " + fmt(r.prop_bic, 2) + " <= 0.35");
  return c.outcome();
}

Outcome criterion7() {
  fs::path path = data_dir() / "trade_1995.csv";
  if (const char* env = std::getenv("CLBIC_TRADE_DATA")) path = env;
  if (!fs::exists(path)) {
    return {Status::Blocked, "trade matrix not found at " + path.string() +
                                 " (set CLBIC_TRADE_DATA to a 1995 export matrix)"};
  }
  const WeightMatrix w = read_weight_matrix(path);
  const Component lcc = largest_connected_component(weights_to_adjacency(w.weights, 0.5));
  const int k_max = static_cast<int>(std::min<Index>(18, lcc.graph.size()));
  const SelectionResult sel = select_k(lcc.graph, {1, k_max}, Model::Sbm, 20150601);
  Checks c;
  c.expect(sel.chosen_clbic == 3, "CL-BIC k=" + std::to_string(sel.chosen_clbic) + " == 3");
  c.expect(sel.chosen_bic >= 7, "BIC k=" + std::to_string(sel.chosen_bic) + " >= 7");
  return c.outcome();
}

// Property suites.

bool close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

std::string hessian_suite(std::mt19937_64& rng) {
  int done = 0;
  int bad = 0;
  while (done < 100) {
    const Index n = 10 + static_cast<Index>(rng() % 20);
    const int k = 1 + static_cast<int>(rng() % 4);
    const Adjacency a = testing::random_graph(n, 0.2 + 0.5 * (rng() % 100) / 100.0, rng);
    const Labeling z = testing::random_labeling(n, k, rng);
    const BlockCounts counts = block_counts(a, z);
    const SbmParams p = sbm_mle(counts);
    const HessianDiagonal h = hessian_diag(counts, p);
    if (h.excluded.any()) continue;
    const Eigen::MatrixXd oracle = testing::termwise_sbm_hessian(a, z, testing::pairwise_sbm_theta(a, z));
    for (int x = 0; x < k; ++x) {
      for (int y = x; y < k; ++y) {
        const Index q = pair_index(x, y, k);
        const double closed = counts.pairs(q) / (p.theta(q) * (1 - p.theta(q)));
        if (!close(h.values(q), oracle(x, y), 1e-8) || !close(h.values(q), closed, 1e-8)) ++bad;
      }
    }
    ++done;
  }
  return bad == 0 ? "" : "Hessian mismatches: " + std::to_string(bad);
}

std::string score_suite(std::mt19937_64& rng) {
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = 8 + static_cast<Index>(rng() % 20);
    const int k = 1 + static_cast<int>(rng() % 4);
    const Adjacency a = testing::random_graph(n, 0.35, rng);
    const Labeling z = testing::random_labeling(n, k, rng);
    const BlockCounts counts = block_counts(a, z);
    const SbmParams sp = sbm_mle(counts);
    const HessianDiagonal sh = hessian_diag(counts, sp);
    const Eigen::VectorXd su = sbm_score(counts, sp.theta);
    for (Index q = 0; q < su.size(); ++q) {
      if (!sh.excluded(q) && std::abs(su(q)) > 1e-8) ++bad;
    }
    const DcbmParams dp = dcbm_mle(a, z);
    const HessianDiagonal dh = hessian_diag(dp);
    const Eigen::VectorXd du = dcbm_score(counts, dp.theta);
    for (Index q = 0; q < du.size(); ++q) {
      if (!dh.excluded(q) && std::abs(du(q)) > 1e-8) ++bad;
    }
  }
  return bad == 0 ? "" : "nonzero scores at the MLE: " + std::to_string(bad);
}

std::string loglik_suite(std::mt19937_64& rng) {
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % std::min<Index>(n, 3));
    const Adjacency a = testing::random_graph(n, 0.5, rng);
    const Labeling z = testing::random_labeling(n, k, rng);
    const SbmParams p = sbm_mle(block_counts(a, z));
    const double oracle = testing::pairwise_sbm_loglik(a, z, testing::pairwise_sbm_theta(a, z));
    if (std::abs(sbm_loglik(a, z, p) - oracle) > 1e-10) ++bad;
  }
  return bad == 0 ? "" : "loglik mismatches: " + std::to_string(bad);
}

std::string jackknife_suite(std::mt19937_64& rng) {
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = 6 + static_cast<Index>(rng() % 20);
    const int k = 1 + static_cast<int>(rng() % 4);
    const Adjacency a = testing::random_graph(n, 0.4, rng);
    const Labeling z = testing::random_labeling(n, k, rng);
    for (Model m : {Model::Sbm, Model::Dcbm}) {
      const Eigen::MatrixXd v = jackknife_cov(a, z, m).matrix;
      const double low = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(v).eigenvalues().minCoeff();
      if (low < -1e-10) ++bad;
    }
  }
  const bool zero = jackknife_cov(testing::complete_graph(12), single_community(12), Model::Sbm).matrix.isZero(0.0);
  std::string out = bad == 0 ? "" : "indefinite jackknife covariances: " + std::to_string(bad);
  if (!zero) out += (out.empty() ? "" : "; ") + std::string("complete graph covariance not zero");
  return out;
}

std::string law_suite() {
  std::string out;
  for (double rho : {0.0, 0.1, 0.5}) {
    for (auto kind : {CorrelationKind::Equal, CorrelationKind::Decaying}) {
      const testing::LawCheck law = testing::check_generator_laws(testing::law_spec(kind, rho), 100000);
      if (law.outside > 0) {
        out += (out.empty() ? "" : "; ") + std::string("rho ") + fmt(rho, 1) + ": " + law.worst_label +
               " z=" + fmt(law.worst, 2);
      }
    }
  }
  return out;
}

std::string determinism_suite() {
  std::ifstream in(data_dir() / "sim1.ini");
  std::vector<BenchSetting> settings;
  for (BenchSetting& s : parse_bench_config(in)) {
    if (s.id == "sim1_eq_0.10" || s.id == "sim1_dec_0.60") {
      s.spec.reps = 3;
      settings.push_back(s);
    }
  }
  std::ostringstream a, b, c;
  write_report(a, run_bench(settings, 1));
  write_report(b, run_bench(settings, 1));
  write_report(c, run_bench(settings, 3));
  if (a.str() != b.str()) return "repeated bench reports differ";
  if (a.str() != c.str()) return "bench report depends on the thread count";
  return "";
}

Outcome criterion8() {
  std::mt19937_64 rng(8080);
  const std::vector<std::pair<std::string, std::function<std::string()>>> suites = {
      {"hessian", [&] { return hessian_suite(rng); }},
      {"score", [&] { return score_suite(rng); }},
      {"loglik", [&] { return loglik_suite(rng); }},
      {"jackknife", [&] { return jackknife_suite(rng); }},
      {"generator laws", law_suite},
      {"determinism", determinism_suite},
  };
  Checks c;
  for (const auto& [name, run] : suites) {
    const std::string problem = run();
    c.expect(problem.empty(), name + (problem.empty() ? " ok" : ": " + problem));
  }
  return c.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "Criteria to run (default: all)")->check(CLI::Range(1, 8));
  app.add_option("--threads", g_threads, "Replicate workers")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8};
  if (only.empty()) {
    for (int i = 1; i <= 8; ++i) only.push_back(i);
  }
  bool failed = false;
  bool blocked = false;
  for (int n : only) {
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("error: ") + e.what()};
    }
    const char* label = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "BLOCKED";
    std::cout << "criterion " << n << ": " << label << "  " << o.detail << std::endl;
    failed = failed || o.status == Status::Fail;
    blocked = blocked || o.status == Status::Blocked;
  }
  if (failed) return 1;
  return blocked ? 77 : 0;
}
