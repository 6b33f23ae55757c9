#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "clbic/bench.hpp"
#include "clbic/error.hpp"
#include "clbic/graph.hpp"
#include "clbic/io.hpp"
#include "clbic/selection.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CLBIC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw clbic::DataError(std::string("CLBIC_SEED is not an unsigned integer: ") + env);
    }
  }
  return 20150601;
}

clbic::Model parse_model(const std::string& s) {
  return s == "dcbm" ? clbic::Model::Dcbm : clbic::Model::Sbm;
}

// Writes to `path`, or stdout for "-".
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw clbic::DataError("cannot open " + path + " for writing");
  write(out);
}

struct SelectArgs {
  std::string edges, weights, out = "-", model = "dcbm", convention = "lower";
  std::string component = "lcc";
  double alpha = 0.5;
  int k_min = 1, k_max = 18;
  std::optional<std::uint64_t> seed;
};

int run_select(const SelectArgs& args) {
  using namespace clbic;
  std::map<std::string, std::string> meta = run_metadata();
  NamedGraph input;
  if (!args.edges.empty()) {
    input = parse_edge_list(std::filesystem::path(args.edges));
    meta["input"] = args.edges;
  } else {
    const auto conv = parse_quantile_convention(args.convention);
    const WeightMatrix w = read_weight_matrix(std::filesystem::path(args.weights));
    input.graph = weights_to_adjacency(w.weights, args.alpha, conv);
    input.names = w.names;
    meta["input"] = args.weights;
    meta["alpha"] = format_double(args.alpha);
    meta["quantile_convention"] = to_string(conv);
  }
  Component lcc{input.graph, {}};
  if (args.component == "lcc") {
    lcc = largest_connected_component(input.graph);
  } else {
    for (Index i = 0; i < input.graph.size(); ++i) lcc.original_index.push_back(i);
  }
  std::vector<std::string> names;
  for (Index i : lcc.original_index) names.push_back(input.names[i]);
  meta["preprocessing"] = args.component == "lcc" ? "restricted to the largest connected component"
                                                  : "none";
  const std::uint64_t seed = args.seed.value_or(default_seed());
  const Model model = parse_model(args.model);
  meta["model"] = args.model;
  meta["seed"] = std::to_string(seed);
  meta["nodes_input"] = std::to_string(input.graph.size());
  meta["nodes_used"] = std::to_string(lcc.graph.size());
  // Candidates beyond the node count are dropped rather than rejected.
  const int k_max = static_cast<int>(std::min<Index>(args.k_max, lcc.graph.size()));
  if (args.k_min > k_max) throw DataError("--k-min exceeds the number of nodes");
  meta["k_range"] = std::to_string(args.k_min) + ".." + std::to_string(k_max);

  const SelectionResult result = select_k(lcc.graph, {args.k_min, k_max}, model, seed);
  emit(args.out, [&](std::ostream& os) {
    write_selection(os, to_selection_file(result, names, meta));
  });
  std::cerr << "chosen k: clbic=" << result.chosen_clbic << " bic=" << result.chosen_bic << "\n";
  return 0;
}

struct BenchArgs {
  std::string spec, out = "-";
  std::optional<int> reps;
  int threads = 1;
};

int run_bench_cmd(const BenchArgs& args) {
  using namespace clbic;
  std::ifstream in(args.spec);
  if (!in) throw DataError("cannot open " + args.spec);
  auto settings = parse_bench_config(in, default_seed());
  if (args.reps) {
    for (auto& s : settings) s.spec.reps = *args.reps;
  }
  BenchReport report;
  report.metadata = run_metadata();
  report.metadata["spec"] = args.spec;
  for (const auto& s : settings) {
    report.metadata["seed." + s.id] = std::to_string(s.spec.seed);
    report.rows.push_back(run_setting(s, args.threads));
    const auto& r = report.rows.back();
    std::cerr << r.id << ": clbic " << r.prop_clbic << " bic " << r.prop_bic << "\n";
  }
  emit(args.out, [&](std::ostream& os) { write_report(os, report); });
  return 0;
}

struct SimulateArgs {
  std::string spec, setting, out = "-";
  int rep = 0;
};

int run_simulate(const SimulateArgs& args) {
  using namespace clbic;
  std::ifstream in(args.spec);
  if (!in) throw DataError("cannot open " + args.spec);
  const auto settings = parse_bench_config(in, default_seed());
  const BenchSetting* chosen = &settings.front();
  if (!args.setting.empty()) {
    chosen = nullptr;
    for (const auto& s : settings) {
      if (s.id == args.setting) chosen = &s;
    }
    if (!chosen) throw DataError("no setting named " + args.setting);
  }
  const SimulatedNetwork net = generate(chosen->spec, args.rep);
  emit(args.out, [&](std::ostream& os) {
    os << "# setting=" << chosen->id << " rep=" << args.rep << " seed=" << chosen->spec.seed
       << "\n";
    const Index n = net.graph.size();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (net.graph(i, j)) os << i + 1 << ' ' << j + 1 << '\n';
      }
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community-count selection for block models under edge dependence"};
  app.set_version_flag("--version", std::string(clbic::kVersion));
  app.require_subcommand(1);

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "Choose the number of communities for a network");
  auto* src = select->add_option_group("input");
  src->add_option("--edges", sel.edges, "Edge list, one 'u v' pair per line")
      ->check(CLI::ExistingFile);
  src->add_option("--weights", sel.weights, "Square nonnegative weight matrix (CSV)")
      ->check(CLI::ExistingFile);
  src->require_option(1);
  select->add_option("--alpha", sel.alpha, "Quantile level for thresholding weights")
      ->check(CLI::Range(0.0, 1.0));
  select->add_option("--quantile-convention", sel.convention, "lower | higher | linear")
      ->check(CLI::IsMember({"lower", "higher", "linear"}));
  select->add_option("--model", sel.model, "sbm | dcbm")->check(CLI::IsMember({"sbm", "dcbm"}));
  select->add_option("--component", sel.component,
                     "lcc: restrict to the largest connected component; all: keep every node")
      ->check(CLI::IsMember({"lcc", "all"}));
  select->add_option("--k-min", sel.k_min)->check(CLI::PositiveNumber);
  select->add_option("--k-max", sel.k_max)->check(CLI::PositiveNumber);
  select->add_option("--seed", sel.seed, "Default: $CLBIC_SEED or 20150601");
  select->add_option("--out", sel.out, "Output file, '-' for stdout");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a simulation sweep and tabulate selection rates");
  bench_cmd->add_option("--spec", bench.spec, "Sweep description")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench.out, "Report file, '-' for stdout");
  bench_cmd->add_option("--reps", bench.reps, "Override the replicate count")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--threads", bench.threads)->check(CLI::PositiveNumber);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Write one simulated network as an edge list");
  sim_cmd->add_option("--spec", sim.spec)->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--setting", sim.setting, "Setting id (default: first)");
  sim_cmd->add_option("--rep", sim.rep)->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--out", sim.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sel.k_min > sel.k_max) throw CLI::ValidationError("--k-min must not exceed --k-max");
    if (*select) return run_select(sel);
    if (*bench_cmd) return run_bench_cmd(bench);
    if (*sim_cmd) return run_simulate(sim);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const clbic::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const clbic::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
