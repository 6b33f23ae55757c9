#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clbic/netgen.hpp"
#include "clbic/selection.hpp"

namespace clbic {

inline constexpr const char* kVersion = "0.1.0";

/// One simulation setting of a benchmark sweep.
struct BenchSetting {
  std::string id;
  SimSpec spec;
  KRange range;
  bool diagnostics = false;  // SCORE/spectral accuracy at the true k

  int true_k() const { return spec.k(); }
};

/// Reads the plain-text sweep description. Each setting is a "[id]" section
/// of "key = value" lines:
///
///   model        sbm | dcbm
///   sizes        60 90 120 150
///   theta        upper triangle a <= b, row-major
///   theta_within / theta_between / hub
///                shorthand; hub = true links the last community to all
///                others at theta_within
///   gamma        DCBM scale (default 1)
///   scope        global | blockwise
///   within, between
///                none | equal RHO | decaying RHO
///   omega        constant_one | knmixture | uniform LO HI
///   reps, seed, k_min, k_max, diagnostics
///   grow_k       KMIN KMAX: one setting per K with sizes cycled from `sizes`
///
/// `default_seed` applies to sections without a seed line.
std::vector<BenchSetting> parse_bench_config(std::istream& in, std::uint64_t default_seed = 20150601);

struct ReplicateOutcome {
  int chosen_clbic = 0;
  int chosen_bic = 0;
  Index nodes = 0;  // after restricting to the largest component
  std::optional<double> dhat_true_k;
  double gf_clbic = 0.0;
  double gf_bic = 0.0;
  std::optional<double> mr_clbic;
  std::optional<double> mr_bic;
  std::optional<double> misclustering;  // diagnostics only
  std::optional<double> oracle_err;
  std::optional<double> est_err;
};

/// generate -> largest component -> select_k -> metrics for replicate `rep`.
ReplicateOutcome run_replicate(const BenchSetting& setting, const NetworkGenerator& generator,
                               int rep);

struct BenchRow {
  std::string id;
  Model model = Model::Sbm;
  int k_true = 0;
  int reps = 0;
  double prop_clbic = 0.0;
  double prop_bic = 0.0;
  // Over incorrectly selected replicates only; empty when all were correct.
  std::optional<double> md_clbic, rsd_clbic, md_bic, rsd_bic;
  double gf_clbic = 0.0;
  double gf_bic = 0.0;
  std::optional<double> mr_clbic, mr_bic;  // mean over replicates where defined
  std::optional<double> dhat_true_k;
  std::optional<double> misclustering, oracle_err, est_err;
  double mean_nodes = 0.0;
};

BenchRow summarize(const BenchSetting& setting, const std::vector<ReplicateOutcome>& outcomes);

/// Median deviation from `truth` among chosen != truth, and 1.4826 * MAD.
std::pair<std::optional<double>, std::optional<double>> median_deviation(
    const std::vector<int>& chosen, int truth);

/// Replicates are spread over `threads` workers; the result does not depend
/// on the thread count.
std::vector<ReplicateOutcome> run_replicates(const BenchSetting& setting, int threads = 1);
BenchRow run_setting(const BenchSetting& setting, int threads = 1);

struct BenchReport {
  std::map<std::string, std::string> metadata;
  std::vector<BenchRow> rows;
};

BenchReport run_bench(const std::vector<BenchSetting>& settings, int threads = 1);
void write_report(std::ostream& out, const BenchReport& report);

/// Reproducibility metadata shared by every output file.
std::map<std::string, std::string> run_metadata();

}  // namespace clbic
