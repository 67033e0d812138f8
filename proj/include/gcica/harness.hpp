#pragma once

// Monte Carlo driver: one end-to-end trial, metric computation, and seeded,
// parallel sweeps over a parameter grid.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gcica/codec.hpp"
#include "gcica/model.hpp"
#include "gcica/sic.hpp"

namespace gcica {

struct TrialMetrics {
  int s_sic = 0;
  int s_cica = 0;
  int successes = 0;
  double p_s = 0.0;
  double p_md = 1.0;
  double mse = 0.0;  // NaN when no UE succeeded
  double throughput = 0.0;
  double runtime_s = 0.0;
};

/// Everything a trial reports, including the per-stage bookkeeping that goes
/// to trials.jsonl.
struct TrialResult {
  TrialMetrics metrics;
  int na_hat = 0;
  int nr_hat = 0;
  int sic_columns = 0;
  int cica_columns = 0;
  int converged_runs = 0;
  int valid_count = 0;
  int false_valid = 0;   // valid columns that match no UE
  int missed_valid = 0;  // UEs with a matching column that failed validation
  int detected = 0;      // UEs whose self-detection fired
  int detect_errors = 0; // self-detection disagreeing with membership in B
  PeelTrace trace;
  std::vector<bool> success;  // per UE
  std::vector<int> matched;   // per UE: CSI column index or -1
  std::vector<std::vector<int>> selections;  // per UE sub-pilot tuple
};

inline constexpr std::uint64_t kBaselineStream = 0x5bd1e995ULL;

/// Per-trial stream: master seed XOR trial index.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Full pipeline: channel, frames, received block, SIC, CICA, validation,
/// RAR, self-detection and UE-CSI matching. `selections` pins the sub-pilot
/// tuples (0-based) when given.
TrialResult run_trial(const SystemConfig& cfg, Rng& rng,
                      const std::vector<std::vector<int>>* selections = nullptr);

struct SweepSpec {
  SystemConfig base;
  std::vector<int> na;
  std::vector<int> m;
  std::vector<double> snr_db;
  std::vector<int> n_i;
  std::vector<int> tau_p;
  std::vector<int> l;
  bool zip_tau_l = false;  // pair tau_p[i] with l[i] instead of crossing them
  int trials = 100;
  std::vector<std::string> baselines;  // "traditional", "multipreamble_approx"
  bool analysis = false;               // append the analytical bound columns
  int jobs = 1;
  bool keep_trials = true;

  /// Fills empty grids from `base`; throws ConfigError on bad values.
  void normalize();
  std::vector<SystemConfig> points() const;
};

struct MetricSummary {
  double mean = 0.0;
  double stderr_ = 0.0;
  int count = 0;
};

struct SweepRow {
  SystemConfig cfg;
  std::string scheme;  // "gcica-ra", "traditional", "multipreamble_approx"
  int trials = 0;
  MetricSummary p_s, p_md, mse, throughput, s_sic, s_cica;
  std::optional<double> p_s_upper, p_md_lower, throughput_upper;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// [point][trial], only the GCICA-RA scheme; empty unless keep_trials.
  std::vector<std::vector<TrialResult>> trials;
};

MetricSummary summarize(const std::vector<double>& xs);

/// Runs every grid point; deterministic for a given spec regardless of
/// `jobs`.
SweepResult run_sweep(SweepSpec spec);

/// Throws IoError unless `dir` exists or can be created and is writable.
void ensure_writable_dir(const std::filesystem::path& dir);

}  // namespace gcica
