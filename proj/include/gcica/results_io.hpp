#pragma once

// Persistence of sweep results: results.csv, summary.json, trials.jsonl, and
// the analysis table. Numbers are written with 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include "gcica/analysis.hpp"
#include "gcica/harness.hpp"

namespace gcica {

inline constexpr const char* kResultsHeader =
    "na,m,snr_db,n_i,tau_p,l,scheme,p_s,p_md,mse,throughput,s_sic,s_cica,trials,stderr_p_s";

/// %.17g; nan and +-inf spelled out.
std::string format_number(double x);

std::string results_csv(const std::vector<SweepRow>& rows, bool overlay);
std::string summary_json(const SweepSpec& spec, const SweepResult& result);
std::string trials_jsonl(const SweepResult& result);

/// Writes results.csv, summary.json and (if trials were kept) trials.jsonl.
void write_sweep(const std::filesystem::path& dir, const SweepSpec& spec, const SweepResult& result);

struct AnalysisRow {
  SystemConfig cfg;
  EvolutionResult result;
};

std::vector<AnalysisRow> analyze_grid(const SweepSpec& spec);
std::string analysis_csv(const std::vector<AnalysisRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gcica
