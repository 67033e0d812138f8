#include "gcica/results_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gcica/errors.hpp"
#include "gcica/version.hpp"

namespace gcica {

namespace {

using nlohmann::ordered_json;

ordered_json num(double x) {
  if (!std::isfinite(x)) return format_number(x);  // JSON has no inf/nan
  return x;
}

ordered_json config_json(const SystemConfig& c) {
  ordered_json j;
  j["m"] = c.m;
  j["na"] = c.na;
  j["tau_p"] = c.tau_p;
  j["l"] = c.l;
  j["n_i"] = c.n_i;
  j["snr_db"] = num(c.snr_db);
  j["n_pd"] = c.n_pd;
  j["code_rate"] = num(c.code_rate);
  j["codec"] = c.codec;
  j["pilot_book"] = c.pilot_book;
  j["sic_max_iters"] = c.sic_max_iters;
  j["degree_tol"] = num(c.degree_tol);
  j["dup_threshold"] = num(c.dup_threshold);
  j["valid_threshold"] = num(c.valid_threshold);
  j["detect_threshold"] = num(c.detect_threshold);
  j["ica_max_iters"] = c.ica_max_iters;
  j["ica_tol"] = num(c.ica_tol);
  j["de_iters"] = c.de_iters;
  j["seed"] = c.seed;
  return j;
}

ordered_json summary_of(const MetricSummary& s) {
  return ordered_json{{"mean", num(s.mean)}, {"stderr", num(s.stderr_)}, {"count", s.count}};
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string results_csv(const std::vector<SweepRow>& rows, bool overlay) {
  std::ostringstream out;
  out << kResultsHeader;
  if (overlay) out << ",p_s_upper,p_md_lower,throughput_upper";
  out << '\n';
  for (const auto& r : rows) {
    const auto& c = r.cfg;
    out << c.na << ',' << c.m << ',' << format_number(c.snr_db) << ',' << c.n_i << ',' << c.tau_p
        << ',' << c.l << ',' << r.scheme << ',' << format_number(r.p_s.mean) << ','
        << format_number(r.p_md.mean) << ',' << format_number(r.mse.mean) << ','
        << format_number(r.throughput.mean) << ',' << format_number(r.s_sic.mean) << ','
        << format_number(r.s_cica.mean) << ',' << r.trials << ',' << format_number(r.p_s.stderr_);
    if (overlay) {
      auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
      out << ',' << opt(r.p_s_upper) << ',' << opt(r.p_md_lower) << ',' << opt(r.throughput_upper);
    }
    out << '\n';
  }
  return out.str();
}

std::string summary_json(const SweepSpec& spec, const SweepResult& result) {
  ordered_json j;
  j["version"] = std::string(version());
  j["config"] = config_json(spec.base);
  ordered_json sweep;
  sweep["na"] = spec.na;
  sweep["m"] = spec.m;
  ordered_json snr = ordered_json::array();
  for (double s : spec.snr_db) snr.push_back(num(s));
  sweep["snr_db"] = snr;
  sweep["n_i"] = spec.n_i;
  sweep["tau_p"] = spec.tau_p;
  sweep["l"] = spec.l;
  sweep["zip_tau_l"] = spec.zip_tau_l;
  sweep["trials"] = spec.trials;
  sweep["baselines"] = spec.baselines;
  sweep["analysis"] = spec.analysis;
  j["sweep"] = sweep;
  j["notes"] = {
      {"mse_population", "mean of |h_hat - g|^2 / M over successfully matched UEs"},
      {"multipreamble_approx", "optimistic proxy: success iff the UE's sub-pilot tuple is unique"},
      {"trial_seed", "master seed XOR trial index"}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : result.rows) {
    ordered_json row;
    row["na"] = r.cfg.na;
    row["m"] = r.cfg.m;
    row["snr_db"] = num(r.cfg.snr_db);
    row["n_i"] = r.cfg.n_i;
    row["tau_p"] = r.cfg.tau_p;
    row["l"] = r.cfg.l;
    row["scheme"] = r.scheme;
    row["trials"] = r.trials;
    row["p_s"] = summary_of(r.p_s);
    row["p_md"] = summary_of(r.p_md);
    row["mse"] = summary_of(r.mse);
    row["throughput"] = summary_of(r.throughput);
    row["s_sic"] = summary_of(r.s_sic);
    row["s_cica"] = summary_of(r.s_cica);
    if (r.p_s_upper) {
      row["p_s_upper"] = num(*r.p_s_upper);
      row["p_md_lower"] = num(*r.p_md_lower);
      row["throughput_upper"] = num(*r.throughput_upper);
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  // dump() formats doubles shortest-round-trip, which is the 17-digit value
  return j.dump(2) + "\n";
}

std::string trials_jsonl(const SweepResult& result) {
  std::ostringstream out;
  std::size_t point = 0;
  std::size_t gc_row = 0;
  for (const auto& trials : result.trials) {
    while (gc_row < result.rows.size() && result.rows[gc_row].scheme != "gcica-ra") ++gc_row;
    const SystemConfig& c = result.rows.at(gc_row).cfg;
    for (std::size_t t = 0; t < trials.size(); ++t) {
      const auto& tr = trials[t];
      ordered_json j;
      j["point"] = point;
      j["trial"] = t;
      j["na"] = c.na;
      j["m"] = c.m;
      j["snr_db"] = num(c.snr_db);
      j["n_i"] = c.n_i;
      j["tau_p"] = c.tau_p;
      j["l"] = c.l;
      j["s_sic"] = tr.metrics.s_sic;
      j["s_cica"] = tr.metrics.s_cica;
      j["successes"] = tr.metrics.successes;
      j["p_s"] = num(tr.metrics.p_s);
      j["mse"] = num(tr.metrics.mse);
      j["throughput"] = num(tr.metrics.throughput);
      j["na_hat"] = tr.na_hat;
      j["nr_hat"] = tr.nr_hat;
      j["converged_runs"] = tr.converged_runs;
      j["sic_columns"] = tr.sic_columns;
      j["cica_columns"] = tr.cica_columns;
      j["valid_count"] = tr.valid_count;
      j["false_valid"] = tr.false_valid;
      j["missed_valid"] = tr.missed_valid;
      j["detected"] = tr.detected;
      j["detect_errors"] = tr.detect_errors;
      j["peel_iterations"] = tr.trace.iterations;
      j["peel_subtractions"] = tr.trace.subtractions;
      j["peel_merged"] = tr.trace.merged;
      out << j.dump() << '\n';
    }
    ++point;
    ++gc_row;
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

void write_sweep(const std::filesystem::path& dir, const SweepSpec& spec, const SweepResult& result) {
  ensure_writable_dir(dir);
  write_text(dir / "results.csv", results_csv(result.rows, spec.analysis));
  write_text(dir / "summary.json", summary_json(spec, result));
  if (!result.trials.empty()) write_text(dir / "trials.jsonl", trials_jsonl(result));
}

std::vector<AnalysisRow> analyze_grid(const SweepSpec& spec) {
  SweepSpec s = spec;
  s.normalize();
  // N_I and SNR do not enter the bounds; collapse them
  s.n_i = {s.n_i.front()};
  s.snr_db = {s.snr_db.front()};
  std::vector<AnalysisRow> rows;
  for (const auto& cfg : s.points()) rows.push_back({cfg, analyze(cfg)});
  return rows;
}

std::string analysis_csv(const std::vector<AnalysisRow>& rows) {
  std::ostringstream out;
  out << "na,tau_p,l,m,p_fail,p_s_upper,p_md_lower,throughput_upper\n";
  for (const auto& r : rows) {
    out << r.cfg.na << ',' << r.cfg.tau_p << ',' << r.cfg.l << ',' << r.cfg.m << ','
        << format_number(r.result.evolution.p_fail) << ','
        << format_number(r.result.bound.p_s_upper) << ','
        << format_number(r.result.bound.p_md_lower) << ','
        << format_number(r.result.bound.throughput_upper) << '\n';
  }
  return out.str();
}

}  // namespace gcica
