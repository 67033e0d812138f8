#include "gcica/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

#include "gcica/analysis.hpp"
#include "gcica/baselines.hpp"
#include "gcica/cica.hpp"
#include "gcica/detection.hpp"
#include "gcica/errors.hpp"

namespace gcica {

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) { return Rng(seed ^ trial); }

namespace {

Rng baseline_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(kBaselineStream)};
  return Rng(seq);
}

struct Candidate {
  double corr;
  int ue;
  int col;
};

// Greedy one-to-one assignment by descending correlation, above `threshold`.
void greedy_match(const Eigen::MatrixXd& g, const CsiSet& csis, const std::vector<int>& columns,
                  double threshold, std::vector<int>& ue_to_col, std::vector<bool>& col_used) {
  std::vector<Candidate> cands;
  for (int k = 0; k < g.cols(); ++k) {
    if (ue_to_col[static_cast<std::size_t>(k)] >= 0) continue;
    const double gn = g.col(k).norm();
    for (int c : columns) {
      if (col_used[static_cast<std::size_t>(c)]) continue;
      const auto& h = csis.columns[static_cast<std::size_t>(c)];
      const double hn = h.norm();
      if (gn <= 0.0 || hn <= 0.0) continue;
      const double r = h.dot(g.col(k)) / (hn * gn);
      if (r > threshold) cands.push_back({r, k, c});
    }
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.corr > b.corr; });
  for (const auto& cd : cands) {
    if (ue_to_col[static_cast<std::size_t>(cd.ue)] >= 0 || col_used[static_cast<std::size_t>(cd.col)])
      continue;
    ue_to_col[static_cast<std::size_t>(cd.ue)] = cd.col;
    col_used[static_cast<std::size_t>(cd.col)] = true;
  }
}

}  // namespace

TrialResult run_trial(const SystemConfig& cfg, Rng& rng,
                      const std::vector<std::vector<int>>* selections) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  const auto codec = make_codec(cfg);
  const PilotBook book = PilotBook::from_config(cfg);

  const ChannelState channel = generate_channel(cfg.m, cfg.na, rng);
  const auto frames = selections ? build_frames(cfg, *codec, rng, *selections)
                                 : build_frames(cfg, *codec, rng);
  const ReceivedBlock rx = synthesize(cfg, book, frames, channel, rng);

  TrialResult out;
  for (const auto& f : frames) out.selections.push_back(f.subpilot);

  // SIC branch
  const FactorEstimates fe = ls_estimates(rx.yp, book, rx.noise_var);
  PeelResult peeled = peel(fe, {cfg.sic_max_iters, cfg.degree_tol, cfg.dup_threshold});
  out.trace = peeled.trace;
  const auto sic_decoded = decode_from_csi(rx.ym, peeled.csis, *codec);

  CsiSet all;
  std::vector<Bits> payloads;
  CsiSet sic_kept;
  std::vector<std::optional<Bits>> sic_msgs;
  for (std::size_t i = 0; i < peeled.csis.size(); ++i) {
    if (!sic_decoded[i]) continue;
    sic_kept.add(peeled.csis.columns[i], CsiSource::Sic);
    sic_msgs.push_back(sic_decoded[i]);
    all.add(peeled.csis.columns[i], CsiSource::Sic);
    payloads.push_back(*sic_decoded[i]);
  }
  out.sic_columns = static_cast<int>(sic_kept.size());

  // CICA branch
  out.na_hat = estimate_active_count(fe, rx.noise_var);
  int nr = remaining_count(out.na_hat, out.sic_columns);
  nr = std::min({nr, cfg.m, cfg.n_m() - 1});
  out.nr_hat = nr;
  if (nr >= 1 && cfg.n_i >= 1) {
    const Eigen::MatrixXd ym_res = residual(rx.ym, sic_kept, sic_msgs, *codec);
    FastIcaOptions opts;
    opts.max_iters = cfg.ica_max_iters;
    opts.tol = cfg.ica_tol;
    const auto runs = ica_bank(ym_res, nr, cfg.n_i, rng, opts);
    const VoteResult vote = cluster_and_vote(runs, nr, *codec);
    out.converged_runs = vote.converged_runs;
    for (const auto& msg : vote.messages) {
      all.add(csi_from_message(ym_res, msg, *codec), CsiSource::Cica);
      payloads.push_back(msg);
    }
    out.cica_columns = static_cast<int>(vote.messages.size());
  }

  // validation, RAR and UE-side detection
  const ValidityReport report = validate(all, fe, cfg.valid_threshold);
  out.valid_count = report.valid_count();
  const Eigen::VectorXd rar = build_rar(all, report);

  const auto na = static_cast<std::size_t>(cfg.na);
  std::vector<int> ue_to_col(na, -1);
  std::vector<bool> col_used(all.size(), false);
  greedy_match(channel.g, all, report.valid_set, cfg.dup_threshold, ue_to_col, col_used);
  for (int c : report.valid_set)
    if (!col_used[static_cast<std::size_t>(c)]) ++out.false_valid;

  std::vector<int> invalid_cols;
  for (std::size_t c = 0; c < all.size(); ++c)
    if (!report.valid[c]) invalid_cols.push_back(static_cast<int>(c));
  std::vector<int> ue_to_invalid(ue_to_col);
  greedy_match(channel.g, all, invalid_cols, cfg.dup_threshold, ue_to_invalid, col_used);
  for (std::size_t k = 0; k < na; ++k)
    if (ue_to_col[k] < 0 && ue_to_invalid[k] >= 0) ++out.missed_valid;

  out.success.assign(na, false);
  out.matched = ue_to_col;
  double sq_err = 0.0;
  auto& mt = out.metrics;
  for (std::size_t k = 0; k < na; ++k) {
    const SelfDetection sd = ue_self_detect(rar, channel.g.col(static_cast<Eigen::Index>(k)), 1.0,
                                            rx.noise_var, cfg.detect_threshold, rng);
    const bool in_b = ue_to_col[k] >= 0;
    out.detected += sd.detected ? 1 : 0;
    out.detect_errors += sd.detected != in_b ? 1 : 0;
    if (!in_b) continue;
    const auto c = static_cast<std::size_t>(ue_to_col[k]);
    if (payloads[c] != frames[k].info_bits) continue;
    out.success[k] = true;
    ++mt.successes;
    (all.source[c] == CsiSource::Sic ? mt.s_sic : mt.s_cica) += 1;
    sq_err += (all.columns[c] - channel.g.col(static_cast<Eigen::Index>(k))).squaredNorm() /
              static_cast<double>(cfg.m);
  }

  mt.p_s = cfg.na > 0 ? static_cast<double>(mt.successes) / cfg.na : 1.0;
  mt.p_md = 1.0 - mt.p_s;
  mt.mse = mt.successes > 0 ? sq_err / mt.successes : std::numeric_limits<double>::quiet_NaN();
  mt.throughput = throughput(mt.successes, cfg.n_pd, cfg.code_rate, cfg.tau_p * cfg.l + 1);
  mt.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void SweepSpec::normalize() {
  if (na.empty()) na = {base.na};
  if (m.empty()) m = {base.m};
  if (snr_db.empty()) snr_db = {base.snr_db};
  if (n_i.empty()) n_i = {base.n_i};
  if (tau_p.empty()) tau_p = {base.tau_p};
  if (l.empty()) l = {base.l};
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (zip_tau_l && tau_p.size() != l.size())
    throw ConfigError("zip_tau_l needs tau_p and l lists of equal length");
  for (const auto& b : baselines)
    if (b != "traditional" && b != "multipreamble_approx")
      throw ConfigError("unknown baseline: " + b);
}

std::vector<SystemConfig> SweepSpec::points() const {
  std::vector<std::pair<int, int>> pilots;
  if (zip_tau_l) {
    for (std::size_t i = 0; i < tau_p.size(); ++i) pilots.emplace_back(tau_p[i], l[i]);
  } else {
    for (int t : tau_p)
      for (int ll : l) pilots.emplace_back(t, ll);
  }
  std::vector<SystemConfig> out;
  for (int a : na)
    for (int mm : m)
      for (double s : snr_db)
        for (int ni : n_i)
          for (auto [t, ll] : pilots) {
            SystemConfig c = base;
            c.na = a;
            c.m = mm;
            c.snr_db = s;
            c.n_i = ni;
            c.tau_p = t;
            c.l = ll;
            c.validate();
            out.push_back(c);
          }
  return out;
}

MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary s;
  double sum = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) {
      sum += x;
      ++s.count;
    }
  if (s.count == 0) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.mean = sum / s.count;
  if (s.count > 1) {
    double ss = 0.0;
    for (double x : xs)
      if (!std::isnan(x)) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / (s.count - 1) / s.count);
  }
  return s;
}

namespace {

struct PointTrials {
  std::vector<TrialResult> gcica;
  std::vector<BaselineOutcome> traditional;
  std::vector<BaselineOutcome> multipreamble;
};

SweepRow make_row(const SystemConfig& cfg, const std::string& scheme, const std::vector<double>& ps,
                  const std::vector<double>& mse, const std::vector<double>& thr,
                  const std::vector<double>& ssic, const std::vector<double>& scica) {
  SweepRow r;
  r.cfg = cfg;
  r.scheme = scheme;
  r.trials = static_cast<int>(ps.size());
  r.p_s = summarize(ps);
  std::vector<double> pmd(ps.size());
  std::transform(ps.begin(), ps.end(), pmd.begin(), [](double p) { return 1.0 - p; });
  r.p_md = summarize(pmd);
  r.mse = summarize(mse);
  r.throughput = summarize(thr);
  r.s_sic = summarize(ssic);
  r.s_cica = summarize(scica);
  return r;
}

}  // namespace

SweepResult run_sweep(SweepSpec spec) {
  spec.normalize();
  const auto points = spec.points();
  const bool want_trad =
      std::find(spec.baselines.begin(), spec.baselines.end(), "traditional") != spec.baselines.end();
  const bool want_mp = std::find(spec.baselines.begin(), spec.baselines.end(),
                                 "multipreamble_approx") != spec.baselines.end();

  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<PointTrials> store(points.size());
  for (auto& p : store) {
    p.gcica.resize(trials);
    if (want_trad) p.traditional.resize(trials);
    if (want_mp) p.multipreamble.resize(trials);
  }

  const std::size_t total = points.size() * trials;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t p = job / trials;
      const std::size_t t = job % trials;
      try {
        const SystemConfig& cfg = points[p];
        Rng rng = trial_rng(cfg.seed, t);
        store[p].gcica[t] = run_trial(cfg, rng);
        if (want_trad) {
          Rng brng = baseline_rng(cfg.seed, t);
          store[p].traditional[t] =
              traditional_ra(cfg.na, cfg.tau_p * cfg.l, brng, cfg.n_pd, cfg.code_rate);
        }
        if (want_mp)
          store[p].multipreamble[t] = multipreamble_approx(
              std::span<const std::vector<int>>(store[p].gcica[t].selections), cfg.tau_p, cfg.n_pd,
              cfg.code_rate);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(spec.jobs, static_cast<int>(total)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const SystemConfig& cfg = points[p];
    std::vector<double> ps, mse, thr, ssic, scica;
    for (const auto& tr : store[p].gcica) {
      ps.push_back(tr.metrics.p_s);
      mse.push_back(tr.metrics.mse);
      thr.push_back(tr.metrics.throughput);
      ssic.push_back(tr.metrics.s_sic);
      scica.push_back(tr.metrics.s_cica);
    }
    SweepRow row = make_row(cfg, "gcica-ra", ps, mse, thr, ssic, scica);
    if (spec.analysis) {
      const EvolutionResult ar = analyze(cfg);
      row.p_s_upper = ar.bound.p_s_upper;
      row.p_md_lower = ar.bound.p_md_lower;
      row.throughput_upper = ar.bound.throughput_upper;
    }
    result.rows.push_back(row);

    auto baseline_row = [&](const std::vector<BaselineOutcome>& outs, const std::string& name) {
      std::vector<double> bps, bmse, bthr, zero;
      for (const auto& o : outs) {
        bps.push_back(cfg.na > 0 ? static_cast<double>(o.successes) / cfg.na : 1.0);
        bmse.push_back(std::numeric_limits<double>::quiet_NaN());
        bthr.push_back(o.throughput);
        zero.push_back(0.0);
      }
      result.rows.push_back(make_row(cfg, name, bps, bmse, bthr, zero, zero));
    };
    if (want_trad) baseline_row(store[p].traditional, "traditional");
    if (want_mp) baseline_row(store[p].multipreamble, "multipreamble_approx");
    if (spec.keep_trials) result.trials.push_back(std::move(store[p].gcica));
  }
  return result;
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory: " + dir.string());
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw IoError("output directory is not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace gcica
