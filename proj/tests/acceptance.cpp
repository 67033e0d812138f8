// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance [--criterion N] [--jobs J]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gcica/analysis.hpp"
#include "gcica/cica.hpp"
#include "gcica/codec.hpp"
#include "gcica/harness.hpp"
#include "gcica/model.hpp"
#include "gcica/results_io.hpp"
#include "gcica/sic.hpp"
#include "oracles.hpp"

using namespace gcica;

namespace {

int g_jobs = 1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

// 1: five-UE example, noise-free
Verdict fig3() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemConfig c = oracle::fig3_config();
  const auto sel = oracle::fig3_selections();
  Verdict v;

  // SIC stage on its own
  Rng rng(2024);
  const auto codec = make_codec(c);
  const PilotBook book = PilotBook::from_config(c);
  const ChannelState ch = generate_channel(c.m, c.na, rng);
  const auto frames = build_frames(c, *codec, rng, sel);
  const ReceivedBlock rx = synthesize(c, book, frames, ch, rng);
  const PeelResult pr = peel(ls_estimates(rx.yp, book, rx.noise_var),
                             {c.sic_max_iters, c.degree_tol, c.dup_threshold});
  std::set<int> sic_ues;
  bool all_matched = true;
  for (const auto& col : pr.csis.columns) {
    int hit = -1;
    for (int k = 0; k < c.na; ++k)
      if (cosine(col, ch.g.col(k)) > 0.95) hit = k;
    if (hit < 0) all_matched = false;
    sic_ues.insert(hit);
  }
  const bool sic_ok = all_matched && pr.csis.size() == 3 && sic_ues == std::set<int>{0, 1, 2};

  // full pipeline
  Rng rng2(2024);
  const TrialResult r = run_trial(c, rng2, &sel);
  bool cica_ok = r.metrics.s_sic == 3 && r.metrics.s_cica == 2;
  for (int k : {3, 4})
    cica_ok = cica_ok && r.success[static_cast<std::size_t>(k)] &&
              r.matched[static_cast<std::size_t>(k)] >= r.sic_columns;
  const double secs = seconds_since(t0);
  v.pass = sic_ok && cica_ok && secs < 5.0;
  v.detail = "sic_columns=" + std::to_string(pr.csis.size()) + " sic_ues={";
  for (int u : sic_ues) v.detail += std::to_string(u + 1) + " ";
  v.detail += "} s_sic=" + std::to_string(r.metrics.s_sic) +
              " s_cica=" + std::to_string(r.metrics.s_cica) + " runtime=" + fmt("%.2fs", secs);
  return v;
}

// 2: density evolution against index-aware peeling
Verdict de_vs_peeling() {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v{true, ""};
  constexpr int kGraphs = 100000;
  std::mt19937_64 rng(77);
  for (auto [na, tau, l] : {std::tuple{10, 10, 2}, std::tuple{20, 10, 2}, std::tuple{20, 6, 3}}) {
    const double de = evolve(degree_distributions(na, tau, l), 1000).p_fail;
    long failed = 0;
    for (int g = 0; g < kGraphs; ++g) {
      const auto done = oracle::index_aware_peel(oracle::random_selections(na, tau, l, rng), tau);
      failed += std::count(done.begin(), done.end(), false);
    }
    const double mc = static_cast<double>(failed) / (static_cast<double>(kGraphs) * na);
    const double gap = std::abs(de - mc);
    v.pass = v.pass && gap < 0.01;
    char buf[160];
    std::snprintf(buf, sizeof buf, "(%d,%d,%d) de=%.4g mc=%.4g gap=%.4g; ", na, tau, l, de, mc, gap);
    v.detail += buf;
  }
  const double secs = seconds_since(t0);
  v.pass = v.pass && secs < 60.0;
  v.detail += "runtime=" + fmt("%.1fs", secs);
  return v;
}

// 3: degree and active-count concentration at M = 400, sigma^2 = 0.01
Verdict concentration() {
  Verdict v{true, ""};
  constexpr int m = 400;
  constexpr double var = 0.01;
  Rng rng(303);
  std::normal_distribution<double> normal(0.0, std::sqrt(var));
  for (int d = 1; d <= 6; ++d) {
    int correct = 0;
    constexpr int kDraws = 10000;
    for (int i = 0; i < kDraws; ++i) {
      const ChannelState ch = generate_channel(m, d, rng);
      Eigen::VectorXd h = ch.g.rowwise().sum();
      for (Eigen::Index j = 0; j < h.size(); ++j) h(j) += normal(rng);
      correct += degree_of(h, var) == d ? 1 : 0;
    }
    const double frac = static_cast<double>(correct) / kDraws;
    v.pass = v.pass && frac >= 0.99;
    v.detail += "d" + std::to_string(d) + "=" + fmt("%.4f", frac) + " ";
  }

  SystemConfig c;
  c.m = m;
  c.na = 20;
  c.tau_p = 10;
  c.l = 2;
  c.snr_db = 20.0;  // sigma^2 = 0.01
  c.n_pd = 64;
  const auto codec = make_codec(c);
  const PilotBook book = PilotBook::from_config(c);
  int exact = 0;
  constexpr int kTrials = 1000;
  for (int t = 0; t < kTrials; ++t) {
    Rng r = trial_rng(c.seed, static_cast<std::uint64_t>(t));
    const ChannelState ch = generate_channel(c.m, c.na, r);
    const auto frames = build_frames(c, *codec, r);
    const ReceivedBlock rx = synthesize(c, book, frames, ch, r);
    exact += estimate_active_count(ls_estimates(rx.yp, book, rx.noise_var), rx.noise_var) == c.na;
  }
  const double frac = static_cast<double>(exact) / kTrials;
  v.pass = v.pass && frac >= 0.99;
  v.detail += "na_hat_exact=" + fmt("%.3f", frac);
  return v;
}

// 4: BER lower bound
Verdict ber_bound() {
  Verdict v;
  std::mt19937_64 rng(404);
  std::normal_distribution<double> normal;
  constexpr long kSamples = 10000000;
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < kSamples; ++i) {
    const double x = 0.5 * std::erfc(std::abs(normal(rng)));
    s += x;
    s2 += x * x;
  }
  const double mean = s / kSamples;
  const double se = std::sqrt((s2 / kSamples - mean * mean) / kSamples);
  const double b1 = ber_lower_bound(1);
  const double z = std::abs(b1 - mean) / se;
  bool decreasing = true;
  double prev = b1;
  std::string seq;
  for (int m : {1, 4, 16, 64}) {
    const double b = ber_lower_bound(m);
    if (m > 1 && !(b < prev)) decreasing = false;
    prev = b;
    seq += fmt("%.4g ", b);
  }
  v.pass = z <= 3.0 && decreasing;
  v.detail = "bound(1)=" + fmt("%.6f", b1) + " mc=" + fmt("%.6f", mean) + " z=" + fmt("%.2f", z) +
             " M{1,4,16,64}: " + seq;
  return v;
}

const SweepRow* find_row(const SweepResult& res, const std::string& scheme, int na, int tau, int l,
                         int n_i, double snr) {
  for (const auto& r : res.rows)
    if (r.scheme == scheme && r.cfg.na == na && r.cfg.tau_p == tau && r.cfg.l == l &&
        r.cfg.n_i == n_i && r.cfg.snr_db == snr)
      return &r;
  return nullptr;
}

SystemConfig desk_base() {
  SystemConfig c;
  c.m = 100;
  c.na = 20;
  c.tau_p = 10;
  c.l = 2;
  c.snr_db = 10.0;
  c.n_i = 10;
  c.seed = 2024;
  return c;
}

// 5: empirical access never beats the analytical bounds
Verdict dominance() {
  SweepSpec spec;
  spec.base = desk_base();
  spec.na = {10, 20, 30};
  spec.trials = 500;
  spec.analysis = true;
  spec.jobs = g_jobs;
  spec.keep_trials = false;
  const SweepResult res = run_sweep(spec);
  Verdict v{true, ""};
  for (const auto& r : res.rows) {
    const bool ok = r.p_s.mean <= *r.p_s_upper + 0.02 && r.p_md.mean >= *r.p_md_lower - 0.02;
    v.pass = v.pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "na=%d p_s=%.3f<=%.3f p_md=%.3f>=%.3f; ", r.cfg.na, r.p_s.mean,
                  *r.p_s_upper, r.p_md.mean, *r.p_md_lower);
    v.detail += buf;
  }
  return v;
}

// 6: trends over N_I and SNR
Verdict trends() {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v{true, ""};
  const std::vector<int> nis{5, 10, 20, 30};
  SweepSpec spec;
  spec.base = desk_base();
  spec.n_i = nis;
  spec.trials = 200;
  spec.jobs = g_jobs;
  spec.keep_trials = false;
  const SweepResult by_ni = run_sweep(spec);
  const double t_ni = seconds_since(t0);
  std::vector<double> ps, mse, x;
  for (int ni : nis) {
    const SweepRow* r = find_row(by_ni, "gcica-ra", 20, 10, 2, ni, 10.0);
    ps.push_back(r->p_s.mean);
    mse.push_back(r->mse.mean);
    x.push_back(ni);
  }
  bool plateau = ps.back() > ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) plateau = plateau && ps[i] - ps[i - 1] >= -0.01;
  const double rho_mse = oracle::spearman(x, mse);
  const bool mse_down = rho_mse < 0.0 && mse.back() < mse.front();

  const auto t1 = std::chrono::steady_clock::now();
  const std::vector<double> snrs{5.0, 10.0, 15.0, 20.0};
  spec.n_i = {};
  spec.snr_db = snrs;
  const SweepResult by_snr = run_sweep(spec);
  const double t_snr = seconds_since(t1);
  std::vector<double> pmd;
  for (double s : snrs) pmd.push_back(find_row(by_snr, "gcica-ra", 20, 10, 2, 10, s)->p_md.mean);
  const double rho_pmd = oracle::spearman(snrs, pmd);
  const bool pmd_down = rho_pmd < 0.0 && pmd.back() < pmd.front();

  v.pass = plateau && mse_down && pmd_down && t_ni < 600.0 && t_snr < 600.0;
  v.detail = "p_s(N_I)=";
  for (double p : ps) v.detail += fmt("%.3f ", p);
  v.detail += plateau ? "[ok] " : "[bad] ";
  v.detail += "mse(N_I)=";
  for (double e : mse) v.detail += fmt("%.4g ", e);
  v.detail += "rho=" + fmt("%.2f", rho_mse) + (mse_down ? " [ok] " : " [bad] ");
  v.detail += "p_md(snr)=";
  for (double p : pmd) v.detail += fmt("%.3f ", p);
  v.detail += "rho=" + fmt("%.2f", rho_pmd) + (pmd_down ? " [ok] " : " [bad] ");
  v.detail += "runtime=" + fmt("%.0fs", t_ni) + "+" + fmt("%.0fs", t_snr);
  return v;
}

// 7: throughput ordering at tau_p * L = 18
Verdict ordering() {
  SweepSpec spec;
  spec.base = desk_base();
  spec.base.n_i = 20;
  spec.na = {10, 20, 30, 40};
  spec.tau_p = {9, 6};
  spec.l = {2, 3};
  spec.zip_tau_l = true;
  spec.trials = 200;
  spec.baselines = {"traditional", "multipreamble_approx"};
  spec.analysis = true;
  spec.jobs = g_jobs;
  spec.keep_trials = false;
  const SweepResult res = run_sweep(spec);
  Verdict v{true, ""};
  for (int na : spec.na)
    for (std::size_t i = 0; i < spec.tau_p.size(); ++i) {
      const int tau = spec.tau_p[i], l = spec.l[i];
      const SweepRow* g = find_row(res, "gcica-ra", na, tau, l, 20, 10.0);
      const SweepRow* mp = find_row(res, "multipreamble_approx", na, tau, l, 20, 10.0);
      const SweepRow* tr = find_row(res, "traditional", na, tau, l, 20, 10.0);
      const bool ok = g->throughput.mean > mp->throughput.mean &&
                      mp->throughput.mean > tr->throughput.mean &&
                      g->throughput.mean < *g->throughput_upper;
      v.pass = v.pass && ok;
      char buf[200];
      std::snprintf(buf, sizeof buf, "(%d,%d,%d) g=%.2f mp=%.2f tr=%.2f up=%.2f%s; ", na, tau, l,
                    g->throughput.mean, mp->throughput.mean, tr->throughput.mean,
                    *g->throughput_upper, ok ? "" : " [bad]");
      v.detail += buf;
    }
  return v;
}

// 8: invariant battery
Verdict invariants() {
  std::map<std::string, bool> ok;

  {  // favorable propagation: normalized inner products concentrate as M grows
    Rng rng(801);
    bool good = true;
    double prev_cross = INFINITY;
    for (int m : {100, 400, 1600, 6400}) {
      const ChannelState ch = generate_channel(m, 20, rng);
      const double rm = std::sqrt(static_cast<double>(m));
      double cross = 0.0, self = 0.0;
      for (int a = 0; a < 20; ++a) {
        self = std::max(self, std::abs(ch.g.col(a).squaredNorm() / m - 1.0));
        for (int b = a + 1; b < 20; ++b)
          cross = std::max(cross, std::abs(ch.g.col(a).dot(ch.g.col(b))) / m);
      }
      good = good && cross <= 5.0 / rm && self <= 5.0 * std::sqrt(2.0) / rm && cross < prev_cross;
      prev_cross = cross;
    }
    ok["favorable-propagation"] = good;
  }

  {  // peeling conservation: every channel ends up harvested or still in the residual
    Rng rng(802);
    bool good = true;
    for (int rep = 0; rep < 200 && good; ++rep) {
      SystemConfig c;
      c.m = 400;
      c.na = 12;
      c.tau_p = 8;
      c.l = 2;
      c.snr_db = INFINITY;
      c.n_pd = 32;
      const auto codec = make_codec(c);
      const PilotBook book = PilotBook::from_config(c);
      const ChannelState ch = generate_channel(c.m, c.na, rng);
      const auto frames = build_frames(c, *codec, rng);
      const ReceivedBlock rx = synthesize(c, book, frames, ch, rng);
      const PeelResult pr = peel(ls_estimates(rx.yp, book, rx.noise_var),
                                 {c.sic_max_iters, c.degree_tol, c.dup_threshold});
      std::vector<bool> harvested(static_cast<std::size_t>(c.na), false);
      for (const auto& col : pr.csis.columns) {
        int hit = -1;
        for (int k = 0; k < c.na; ++k)
          if (cosine(col, ch.g.col(k)) > 0.95) hit = k;
        if (hit < 0 || harvested[static_cast<std::size_t>(hit)]) good = false;
        else harvested[static_cast<std::size_t>(hit)] = true;
      }
      // residual at (l, t) = sum of channels of unharvested members
      for (int l = 0; l < c.l && good; ++l)
        for (int t = 0; t < c.tau_p; ++t) {
          Eigen::VectorXd expect = Eigen::VectorXd::Zero(c.m);
          for (int k = 0; k < c.na; ++k)
            if (frames[static_cast<std::size_t>(k)].subpilot[static_cast<std::size_t>(l)] == t &&
                !harvested[static_cast<std::size_t>(k)])
              expect += ch.g.col(k);
          if ((pr.residual.h[l][t] - expect).norm() > 1e-6 * std::sqrt(c.m)) good = false;
        }
    }
    ok["peeling-conservation"] = good;
  }

  {  // phase fix is idempotent and sign-invariant
    Rng rng(803);
    std::normal_distribution<double> normal;
    bool good = true;
    for (int rep = 0; rep < 500; ++rep) {
      Eigen::VectorXd f(33);
      for (auto& x : f) x = normal(rng);
      const Eigen::VectorXd a = fix_phase(f);
      good = good && a(0) == 1.0 && fix_phase(a) == a && fix_phase(-f) == a;
    }
    ok["phase-fix-idempotence"] = good;
  }

  {  // clustering is safe under permutation of outputs within runs
    std::mt19937_64 rng(804);
    std::bernoulli_distribution coin(0.5), flip(0.05);
    bool good = true;
    for (int rep = 0; rep < 100; ++rep) {
      const int nr = 4, len = 96;
      std::vector<Bits> truth(nr, Bits(len));
      for (auto& b : truth)
        for (auto& x : b) x = coin(rng);
      std::vector<std::vector<Bits>> runs(7);
      for (auto& run : runs) {
        run = truth;
        for (auto& b : run)
          for (auto& x : b) x ^= flip(rng) ? 1 : 0;
      }
      const VoteResult base = vote_decoded(runs, nr);
      auto shuffled = runs;
      for (std::size_t r = 1; r < shuffled.size(); ++r)
        std::shuffle(shuffled[r].begin(), shuffled[r].end(), rng);
      const VoteResult perm = vote_decoded(shuffled, nr);
      int distance = 0;
      for (std::size_t k = 0; k < truth.size(); ++k)
        distance += static_cast<int>(hamming(base.messages[k], truth[k]));
      good = good && base.messages == perm.messages && distance <= 4;
    }
    ok["clustering-permutation-safety"] = good;
  }

  {  // determinism: byte-identical outputs across runs and worker counts
    SweepSpec spec;
    spec.base = desk_base();
    spec.base.m = 60;
    spec.base.n_pd = 256;
    spec.base.n_i = 4;
    spec.na = {6, 14};
    spec.snr_db = {5.0, 15.0};
    spec.trials = 8;
    spec.baselines = {"traditional", "multipreamble_approx"};
    spec.analysis = true;
    spec.jobs = 1;
    const SweepResult a = run_sweep(spec);
    const SweepResult a2 = run_sweep(spec);
    spec.jobs = 3;
    const SweepResult b = run_sweep(spec);
    auto dump = [&](const SweepResult& r) {
      return results_csv(r.rows, true) + summary_json(spec, r) + trials_jsonl(r);
    };
    ok["determinism"] = dump(a) == dump(a2) && dump(a) == dump(b);
  }

  {  // metric algebra
    bool good = true;
    for (int na : {5, 15, 30}) {
      SystemConfig c = desk_base();
      c.m = 80;
      c.na = na;
      c.n_pd = 256;
      c.n_i = 5;
      for (std::uint64_t t = 0; t < 6; ++t) {
        Rng rng = trial_rng(808, t);
        const TrialResult r = run_trial(c, rng);
        const auto& mt = r.metrics;
        int succ = 0;
        for (bool s : r.success) succ += s ? 1 : 0;
        good = good && mt.successes == mt.s_sic + mt.s_cica && succ == mt.successes &&
               mt.successes <= c.na && std::abs(mt.p_s + mt.p_md - 1.0) < 1e-12 &&
               mt.p_s >= 0.0 && mt.p_s <= 1.0 &&
               mt.throughput == throughput(mt.successes, c.n_pd, c.code_rate, gcica_overhead(c)) &&
               (mt.successes == 0 ? std::isnan(mt.mse) : mt.mse >= 0.0) && r.nr_hat <= c.m;
      }
    }
    ok["metric-algebra"] = good;
  }

  Verdict v{true, ""};
  for (const auto& [name, good] : ok) {
    v.pass = v.pass && good;
    v.detail += name + (good ? "=ok " : "=FAIL ");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string which = "all";
  app.add_option("--criterion", which, "1..8 or all");
  app.add_option("--jobs", g_jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
      {"fig3-reproduction", fig3},       {"density-evolution-vs-peeling", de_vs_peeling},
      {"degree-concentration", concentration}, {"ber-lower-bound", ber_bound},
      {"bound-dominance", dominance},    {"trends", trends},
      {"throughput-ordering", ordering}, {"invariants", invariants}};

  bool every = true;
  bool ran = false;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (which != "all" && which != std::to_string(i + 1)) continue;
    ran = true;
    const Verdict v = all[i].second();
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, all[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    every = every && v.pass;
  }
  if (!ran) {
    std::fprintf(stderr, "unknown criterion: %s\n", which.c_str());
    return 2;
  }
  return every ? 0 : 1;
}
