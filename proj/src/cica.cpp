#include "gcica/cica.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "gcica/errors.hpp"

namespace gcica {

double active_count_statistic(const FactorEstimates& fe, int phase, double noise_var) {
  if (phase < 0 || phase >= fe.phases()) throw UsageError("phase index out of range");
  const auto& row = fe.h[static_cast<std::size_t>(phase)];
  double energy = 0.0;
  for (const auto& h : row) energy += h.squaredNorm() / static_cast<double>(h.size());
  return energy - static_cast<double>(row.size()) * noise_var;
}

int estimate_active_count(const FactorEstimates& fe, int phase, double noise_var) {
  const double n = std::round(active_count_statistic(fe, phase, noise_var));
  return n > 0.0 ? static_cast<int>(n) : 0;
}

int estimate_active_count(const FactorEstimates& fe, double noise_var) {
  if (fe.phases() == 0) return 0;
  double sum = 0.0;
  for (int l = 0; l < fe.phases(); ++l) sum += active_count_statistic(fe, l, noise_var);
  const double n = std::round(sum / fe.phases());
  return n > 0.0 ? static_cast<int>(n) : 0;
}

int remaining_count(int na_hat, int n_sic) { return std::max(na_hat - n_sic, 0); }

Eigen::MatrixXd residual(const Eigen::MatrixXd& ym, const CsiSet& csis,
                         const std::vector<std::optional<Bits>>& decoded, const Codec& codec) {
  if (decoded.size() != csis.size()) throw UsageError("residual: one decode per CSI column");
  Eigen::MatrixXd out = ym;
  for (std::size_t i = 0; i < csis.size(); ++i) {
    if (!decoded[i]) continue;
    const Eigen::VectorXd v = message_symbols(codec, *decoded[i]);
    if (v.size() != ym.cols()) throw ConfigError("reconstructed message length != N_m");
    out.noalias() -= csis.columns[i] * v.transpose();
  }
  return out;
}

std::vector<IcaRun> ica_bank(const Eigen::MatrixXd& ym_res, int nr, int n_i, Rng& rng,
                             const FastIcaOptions& opts) {
  const auto m = static_cast<int>(ym_res.rows());
  if (nr < 1 || nr > m) throw UsageError("ica_bank needs 1 <= nr <= M");

  std::vector<IcaRun> runs;
  runs.reserve(static_cast<std::size_t>(n_i));
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int r = 0; r < n_i; ++r) {
    // partial Fisher-Yates: first nr entries become the selection
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < nr; ++i) {
      std::uniform_int_distribution<int> pick(i, m - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    IcaRun run;
    run.rows.assign(pool.begin(), pool.begin() + nr);
    Eigen::MatrixXd x(nr, ym_res.cols());
    for (int i = 0; i < nr; ++i) x.row(i) = ym_res.row(run.rows[static_cast<std::size_t>(i)]);

    FastIcaResult ica = fast_ica(x, rng, opts);
    run.iterations = ica.iterations;
    run.converged = ica.converged && !ica.rank_deficient;
    run.outputs = std::move(ica.sources);
    runs.push_back(std::move(run));
  }
  return runs;
}

Eigen::VectorXd fix_phase(const Eigen::Ref<const Eigen::VectorXd>& f) {
  if (f.size() == 0) return f;
  Eigen::VectorXd out = (f(0) < 0.0) ? Eigen::VectorXd(-f) : Eigen::VectorXd(f);
  out(0) = 1.0;
  return out;
}

VoteResult vote_decoded(const std::vector<std::vector<Bits>>& decoded_runs, int nr) {
  VoteResult out;
  if (decoded_runs.empty() || nr < 1) return out;
  out.converged_runs = static_cast<int>(decoded_runs.size());

  auto& cs = out.clusters;
  cs.seeds = decoded_runs.front();
  if (static_cast<int>(cs.seeds.size()) != nr) throw UsageError("seed run must have nr outputs");
  const std::size_t len = cs.seeds.front().size();
  cs.classes.assign(static_cast<std::size_t>(nr), {});
  cs.accumulators.assign(static_cast<std::size_t>(nr), std::vector<int>(len, 0));

  for (const auto& run : decoded_runs) {
    for (const auto& bits : run) {
      std::size_t best = 0;
      std::size_t best_dist = std::numeric_limits<std::size_t>::max();
      for (std::size_t j = 0; j < cs.seeds.size(); ++j) {
        const std::size_t d = hamming(bits, cs.seeds[j]);
        if (d < best_dist) {
          best_dist = d;
          best = j;
        }
      }
      auto& acc = cs.accumulators[best];
      for (std::size_t p = 0; p < len; ++p) acc[p] += bits[p] ? 1 : -1;
      cs.classes[best].push_back(bits);
    }
  }

  out.messages.reserve(cs.seeds.size());
  for (std::size_t j = 0; j < cs.seeds.size(); ++j) {
    Bits msg(len);
    for (std::size_t p = 0; p < len; ++p) {
      const int a = cs.accumulators[j][p];
      msg[p] = a > 0 ? 1 : (a < 0 ? 0 : cs.seeds[j][p]);
    }
    out.messages.push_back(std::move(msg));
  }
  return out;
}

VoteResult cluster_and_vote(const std::vector<IcaRun>& runs, int nr, const Codec& codec) {
  std::vector<std::vector<Bits>> decoded;
  for (const auto& run : runs) {
    if (!run.converged || run.outputs.rows() != nr) continue;
    std::vector<Bits> outputs;
    outputs.reserve(static_cast<std::size_t>(nr));
    for (Eigen::Index i = 0; i < run.outputs.rows(); ++i) {
      const Eigen::VectorXd fixed = fix_phase(run.outputs.row(i).transpose());
      outputs.push_back(codec.decode(
          std::span<const double>(fixed.data() + 1, static_cast<std::size_t>(fixed.size() - 1))));
    }
    decoded.push_back(std::move(outputs));
  }
  return vote_decoded(decoded, nr);
}

Eigen::VectorXd csi_from_message(const Eigen::MatrixXd& ym_res, std::span<const std::uint8_t> bits,
                                 const Codec& codec) {
  const Eigen::VectorXd v = message_symbols(codec, bits);
  if (v.size() != ym_res.cols()) throw ConfigError("reconstructed message length != N_m");
  return ym_res * v / v.squaredNorm();
}

}  // namespace gcica
