#pragma once

// Clustering ICA: recovers the UEs the peeling decoder could not, from the
// message block with the SIC-decoded UEs cancelled.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gcica/codec.hpp"
#include "gcica/fastica.hpp"
#include "gcica/model.hpp"
#include "gcica/sic.hpp"

namespace gcica {

/// sum_t h_t^T h_t / M - tau_p * sigma^2 for one phase (unrounded).
double active_count_statistic(const FactorEstimates& fe, int phase, double noise_var);

/// Active-UE count from one phase's LS estimates, rounded and clamped at 0.
int estimate_active_count(const FactorEstimates& fe, int phase, double noise_var);

/// Active-UE count from the mean of the per-phase statistics.
int estimate_active_count(const FactorEstimates& fe, double noise_var);

/// max(na_hat - n_sic, 0).
int remaining_count(int na_hat, int n_sic);

/// Y_m - sum_i h_i v_i^T, with v_i the reconstructed message of each decoded
/// SIC column. Columns whose message is nullopt are left in.
Eigen::MatrixXd residual(const Eigen::MatrixXd& ym, const CsiSet& csis,
                         const std::vector<std::optional<Bits>>& decoded, const Codec& codec);

struct IcaRun {
  std::vector<int> rows;       // selected antenna rows of the residual
  Eigen::MatrixXd outputs;     // nr x N_m separated sequences
  int iterations = 0;
  bool converged = false;
};

/// N_I independent classifiers, each fed nr distinct random rows.
std::vector<IcaRun> ica_bank(const Eigen::MatrixXd& ym_res, int nr, int n_i, Rng& rng,
                             const FastIcaOptions& opts = {});

/// Sign-align a separated sequence on its reference symbol; the reference
/// position is set to exactly +1 (a zero is treated as positive).
Eigen::VectorXd fix_phase(const Eigen::Ref<const Eigen::VectorXd>& f);

struct ClusterSet {
  std::vector<Bits> seeds;                  // first converged run's decoded outputs
  std::vector<std::vector<Bits>> classes;   // members, seeds included
  std::vector<std::vector<int>> accumulators;  // sum of 2b - 1 per bit
};

struct VoteResult {
  std::vector<Bits> messages;  // one voted info-bit message per class
  ClusterSet clusters;
  int converged_runs = 0;
};

/// Decode every output of every converged run, assign it to the class whose
/// seed is nearest in Hamming distance (ties -> lowest class), accumulate
/// 2b - 1 and take the sign. Positions with a zero sum keep the seed's bit.
/// No converged run -> empty result.
VoteResult cluster_and_vote(const std::vector<IcaRun>& runs, int nr, const Codec& codec);

/// Voting stage on already-decoded outputs, grouped per run.
VoteResult vote_decoded(const std::vector<std::vector<Bits>>& decoded_runs, int nr);

/// Y_m' v / (v^T v) with v = [+1, BPSK(encode(bits))].
Eigen::VectorXd csi_from_message(const Eigen::MatrixXd& ym_res, std::span<const std::uint8_t> bits,
                                 const Codec& codec);

}  // namespace gcica
