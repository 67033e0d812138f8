#pragma once

// System model: configuration, pilot codebook, channels, UE frames and the
// received pilot/message blocks at the base station.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gcica {

class Codec;

using Bits = std::vector<std::uint8_t>;
using Rng = std::mt19937_64;

/// Every scheme and simulation parameter. Field names double as config-file
/// keys, so keep them lower_snake_case.
struct SystemConfig {
  int m = 400;                    // BS antennas
  int na = 20;                    // active UEs per RA slot
  int tau_p = 10;                 // orthogonal sub-pilots per phase
  int l = 2;                      // sub-pilot phases
  int n_i = 10;                   // ICA classifiers
  double snr_db = 10.0;           // per-symbol receive SNR; +inf means noise-free
  int n_pd = 2048;                // coded payload symbols
  double code_rate = 0.5;
  std::string codec = "default-ldpc";
  std::string pilot_book = "identity";  // or "hadamard"
  int sic_max_iters = 100;
  double degree_tol = 0.3;
  double dup_threshold = 0.5;
  double valid_threshold = 0.3;
  double detect_threshold = 0.5;
  int ica_max_iters = 200;
  double ica_tol = 1e-6;
  int de_iters = 1000;
  std::uint64_t seed = 1;

  int n_m() const { return n_pd + 1; }
  int info_length() const;
  /// sigma^2 = 10^(-snr_db/10).
  double noise_var() const;
  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// Real orthonormal sub-pilot codebook; column t is pilot S_t.
class PilotBook {
 public:
  static PilotBook identity(int tau_p);
  /// Normalized Sylvester-Hadamard book; tau_p must be a power of two.
  static PilotBook hadamard(int tau_p);
  static PilotBook from_config(const SystemConfig& cfg);

  int size() const { return static_cast<int>(s_.cols()); }
  const Eigen::MatrixXd& matrix() const { return s_; }
  auto pilot(int t) const { return s_.col(t); }

 private:
  explicit PilotBook(Eigen::MatrixXd s) : s_(std::move(s)) {}
  Eigen::MatrixXd s_;
};

/// Small-scale fading G (M x Na). Power control makes rho_k * beta_k = 1, so
/// the effective per-UE gain is folded in as unity.
struct ChannelState {
  Eigen::MatrixXd g;

  int antennas() const { return static_cast<int>(g.rows()); }
  int users() const { return static_cast<int>(g.cols()); }
};

ChannelState generate_channel(int m, int na, Rng& rng);

/// One UE's transmission. Sub-pilot indices are 0-based.
struct UplinkFrame {
  std::vector<int> subpilot;
  Bits info_bits;
  Eigen::VectorXd v;  // [RS = +1, BPSK(encode(info_bits))]
};

/// Fresh frames: independent uniform sub-pilot per phase, uniform payload.
std::vector<UplinkFrame> build_frames(const SystemConfig& cfg, const Codec& codec, Rng& rng);

/// Same, with the sub-pilot tuples pinned (one 0-based tuple per UE).
std::vector<UplinkFrame> build_frames(const SystemConfig& cfg, const Codec& codec, Rng& rng,
                                      std::span<const std::vector<int>> selections);

struct ReceivedBlock {
  std::vector<Eigen::MatrixXd> yp;  // L blocks, each M x tau_p
  Eigen::MatrixXd ym;               // M x N_m
  double noise_var = 0.0;
};

/// Superimposed sub-pilot and message signals plus AWGN. Noise is drawn first
/// and in a fixed order, so for a given stream state it does not depend on
/// which UEs transmit.
ReceivedBlock synthesize(const SystemConfig& cfg, const PilotBook& book,
                         std::span<const UplinkFrame> frames, const ChannelState& channel,
                         Rng& rng);

}  // namespace gcica
