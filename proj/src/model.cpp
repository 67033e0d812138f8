#include "gcica/model.hpp"

#include <cmath>
#include <string>

#include "gcica/codec.hpp"
#include "gcica/errors.hpp"

namespace gcica {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

int SystemConfig::info_length() const {
  return static_cast<int>(std::lround(static_cast<double>(n_pd) * code_rate));
}

double SystemConfig::noise_var() const { return std::pow(10.0, -snr_db / 10.0); }

void SystemConfig::validate() const {
  require(m >= 1, "m must be >= 1");
  require(na >= 0, "na must be >= 0");
  require(tau_p >= 1, "tau_p must be >= 1");
  require(l >= 1, "l must be >= 1");
  require(n_i >= 1, "n_i must be >= 1");
  require(n_pd >= 1, "n_pd must be >= 1");
  require(code_rate > 0.0 && code_rate <= 1.0, "code_rate must lie in (0, 1]");
  require(info_length() >= 1, "n_pd * code_rate must round to at least one info bit");
  require(!std::isnan(snr_db), "snr_db must be a number");
  require(sic_max_iters >= 1, "sic_max_iters must be >= 1");
  require(degree_tol > 0.0, "degree_tol must be > 0");
  require(dup_threshold > 0.0 && dup_threshold < 1.0, "dup_threshold must lie in (0, 1)");
  require(valid_threshold > 0.0 && valid_threshold < 1.0, "valid_threshold must lie in (0, 1)");
  require(detect_threshold > 0.0 && detect_threshold < 1.0, "detect_threshold must lie in (0, 1)");
  require(ica_max_iters >= 1, "ica_max_iters must be >= 1");
  require(ica_tol > 0.0, "ica_tol must be > 0");
  require(de_iters >= 1, "de_iters must be >= 1");
  require(pilot_book == "identity" || pilot_book == "hadamard",
          "pilot_book must be \"identity\" or \"hadamard\"");
  require(pilot_book != "hadamard" || is_power_of_two(tau_p),
          "hadamard pilot book needs tau_p to be a power of two");
}

PilotBook PilotBook::identity(int tau_p) {
  if (tau_p < 1) throw ConfigError("tau_p must be >= 1");
  return PilotBook(Eigen::MatrixXd::Identity(tau_p, tau_p));
}

PilotBook PilotBook::hadamard(int tau_p) {
  if (!is_power_of_two(tau_p)) throw ConfigError("hadamard pilot book needs tau_p = 2^k");
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (h.rows() < tau_p) {
    const Eigen::Index n = h.rows();
    Eigen::MatrixXd next(2 * n, 2 * n);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return PilotBook(h / std::sqrt(static_cast<double>(tau_p)));
}

PilotBook PilotBook::from_config(const SystemConfig& cfg) {
  return cfg.pilot_book == "hadamard" ? hadamard(cfg.tau_p) : identity(cfg.tau_p);
}

ChannelState generate_channel(int m, int na, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ChannelState state;
  state.g.resize(m, na);
  for (Eigen::Index k = 0; k < na; ++k)
    for (Eigen::Index i = 0; i < m; ++i) state.g(i, k) = normal(rng);
  return state;
}

std::vector<UplinkFrame> build_frames(const SystemConfig& cfg, const Codec& codec, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, cfg.tau_p - 1);
  std::vector<std::vector<int>> selections(static_cast<std::size_t>(cfg.na));
  for (auto& tuple : selections) {
    tuple.resize(static_cast<std::size_t>(cfg.l));
    for (auto& t : tuple) t = pick(rng);
  }
  return build_frames(cfg, codec, rng, selections);
}

std::vector<UplinkFrame> build_frames(const SystemConfig& cfg, const Codec& codec, Rng& rng,
                                      std::span<const std::vector<int>> selections) {
  if (static_cast<int>(selections.size()) != cfg.na)
    throw ConfigError("need one sub-pilot tuple per active UE");
  const auto k = static_cast<std::size_t>(cfg.info_length());
  if (k == 0 || k % codec.info_block() != 0)
    throw ConfigError("payload length does not fit the codec block structure");

  std::bernoulli_distribution coin(0.5);
  std::vector<UplinkFrame> frames;
  frames.reserve(selections.size());
  for (const auto& tuple : selections) {
    if (static_cast<int>(tuple.size()) != cfg.l) throw ConfigError("sub-pilot tuple length != l");
    for (int t : tuple)
      if (t < 0 || t >= cfg.tau_p) throw ConfigError("sub-pilot index out of range");
    UplinkFrame f;
    f.subpilot = tuple;
    f.info_bits.resize(k);
    for (auto& b : f.info_bits) b = coin(rng) ? 1 : 0;
    f.v = message_symbols(codec, f.info_bits);
    frames.push_back(std::move(f));
  }
  return frames;
}

ReceivedBlock synthesize(const SystemConfig& cfg, const PilotBook& book,
                         std::span<const UplinkFrame> frames, const ChannelState& channel,
                         Rng& rng) {
  if (channel.users() != static_cast<int>(frames.size()))
    throw ConfigError("channel columns must match the number of frames");
  if (channel.antennas() != cfg.m) throw ConfigError("channel rows must equal m");
  if (book.size() != cfg.tau_p) throw ConfigError("pilot book size must equal tau_p");

  ReceivedBlock rx;
  rx.noise_var = cfg.noise_var();
  const double sigma = std::sqrt(rx.noise_var);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto noise = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd z(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) z(r, c) = sigma * normal(rng);
    return z;
  };

  rx.yp.reserve(static_cast<std::size_t>(cfg.l));
  for (int ph = 0; ph < cfg.l; ++ph) rx.yp.push_back(noise(cfg.m, cfg.tau_p));
  rx.ym = noise(cfg.m, cfg.n_m());

  // Y_p^l += g_k S_t^T for the UE's pilot in phase l
  const Eigen::MatrixXd& s = book.matrix();
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    if (static_cast<int>(f.subpilot.size()) != cfg.l || f.v.size() != cfg.n_m())
      throw ConfigError("frame dimensions do not match the configuration");
    const auto gk = channel.g.col(static_cast<Eigen::Index>(k));
    for (int ph = 0; ph < cfg.l; ++ph)
      rx.yp[static_cast<std::size_t>(ph)].noalias() +=
          gk * s.col(f.subpilot[static_cast<std::size_t>(ph)]).transpose();
  }
  if (!frames.empty()) {
    Eigen::MatrixXd v(static_cast<Eigen::Index>(frames.size()), cfg.n_m());
    for (std::size_t k = 0; k < frames.size(); ++k)
      v.row(static_cast<Eigen::Index>(k)) = frames[k].v.transpose();
    rx.ym.noalias() += channel.g * v;
  }
  return rx;
}

}  // namespace gcica
