#include "gcica/codec.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "gcica/errors.hpp"
#include "gcica/ldpc.hpp"

namespace gcica {

std::vector<double> modulate(std::span<const std::uint8_t> bits) {
  std::vector<double> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ? 1.0 : -1.0;
  return out;
}

Bits demodulate(std::span<const double> symbols) {
  Bits out(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = symbols[i] > 0.0 ? 1 : 0;
  return out;
}

Eigen::VectorXd message_symbols(const Codec& codec, std::span<const std::uint8_t> info) {
  const Bits coded = codec.encode(info);
  Eigen::VectorXd v(static_cast<Eigen::Index>(coded.size()) + 1);
  v(0) = 1.0;
  for (std::size_t i = 0; i < coded.size(); ++i)
    v(static_cast<Eigen::Index>(i) + 1) = coded[i] ? 1.0 : -1.0;
  return v;
}

std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw UsageError("hamming: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
  return d;
}

Bits UncodedCodec::encode(std::span<const std::uint8_t> info) const {
  if (info.size() % static_cast<std::size_t>(n_) != 0)
    throw UsageError("uncoded: input length must be a multiple of the block length");
  return Bits(info.begin(), info.end());
}

Bits UncodedCodec::decode(std::span<const double> symbols) const {
  if (symbols.size() % static_cast<std::size_t>(n_) != 0)
    throw UsageError("uncoded: input length must be a multiple of the block length");
  return demodulate(symbols);
}

std::shared_ptr<const Codec> make_codec(std::string_view name, int n_pd, double rate) {
  // Building the LDPC encoder is the expensive part; codecs are immutable, so
  // share one instance per (name, length).
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, std::shared_ptr<const Codec>> cache;

  std::shared_ptr<const Codec> codec;
  const std::lock_guard lock(mutex);
  const auto key = std::make_pair(std::string(name), n_pd);
  if (auto it = cache.find(key); it != cache.end()) {
    codec = it->second;
  } else if (name == "default-ldpc") {
    if (n_pd < 12 || n_pd % 2 != 0)
      throw ConfigError("default-ldpc needs an even n_pd >= 12");
    codec = std::make_shared<const LdpcCodec>(n_pd);
  } else if (name == "uncoded") {
    codec = std::make_shared<const UncodedCodec>(n_pd);
  } else {
    throw ConfigError("unknown codec \"" + std::string(name) + "\"");
  }
  if (std::abs(codec->rate() - rate) > 1e-12)
    throw ConfigError("codec \"" + std::string(name) + "\" has rate " +
                      std::to_string(codec->rate()) + ", config asks for " + std::to_string(rate));
  cache.emplace(key, codec);
  return codec;
}

std::shared_ptr<const Codec> make_codec(const SystemConfig& cfg) {
  return make_codec(cfg.codec, cfg.n_pd, cfg.code_rate);
}

}  // namespace gcica
