#pragma once

// Channel coding and BPSK mapping. Codecs are immutable once built and may be
// shared freely between threads.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gcica/model.hpp"

namespace gcica {

/// A binary block code with hard-decision decoding.
///
/// encode() takes a whole number of info blocks and returns the concatenated
/// codewords; decode() takes a whole number of coded blocks worth of real
/// symbols (only their signs are used) and always returns a best-effort info
/// estimate.
class Codec {
 public:
  virtual ~Codec() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t info_block() const = 0;
  virtual std::size_t code_block() const = 0;

  double rate() const {
    return static_cast<double>(info_block()) / static_cast<double>(code_block());
  }

  virtual Bits encode(std::span<const std::uint8_t> info) const = 0;
  virtual Bits decode(std::span<const double> symbols) const = 0;
};

/// Build a codec covering exactly `n_pd` coded symbols at `rate`.
/// Known names: "default-ldpc" (rate 1/2), "uncoded" (rate 1).
std::shared_ptr<const Codec> make_codec(std::string_view name, int n_pd, double rate);
std::shared_ptr<const Codec> make_codec(const SystemConfig& cfg);

/// b -> 2b - 1.
std::vector<double> modulate(std::span<const std::uint8_t> bits);
/// x > 0 -> 1, else 0.
Bits demodulate(std::span<const double> symbols);

/// Full transmitted message: reference symbol +1 followed by BPSK(encode(info)).
Eigen::VectorXd message_symbols(const Codec& codec, std::span<const std::uint8_t> info);

/// Hamming distance between equal-length bit strings.
std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace gcica
