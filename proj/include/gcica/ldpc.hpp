#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gcica/codec.hpp"

namespace gcica {

/// Column-weight-3, row-weight-~6 rate-1/2 LDPC code with a systematic
/// encoder and hard-decision bit-flipping decoder.
///
/// The parity-check matrix is grown column by column, attaching each edge to
/// the least-loaded check that does not close a 4-cycle; with girth >= 6 the
/// flipping rule corrects every single-bit error. The construction is seeded
/// by a fixed constant, so a given length always yields the same code.
/// Parity checks of a rank-deficient H leave extra free positions; those are
/// pinned to zero so the rate is exactly 1/2.
class LdpcCodec final : public Codec {
 public:
  static constexpr int kColumnWeight = 3;

  /// `n` must be even and at least 12.
  explicit LdpcCodec(int n, int max_flip_iters = 60);

  std::string_view name() const override { return "default-ldpc"; }
  std::size_t info_block() const override { return static_cast<std::size_t>(k_); }
  std::size_t code_block() const override { return static_cast<std::size_t>(n_); }

  Bits encode(std::span<const std::uint8_t> info) const override;
  Bits decode(std::span<const double> symbols) const override;

  /// Single-block helpers.
  Bits encode_block(std::span<const std::uint8_t> info) const;
  Bits flip_decode(Bits word) const;  // returns the corrected codeword
  Bits extract_info(std::span<const std::uint8_t> word) const;
  bool is_codeword(std::span<const std::uint8_t> word) const;

  int checks() const { return m_; }
  const std::vector<std::vector<int>>& check_columns() const { return check_cols_; }
  const std::vector<std::array<int, kColumnWeight>>& column_checks() const { return col_checks_; }
  /// True when no two checks share more than one column.
  bool four_cycle_free() const;

 private:
  void build_graph();
  void build_encoder();

  int n_;
  int m_;
  int k_;
  int max_flip_iters_;
  std::vector<std::array<int, kColumnWeight>> col_checks_;
  std::vector<std::vector<int>> check_cols_;
  std::vector<int> info_pos_;  // codeword positions carrying info bits, ascending
  std::vector<int> parity_pos_;  // pivot column of each parity row
  std::vector<std::vector<std::uint64_t>> parity_rows_;  // packed over info_pos_
};

/// Rate-1 pass-through; used to isolate receiver behaviour from coding gain.
class UncodedCodec final : public Codec {
 public:
  explicit UncodedCodec(int n) : n_(n) {}
  std::string_view name() const override { return "uncoded"; }
  std::size_t info_block() const override { return static_cast<std::size_t>(n_); }
  std::size_t code_block() const override { return static_cast<std::size_t>(n_); }
  Bits encode(std::span<const std::uint8_t> info) const override;
  Bits decode(std::span<const double> symbols) const override;

 private:
  int n_;
};

}  // namespace gcica
