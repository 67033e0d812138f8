#include "gcica/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>

#include "gcica/errors.hpp"

namespace gcica {

namespace {

constexpr std::uint64_t kGraphSeed = 0x9e3779b97f4a7c15ULL;

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

bool test_bit(const std::vector<std::uint64_t>& row, std::size_t i) {
  return (row[i / 64] >> (i % 64)) & 1U;
}

void set_bit(std::vector<std::uint64_t>& row, std::size_t i) { row[i / 64] |= 1ULL << (i % 64); }

}  // namespace

LdpcCodec::LdpcCodec(int n, int max_flip_iters)
    : n_(n), m_(n / 2), k_(n / 2), max_flip_iters_(max_flip_iters) {
  if (n < 12 || n % 2 != 0) throw UsageError("LDPC length must be even and >= 12");
  build_graph();
  build_encoder();
}

void LdpcCodec::build_graph() {
  Rng rng(kGraphSeed ^ static_cast<std::uint64_t>(n_));
  check_cols_.assign(static_cast<std::size_t>(m_), {});
  col_checks_.resize(static_cast<std::size_t>(n_));

  std::vector<int> stamp(static_cast<std::size_t>(n_), -1);
  std::vector<int> candidates;
  for (int c = 0; c < n_; ++c) {
    std::array<int, kColumnWeight> chosen{};
    for (int e = 0; e < kColumnWeight; ++e) {
      // columns already sharing a check with c; a second shared check would
      // close a 4-cycle
      if (e > 0)
        for (int c2 : check_cols_[static_cast<std::size_t>(chosen[static_cast<std::size_t>(e - 1)])])
          stamp[static_cast<std::size_t>(c2)] = c;
      const auto taken = [&](int r) {
        return std::find(chosen.begin(), chosen.begin() + e, r) != chosen.begin() + e;
      };

      auto best = std::numeric_limits<std::size_t>::max();
      candidates.clear();
      for (int r = 0; r < m_; ++r) {
        const auto& cols = check_cols_[static_cast<std::size_t>(r)];
        if (cols.size() > best || taken(r)) continue;
        const bool cycle = std::any_of(cols.begin(), cols.end(),
                                       [&](int c2) { return stamp[static_cast<std::size_t>(c2)] == c; });
        if (cycle) continue;
        if (cols.size() < best) {
          best = cols.size();
          candidates.clear();
        }
        candidates.push_back(r);
      }
      if (candidates.empty()) {
        // short codes: give up on girth for this edge
        for (int r = 0; r < m_; ++r) {
          const auto d = check_cols_[static_cast<std::size_t>(r)].size();
          if (taken(r) || d > best) continue;
          if (d < best) {
            best = d;
            candidates.clear();
          }
          candidates.push_back(r);
        }
      }
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      chosen[static_cast<std::size_t>(e)] = candidates[pick(rng)];
    }
    std::sort(chosen.begin(), chosen.end());
    for (int r : chosen) check_cols_[static_cast<std::size_t>(r)].push_back(c);
    col_checks_[static_cast<std::size_t>(c)] = chosen;
  }
}

void LdpcCodec::build_encoder() {
  const auto n = static_cast<std::size_t>(n_);
  const std::size_t words = words_for(n);
  std::vector<std::vector<std::uint64_t>> h(static_cast<std::size_t>(m_),
                                            std::vector<std::uint64_t>(words, 0));
  for (std::size_t r = 0; r < h.size(); ++r)
    for (int c : check_cols_[r]) set_bit(h[r], static_cast<std::size_t>(c));

  // reduced row echelon form over GF(2)
  std::vector<int> pivots;
  std::vector<bool> is_pivot(n, false);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < h.size(); ++col) {
    std::size_t r = row;
    while (r < h.size() && !test_bit(h[r], col)) ++r;
    if (r == h.size()) continue;
    std::swap(h[r], h[row]);
    for (std::size_t r2 = 0; r2 < h.size(); ++r2) {
      if (r2 == row || !test_bit(h[r2], col)) continue;
      for (std::size_t w = 0; w < words; ++w) h[r2][w] ^= h[row][w];
    }
    pivots.push_back(static_cast<int>(col));
    is_pivot[col] = true;
    ++row;
  }

  info_pos_.clear();
  for (std::size_t col = 0; col < n && static_cast<int>(info_pos_.size()) < k_; ++col)
    if (!is_pivot[col]) info_pos_.push_back(static_cast<int>(col));
  // rank <= m = n/2 guarantees at least k free columns

  parity_pos_ = pivots;
  const std::size_t info_words = words_for(static_cast<std::size_t>(k_));
  parity_rows_.assign(pivots.size(), std::vector<std::uint64_t>(info_words, 0));
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < info_pos_.size(); ++j)
      if (test_bit(h[i], static_cast<std::size_t>(info_pos_[j]))) set_bit(parity_rows_[i], j);
}

Bits LdpcCodec::encode_block(std::span<const std::uint8_t> info) const {
  if (info.size() != static_cast<std::size_t>(k_)) throw UsageError("LDPC: bad info block length");
  std::vector<std::uint64_t> packed(words_for(info.size()), 0);
  for (std::size_t j = 0; j < info.size(); ++j)
    if (info[j]) set_bit(packed, j);

  Bits word(static_cast<std::size_t>(n_), 0);
  for (std::size_t j = 0; j < info.size(); ++j)
    word[static_cast<std::size_t>(info_pos_[j])] = info[j] ? 1 : 0;
  for (std::size_t i = 0; i < parity_pos_.size(); ++i) {
    unsigned parity = 0;
    for (std::size_t w = 0; w < packed.size(); ++w)
      parity ^= static_cast<unsigned>(std::popcount(parity_rows_[i][w] & packed[w]));
    word[static_cast<std::size_t>(parity_pos_[i])] = static_cast<std::uint8_t>(parity & 1U);
  }
  return word;
}

Bits LdpcCodec::extract_info(std::span<const std::uint8_t> word) const {
  Bits info(info_pos_.size());
  for (std::size_t j = 0; j < info_pos_.size(); ++j)
    info[j] = word[static_cast<std::size_t>(info_pos_[j])];
  return info;
}

bool LdpcCodec::is_codeword(std::span<const std::uint8_t> word) const {
  if (word.size() != static_cast<std::size_t>(n_)) return false;
  for (const auto& cols : check_cols_) {
    unsigned s = 0;
    for (int c : cols) s ^= word[static_cast<std::size_t>(c)];
    if (s) return false;
  }
  return true;
}

Bits LdpcCodec::flip_decode(Bits word) const {
  std::vector<std::uint8_t> syndrome(static_cast<std::size_t>(m_), 0);
  int unsatisfied = 0;
  for (std::size_t r = 0; r < syndrome.size(); ++r) {
    unsigned s = 0;
    for (int c : check_cols_[r]) s ^= word[static_cast<std::size_t>(c)];
    syndrome[r] = static_cast<std::uint8_t>(s);
    unsatisfied += static_cast<int>(s);
  }

  Bits best = word;
  int best_unsat = unsatisfied;
  int stall = 0;
  std::vector<int> votes(static_cast<std::size_t>(n_));
  for (int it = 0; it < max_flip_iters_ && unsatisfied > 0; ++it) {
    int top = 0;
    for (std::size_t c = 0; c < votes.size(); ++c) {
      int v = 0;
      for (int r : col_checks_[c]) v += syndrome[static_cast<std::size_t>(r)];
      votes[c] = v;
      top = std::max(top, v);
    }
    // majority rule; when some bit sees all its checks failing, flip only those
    if (top < 2) break;
    for (std::size_t c = 0; c < votes.size(); ++c) {
      if (votes[c] < top) continue;
      word[c] ^= 1U;
      for (int r : col_checks_[c]) {
        auto& s = syndrome[static_cast<std::size_t>(r)];
        unsatisfied += s ? -1 : 1;
        s ^= 1U;
      }
    }
    if (unsatisfied < best_unsat) {
      best_unsat = unsatisfied;
      best = word;
      stall = 0;
    } else if (++stall >= 8) {
      break;
    }
  }
  return best_unsat < unsatisfied ? best : word;
}

Bits LdpcCodec::encode(std::span<const std::uint8_t> info) const {
  const auto k = static_cast<std::size_t>(k_);
  if (info.size() % k != 0) throw UsageError("LDPC: input length must be a multiple of k");
  Bits out;
  out.reserve(info.size() * 2);
  for (std::size_t off = 0; off < info.size(); off += k) {
    const Bits word = encode_block(info.subspan(off, k));
    out.insert(out.end(), word.begin(), word.end());
  }
  return out;
}

Bits LdpcCodec::decode(std::span<const double> symbols) const {
  const auto n = static_cast<std::size_t>(n_);
  if (symbols.size() % n != 0) throw UsageError("LDPC: input length must be a multiple of n");
  Bits out;
  out.reserve(symbols.size() / 2);
  for (std::size_t off = 0; off < symbols.size(); off += n) {
    const Bits info = extract_info(flip_decode(demodulate(symbols.subspan(off, n))));
    out.insert(out.end(), info.begin(), info.end());
  }
  return out;
}

bool LdpcCodec::four_cycle_free() const {
  std::vector<int> seen(static_cast<std::size_t>(m_), -1);
  for (int r = 0; r < m_; ++r) {
    // every other check reachable through a column of r must be reached once
    for (int c : check_cols_[static_cast<std::size_t>(r)])
      for (int r2 : col_checks_[static_cast<std::size_t>(c)]) {
        if (r2 == r) continue;
        if (seen[static_cast<std::size_t>(r2)] == r) return false;
        seen[static_cast<std::size_t>(r2)] = r;
      }
  }
  return true;
}

}  // namespace gcica
