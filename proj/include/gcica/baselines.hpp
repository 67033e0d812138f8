#pragma once

// Comparison schemes: single-pilot RA and a unique-super-pilot stand-in for
// the multiple-preamble grant-free scheme.

#include <span>
#include <vector>

#include "gcica/model.hpp"

namespace gcica {

struct BaselineOutcome {
  int successes = 0;
  std::vector<bool> flags;  // per UE
  double throughput = 0.0;
};

/// Every UE picks one pilot uniformly from `pool`; it succeeds iff no other UE
/// picked the same one. Throughput uses overhead `pool + 1`.
BaselineOutcome traditional_ra(int na, int pool, Rng& rng, int n_pd = 2048, double rate = 0.5);

/// Approximation of the multiple-preamble scheme: a UE succeeds iff its full
/// sub-pilot tuple is unique among the active UEs. Labeled as optimistic
/// proxy in every output. Throughput overhead is tau_p * L + 1.
BaselineOutcome multipreamble_approx(std::span<const UplinkFrame> frames, int tau_p, int n_pd = 2048,
                                     double rate = 0.5);
BaselineOutcome multipreamble_approx(std::span<const std::vector<int>> tuples, int tau_p,
                                     int n_pd = 2048, double rate = 0.5);

}  // namespace gcica
