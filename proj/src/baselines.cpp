#include "gcica/baselines.hpp"

#include <map>

#include "gcica/analysis.hpp"
#include "gcica/errors.hpp"

namespace gcica {

BaselineOutcome traditional_ra(int na, int pool, Rng& rng, int n_pd, double rate) {
  if (na < 0) throw UsageError("traditional_ra: na must be >= 0");
  if (pool < 1) throw UsageError("traditional_ra: pool must be >= 1");
  std::uniform_int_distribution<int> pick(0, pool - 1);
  std::vector<int> choice(static_cast<std::size_t>(na));
  std::vector<int> occupancy(static_cast<std::size_t>(pool), 0);
  for (auto& c : choice) {
    c = pick(rng);
    ++occupancy[static_cast<std::size_t>(c)];
  }
  BaselineOutcome out;
  out.flags.resize(choice.size());
  for (std::size_t k = 0; k < choice.size(); ++k) {
    out.flags[k] = occupancy[static_cast<std::size_t>(choice[k])] == 1;
    out.successes += out.flags[k] ? 1 : 0;
  }
  out.throughput = throughput(out.successes, n_pd, rate, pool + 1);
  return out;
}

BaselineOutcome multipreamble_approx(std::span<const std::vector<int>> tuples, int tau_p, int n_pd,
                                     double rate) {
  std::map<std::vector<int>, int> count;
  for (const auto& t : tuples) ++count[t];
  BaselineOutcome out;
  out.flags.resize(tuples.size());
  int l = 0;
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    out.flags[k] = count[tuples[k]] == 1;
    out.successes += out.flags[k] ? 1 : 0;
    l = static_cast<int>(tuples[k].size());
  }
  out.throughput = throughput(out.successes, n_pd, rate, tau_p * l + 1);
  return out;
}

BaselineOutcome multipreamble_approx(std::span<const UplinkFrame> frames, int tau_p, int n_pd,
                                     double rate) {
  std::vector<std::vector<int>> tuples;
  tuples.reserve(frames.size());
  for (const auto& f : frames) tuples.push_back(f.subpilot);
  return multipreamble_approx(tuples, tau_p, n_pd, rate);
}

}  // namespace gcica
