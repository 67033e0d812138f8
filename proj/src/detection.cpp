#include "gcica/detection.hpp"

#include <cmath>

#include "gcica/errors.hpp"

namespace gcica {

ValidityReport validate(const CsiSet& csis, const FactorEstimates& original, double threshold) {
  ValidityReport rep;
  const int phases = original.phases();
  const int pilots = original.pilots();
  rep.valid.resize(csis.size(), false);
  rep.correlations.resize(csis.size());
  rep.flagged_pilot.resize(csis.size());

  for (std::size_t c = 0; c < csis.size(); ++c) {
    const auto& h = csis.columns[c];
    if (h.size() != original.antennas()) throw ConfigError("CSI length must equal the antenna count");
    const double m = static_cast<double>(h.size());
    bool ok = phases > 0;
    for (int l = 0; l < phases; ++l) {
      Eigen::VectorXd corr(pilots);
      int hits = 0;
      int hit_pilot = -1;
      for (int t = 0; t < pilots; ++t) {
        corr(t) = original.h[l][t].dot(h) / m;
        if (std::abs(corr(t) - 1.0) < threshold) {
          ++hits;
          hit_pilot = t;
        }
      }
      rep.correlations[c].push_back(std::move(corr));
      rep.flagged_pilot[c].push_back(hits == 1 ? hit_pilot : -1);
      ok = ok && hits == 1;
    }
    rep.valid[c] = ok;
    if (ok) rep.valid_set.push_back(static_cast<int>(c));
  }
  return rep;
}

Eigen::VectorXd build_rar(const CsiSet& csis, const ValidityReport& report) {
  const Eigen::Index m = csis.empty() ? 0 : csis.columns.front().size();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
  for (int u : report.valid_set) v += csis.columns[static_cast<std::size_t>(u)];
  return v;
}

SelfDetection ue_self_detect(const Eigen::Ref<const Eigen::VectorXd>& rar,
                             const Eigen::Ref<const Eigen::VectorXd>& g, double beta,
                             double noise_var, double threshold, Rng& rng) {
  if (g.size() == 0) throw UsageError("ue_self_detect: empty channel");
  if (beta <= 0.0) throw UsageError("ue_self_detect: beta must be positive");
  const double m = static_cast<double>(g.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise = std::sqrt(noise_var) * normal(rng);
  const double projection = rar.size() == g.size() ? rar.dot(g) : 0.0;
  const double received = std::sqrt(beta) * projection + noise;
  SelfDetection out;
  out.statistic = received / (std::sqrt(beta) * m);
  out.detected = out.statistic > threshold;
  return out;
}

}  // namespace gcica
