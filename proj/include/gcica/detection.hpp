#pragma once

// Validity screening of estimated CSI columns, RAR construction, and the
// UE-side detection statistic.

#include <vector>

#include <Eigen/Dense>

#include "gcica/model.hpp"
#include "gcica/sic.hpp"

namespace gcica {

struct ValidityReport {
  std::vector<bool> valid;                                  // per CSI column
  std::vector<std::vector<Eigen::VectorXd>> correlations;   // [column][phase], tau_p values
  std::vector<std::vector<int>> flagged_pilot;              // [column][phase], -1 unless unique
  std::vector<int> valid_set;                               // B, ascending

  int valid_count() const { return static_cast<int>(valid_set.size()); }
};

/// (h_t^l)^T h / M against the ORIGINAL (pre-peeling) LS estimates. A column
/// is valid iff in every phase exactly one pilot correlates within
/// `threshold` of 1.
ValidityReport validate(const CsiSet& csis, const FactorEstimates& original, double threshold);

/// V = sum of valid columns (as a length-M vector; the RAR is its transpose).
Eigen::VectorXd build_rar(const CsiSet& csis, const ValidityReport& report);

struct SelfDetection {
  bool detected = false;
  double statistic = 0.0;
};

/// R_m = sqrt(beta) V g_m + Z_d; statistic R_m / (sqrt(beta) M); detected iff
/// statistic > threshold.
SelfDetection ue_self_detect(const Eigen::Ref<const Eigen::VectorXd>& rar,
                             const Eigen::Ref<const Eigen::VectorXd>& g, double beta,
                             double noise_var, double threshold, Rng& rng);

}  // namespace gcica
