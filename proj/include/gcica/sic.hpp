#pragma once

// Pilot-domain channel estimation and successive interference cancellation
// on the UE / (phase, pilot) bipartite graph.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gcica/codec.hpp"
#include "gcica/model.hpp"

namespace gcica {

/// LS channel sums per factor node (phase l, pilot t), plus the bookkeeping
/// the peeling decoder needs: the residual noise variance carried by each
/// vector and its current degree estimate.
struct FactorEstimates {
  std::vector<std::vector<Eigen::VectorXd>> h;       // [l][t], length M
  std::vector<std::vector<int>> deg;                 // [l][t]
  std::vector<std::vector<double>> noise_var;        // [l][t]

  int phases() const { return static_cast<int>(h.size()); }
  int pilots() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
  int antennas() const { return h.empty() || h.front().empty() ? 0 : static_cast<int>(h[0][0].size()); }
};

enum class CsiSource { Sic, Cica };

/// Recovered CSI columns with their origin.
struct CsiSet {
  std::vector<Eigen::VectorXd> columns;
  std::vector<CsiSource> source;

  std::size_t size() const { return columns.size(); }
  bool empty() const { return columns.empty(); }
  void add(Eigen::VectorXd h, CsiSource s) {
    columns.push_back(std::move(h));
    source.push_back(s);
  }
};

/// h[l][t] = Y_p^l S_t. `noise_var` is the per-entry AWGN variance, which the
/// despreading leaves unchanged because pilots have unit norm.
FactorEstimates ls_estimates(const std::vector<Eigen::MatrixXd>& yp, const PilotBook& book,
                             double noise_var);

/// Energy statistic h^T h / M minus the known noise floor.
double degree_statistic(const Eigen::Ref<const Eigen::VectorXd>& h, double noise_var);

/// round(h^T h / M - noise_var), clamped at zero.
int degree_of(const Eigen::Ref<const Eigen::VectorXd>& h, double noise_var);

/// A factor node is treated as singleton only inside the acceptance window.
bool is_degree_one(const Eigen::Ref<const Eigen::VectorXd>& h, double noise_var, double degree_tol);

struct PeelParams {
  int max_iters = 100;
  double degree_tol = 0.3;
  double dup_threshold = 0.5;
};

struct PeelTrace {
  int iterations = 0;
  std::vector<std::pair<int, int>> harvest;  // (phase, pilot) in harvest order
  int subtractions = 0;
  int merged = 0;  // harvested columns dropped as duplicates
};

struct PeelResult {
  CsiSet csis;
  PeelTrace trace;
  FactorEstimates residual;
};

/// Peeling decoder. Harvests degree-1 factor nodes in (phase, pilot) order,
/// cancels each harvested vector from every node whose (unrounded) degree
/// statistic it lowers, and repeats until a full scan finds no singleton or
/// `max_iters` scans have run. Duplicate harvests of one UE (|a^T b|/M above
/// `dup_threshold`) collapse to the first one.
PeelResult peel(FactorEstimates fe, const PeelParams& params);

/// x_i = h_i^T Y_m / (h_i^T h_i), then drop the reference symbol and decode.
/// Columns with norm below 1e-9 are rejected (nullopt).
std::vector<std::optional<Bits>> decode_from_csi(const Eigen::MatrixXd& ym, const CsiSet& csis,
                                                 const Codec& codec);

/// The LS symbol estimate alone, reference symbol included.
std::optional<Eigen::VectorXd> detect_symbols(const Eigen::MatrixXd& ym,
                                              const Eigen::Ref<const Eigen::VectorXd>& h);

}  // namespace gcica
