#pragma once

// Asymptotic analysis: contention-graph degree distributions, and-or tree
// density evolution for the peeling decoder, the BER lower bound of the
// ICA branch, and the derived bounds on access probability and throughput.

#include <vector>

#include "gcica/model.hpp"

namespace gcica {

/// Node- and edge-perspective degree distributions, stored densely by degree
/// (index = degree, 0..max).
struct DegreeDistributions {
  int na = 0;
  int tau_p = 0;
  int l = 0;
  std::vector<double> variable_node;  // Lambda_d: point mass at L
  std::vector<double> factor_node;    // Psi_d: Binomial(Na, 1/tau_p)
  std::vector<double> variable_edge;  // lambda_d
  std::vector<double> factor_edge;    // rho_d

  /// sum_d c_d x^d
  static double node_poly(const std::vector<double>& c, double x);
  /// sum_d c_d x^(d-1)
  static double edge_poly(const std::vector<double>& c, double x);

  double lambda(double x) const { return edge_poly(variable_edge, x); }
  double rho(double x) const { return edge_poly(factor_edge, x); }
  double Lambda(double x) const { return node_poly(variable_node, x); }
};

DegreeDistributions degree_distributions(int na, int tau_p, int l);

struct Evolution {
  std::vector<double> m;  // m_0 = 1, then m_1..m_I
  std::vector<double> n;  // n_1..n_I
  double p_fail = 1.0;
  int iterations = 0;
};

/// n_i = 1 - rho(1 - m_{i-1}), m_i = lambda(n_i), from m_0 = 1. Stops after
/// `max_iters` or once |m_i - m_{i-1}| < 1e-12; P_fail = Lambda(n_I).
Evolution evolve(const DegreeDistributions& dd, int max_iters);

/// (1/sqrt(pi)) int_0^inf chi2_M(y) int_sqrt(y)^inf e^{-x^2} dx dy,
/// i.e. E[erfc(sqrt(Y)) / 2] with Y ~ chi^2_M.
double ber_lower_bound(int m);

struct Bounds {
  double s_sic = 0.0;
  double p_cica_upper = 0.0;
  double s_cica_upper = 0.0;
  double p_s_upper = 0.0;
  double p_md_lower = 0.0;
  double throughput_upper = 0.0;
};

/// Frame-efficiency throughput: successes * N_PD * R / (N_PD + overhead).
double throughput(double successes, int n_pd, double rate, int overhead);

/// Overhead of the super-pilot frame: tau_p * L pilot symbols + 1 RS.
int gcica_overhead(const SystemConfig& cfg);

Bounds bounds(const SystemConfig& cfg, double p_fail, double ber_lower);

struct EvolutionResult {
  DegreeDistributions degrees;
  Evolution evolution;
  double ber_lower = 0.0;
  Bounds bound;
};

/// Full analytical chain for one configuration.
EvolutionResult analyze(const SystemConfig& cfg);

}  // namespace gcica
