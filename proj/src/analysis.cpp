#include "gcica/analysis.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "gcica/errors.hpp"

namespace gcica {

double DegreeDistributions::node_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t d = c.size(); d-- > 0;) acc = acc * x + c[d];
  return acc;
}

double DegreeDistributions::edge_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t d = c.size(); d-- > 1;) acc = acc * x + c[d];
  return acc;
}

namespace {

std::vector<double> edge_perspective(const std::vector<double>& node) {
  std::vector<double> edge(node.size(), 0.0);
  double mean = 0.0;
  for (std::size_t d = 0; d < node.size(); ++d) mean += node[d] * static_cast<double>(d);
  if (mean <= 0.0) return edge;
  for (std::size_t d = 0; d < node.size(); ++d) edge[d] = node[d] * static_cast<double>(d) / mean;
  return edge;
}

}  // namespace

DegreeDistributions degree_distributions(int na, int tau_p, int l) {
  if (na < 1) throw UsageError("degree_distributions: na must be >= 1");
  if (tau_p < 1) throw UsageError("degree_distributions: tau_p must be >= 1");
  if (l < 1) throw UsageError("degree_distributions: l must be >= 1");

  DegreeDistributions dd;
  dd.na = na;
  dd.tau_p = tau_p;
  dd.l = l;
  dd.variable_node.assign(static_cast<std::size_t>(l) + 1, 0.0);
  dd.variable_node[static_cast<std::size_t>(l)] = 1.0;

  const double p = 1.0 / tau_p;
  dd.factor_node.resize(static_cast<std::size_t>(na) + 1);
  for (int d = 0; d <= na; ++d) {
    const double c = boost::math::binomial_coefficient<double>(static_cast<unsigned>(na),
                                                               static_cast<unsigned>(d));
    // 0^0 = 1 covers tau_p = 1
    dd.factor_node[static_cast<std::size_t>(d)] = c * std::pow(p, d) * std::pow(1.0 - p, na - d);
  }
  dd.variable_edge = edge_perspective(dd.variable_node);
  dd.factor_edge = edge_perspective(dd.factor_node);
  return dd;
}

Evolution evolve(const DegreeDistributions& dd, int max_iters) {
  if (max_iters < 1) throw UsageError("evolve: max_iters must be >= 1");
  Evolution ev;
  ev.m.push_back(1.0);
  double n = 1.0;
  for (int i = 1; i <= max_iters; ++i) {
    const double prev = ev.m.back();
    n = 1.0 - dd.rho(1.0 - prev);
    const double m = dd.lambda(n);
    ev.n.push_back(n);
    ev.m.push_back(m);
    ev.iterations = i;
    if (std::abs(m - prev) < 1e-12) break;
  }
  ev.p_fail = dd.Lambda(n);
  return ev;
}

double ber_lower_bound(int m) {
  if (m < 1) throw UsageError("ber_lower_bound: M must be >= 1");
  const double dof = static_cast<double>(m);
  // substitute y = u^2 so the chi-square density's y^(M/2-1) singularity at M=1 disappears:
  // integrand = u^(M-1) e^(-u^2/2) / (2^(M/2-1) Gamma(M/2)) * erfc(u) / 2
  const double log_norm = (dof / 2.0 - 1.0) * std::log(2.0) + std::lgamma(dof / 2.0);
  auto integrand = [&](double u) {
    if (u <= 0.0) return m == 1 ? std::exp(-log_norm) * 0.5 : 0.0;
    const double log_density = (dof - 1.0) * std::log(u) - 0.5 * u * u - log_norm;
    return std::exp(log_density) * 0.5 * std::erfc(u);
  };

  const boost::math::chi_squared_distribution<double> chi2(dof);
  const double y_max = boost::math::quantile(boost::math::complement(chi2, 1e-14));
  const double u_max = std::sqrt(y_max);

  // panels keep the adaptive rule from stepping over the narrow peak at large M
  constexpr int kPanels = 32;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double a = u_max * p / kPanels;
    const double b = u_max * (p + 1) / kPanels;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, b, 20,
                                                                           1e-12, &err);
  }
  return total;
}

double throughput(double successes, int n_pd, double rate, int overhead) {
  return successes * static_cast<double>(n_pd) * rate / static_cast<double>(n_pd + overhead);
}

int gcica_overhead(const SystemConfig& cfg) { return cfg.tau_p * cfg.l + 1; }

Bounds bounds(const SystemConfig& cfg, double p_fail, double ber_lower) {
  if (cfg.na < 1) throw UsageError("bounds: na must be >= 1");
  Bounds b;
  const double na = static_cast<double>(cfg.na);
  b.s_sic = na * (1.0 - p_fail);
  b.p_cica_upper = std::pow(1.0 - ber_lower, cfg.n_m());
  b.s_cica_upper = b.p_cica_upper * (na - b.s_sic);
  b.p_s_upper = (b.s_sic + b.s_cica_upper) / na;
  b.p_md_lower = 1.0 - b.p_s_upper;
  b.throughput_upper = throughput(na * b.p_s_upper, cfg.n_pd, cfg.code_rate, gcica_overhead(cfg));
  return b;
}

EvolutionResult analyze(const SystemConfig& cfg) {
  EvolutionResult r;
  r.degrees = degree_distributions(cfg.na, cfg.tau_p, cfg.l);
  r.evolution = evolve(r.degrees, cfg.de_iters);
  r.ber_lower = ber_lower_bound(cfg.m);
  r.bound = bounds(cfg, r.evolution.p_fail, r.ber_lower);
  return r;
}

}  // namespace gcica
