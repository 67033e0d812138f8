#include "gcica/sic.hpp"

#include <cmath>

#include "gcica/errors.hpp"

namespace gcica {

FactorEstimates ls_estimates(const std::vector<Eigen::MatrixXd>& yp, const PilotBook& book,
                             double noise_var) {
  FactorEstimates fe;
  const int tau = book.size();
  fe.h.resize(yp.size());
  fe.deg.resize(yp.size());
  fe.noise_var.resize(yp.size());
  for (std::size_t l = 0; l < yp.size(); ++l) {
    if (yp[l].cols() != tau) throw ConfigError("Y_p block width must equal tau_p");
    // real pilots: S_t^* = S_t
    const Eigen::MatrixXd despread = yp[l] * book.matrix();
    for (int t = 0; t < tau; ++t) {
      fe.h[l].push_back(despread.col(t));
      fe.noise_var[l].push_back(noise_var);
      fe.deg[l].push_back(degree_of(fe.h[l].back(), noise_var));
    }
  }
  return fe;
}

double degree_statistic(const Eigen::Ref<const Eigen::VectorXd>& h, double noise_var) {
  return h.squaredNorm() / static_cast<double>(h.size()) - noise_var;
}

int degree_of(const Eigen::Ref<const Eigen::VectorXd>& h, double noise_var) {
  if (h.size() == 0) return 0;
  const double d = std::round(degree_statistic(h, noise_var));
  return d > 0.0 ? static_cast<int>(d) : 0;
}

bool is_degree_one(const Eigen::Ref<const Eigen::VectorXd>& h, double noise_var, double degree_tol) {
  return h.size() > 0 && std::abs(degree_statistic(h, noise_var) - 1.0) < degree_tol;
}

PeelResult peel(FactorEstimates fe, const PeelParams& params) {
  PeelResult out;
  const int phases = fe.phases();
  const int pilots = fe.pilots();
  const double m = static_cast<double>(fe.antennas());

  std::vector<Eigen::VectorXd> harvested;
  while (out.trace.iterations < params.max_iters) {
    ++out.trace.iterations;
    bool found = false;
    for (int l = 0; l < phases; ++l) {
      for (int t = 0; t < pilots; ++t) {
        auto& h = fe.h[l][t];
        if (!is_degree_one(h, fe.noise_var[l][t], params.degree_tol)) continue;
        found = true;
        const Eigen::VectorXd csi = h;
        const double csi_var = fe.noise_var[l][t];
        out.trace.harvest.emplace_back(l, t);
        h.setZero();
        fe.deg[l][t] = 0;
        fe.noise_var[l][t] = 0.0;

        // cancel wherever the degree statistic falls: a member lowers it by
        // about one, a non-member raises it by about one
        for (int l2 = 0; l2 < phases; ++l2) {
          for (int t2 = 0; t2 < pilots; ++t2) {
            if ((l2 == l && t2 == t) || fe.deg[l2][t2] < 1) continue;
            Eigen::VectorXd r = fe.h[l2][t2] - csi;
            const double var = fe.noise_var[l2][t2] + csi_var;
            const double drop = degree_statistic(fe.h[l2][t2], fe.noise_var[l2][t2]) -
                                degree_statistic(r, var);
            if (drop <= 0.0) continue;
            const int d = degree_of(r, var);
            fe.h[l2][t2] = std::move(r);
            fe.deg[l2][t2] = d;
            fe.noise_var[l2][t2] = var;
            ++out.trace.subtractions;
          }
        }
        harvested.push_back(csi);
      }
    }
    if (!found) break;
  }

  for (auto& c : harvested) {
    bool duplicate = false;
    for (const auto& kept : out.csis.columns) {
      if (std::abs(c.dot(kept)) / m > params.dup_threshold) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      ++out.trace.merged;
      continue;
    }
    out.csis.add(std::move(c), CsiSource::Sic);
  }
  out.residual = std::move(fe);
  return out;
}

std::optional<Eigen::VectorXd> detect_symbols(const Eigen::MatrixXd& ym,
                                              const Eigen::Ref<const Eigen::VectorXd>& h) {
  const double energy = h.squaredNorm();
  if (std::sqrt(energy) < 1e-9) return std::nullopt;
  return Eigen::VectorXd((ym.transpose() * h) / energy);
}

std::vector<std::optional<Bits>> decode_from_csi(const Eigen::MatrixXd& ym, const CsiSet& csis,
                                                 const Codec& codec) {
  std::vector<std::optional<Bits>> out;
  out.reserve(csis.size());
  for (const auto& h : csis.columns) {
    if (h.size() != ym.rows()) throw ConfigError("CSI length must equal the antenna count");
    auto x = detect_symbols(ym, h);
    if (!x) {
      out.emplace_back(std::nullopt);
      continue;
    }
    const std::span<const double> payload(x->data() + 1, static_cast<std::size_t>(x->size() - 1));
    out.emplace_back(codec.decode(payload));
  }
  return out;
}

}  // namespace gcica
