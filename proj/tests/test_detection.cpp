#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "gcica/codec.hpp"
#include "gcica/detection.hpp"
#include "gcica/errors.hpp"
#include "gcica/model.hpp"
#include "gcica/sic.hpp"

using namespace gcica;

namespace {

struct Scene {
  ChannelState ch;
  std::vector<UplinkFrame> frames;
  FactorEstimates fe;
  double noise_var = 0.0;
};

Scene scene(int m, int na, double snr_db, Rng& rng, const std::vector<std::vector<int>>* sel = nullptr) {
  SystemConfig c;
  c.m = m;
  c.na = na;
  c.tau_p = 10;
  c.l = 2;
  c.n_pd = 12;
  c.snr_db = snr_db;
  const auto codec = make_codec(c);
  const auto book = PilotBook::from_config(c);
  Scene s;
  s.ch = generate_channel(m, na, rng);
  s.frames = sel ? build_frames(c, *codec, rng, *sel) : build_frames(c, *codec, rng);
  const auto rx = synthesize(c, book, s.frames, s.ch, rng);
  s.fe = ls_estimates(rx.yp, book, rx.noise_var);
  s.noise_var = rx.noise_var;
  return s;
}

}  // namespace

TEST_CASE("true channels validate and flag their own pilots") {
  Rng rng(1);
  const auto s = scene(400, 6, INFINITY, rng);
  CsiSet csis;
  for (int k = 0; k < 6; ++k) csis.add(s.ch.g.col(k), CsiSource::Sic);
  const auto rep = validate(csis, s.fe, 0.3);
  CHECK(rep.valid_count() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(rep.valid[static_cast<std::size_t>(k)]);
    CHECK(rep.flagged_pilot[static_cast<std::size_t>(k)] == s.frames[static_cast<std::size_t>(k)].subpilot);
    CHECK(rep.correlations[static_cast<std::size_t>(k)].size() == 2);
    CHECK(rep.correlations[static_cast<std::size_t>(k)][0].size() == 10);
  }
}

TEST_CASE("random vectors and unresolved collisions are invalid") {
  Rng rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  int garbage_valid = 0;
  const int trials = 2000;
  for (int tr = 0; tr < trials; ++tr) {
    const auto s = scene(400, 10, 10.0, rng);
    CsiSet csis;
    Eigen::VectorXd h(400);
    for (int r = 0; r < 400; ++r) h(r) = normal(rng);
    csis.add(h, CsiSource::Cica);
    garbage_valid += validate(csis, s.fe, 0.3).valid[0] ? 1 : 0;
  }
  CHECK(garbage_valid <= trials / 1000);

  // g1 + g2 on a shared first-phase pilot, different second-phase pilots
  const std::vector<std::vector<int>> sel = {{3, 1}, {3, 2}};
  const auto s = scene(400, 2, INFINITY, rng, &sel);
  CsiSet both;
  both.add(s.ch.g.col(0) + s.ch.g.col(1), CsiSource::Cica);
  const auto rep = validate(both, s.fe, 0.3);
  CHECK_FALSE(rep.valid[0]);
  CHECK(rep.correlations[0][0](3) > 1.7);       // near 2 on the shared pilot
  CHECK(std::abs(rep.correlations[0][1](1) - 1.0) < 0.3);
  CHECK(std::abs(rep.correlations[0][1](2) - 1.0) < 0.3);
  CHECK(rep.flagged_pilot[0][1] == -1);
}

TEST_CASE("validation is permutation-equivariant") {
  Rng rng(3);
  const auto s = scene(200, 8, 10.0, rng);
  CsiSet csis;
  for (int k = 0; k < 8; ++k) csis.add(s.ch.g.col(k) + 0.3 * Eigen::VectorXd::Random(200), CsiSource::Sic);
  const auto rep = validate(csis, s.fe, 0.3);
  std::vector<int> perm = {5, 2, 7, 0, 1, 6, 3, 4};
  CsiSet shuffled;
  for (int p : perm) shuffled.add(csis.columns[static_cast<std::size_t>(p)], CsiSource::Sic);
  const auto rep2 = validate(shuffled, s.fe, 0.3);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    CHECK(rep2.valid[i] == rep.valid[static_cast<std::size_t>(perm[i])]);
    CHECK(rep2.flagged_pilot[i] == rep.flagged_pilot[static_cast<std::size_t>(perm[i])]);
  }
}

TEST_CASE("RAR is the sum of valid columns") {
  CsiSet csis;
  csis.add(Eigen::VectorXd::Constant(3, 1.0), CsiSource::Sic);
  csis.add(Eigen::VectorXd::Constant(3, 2.0), CsiSource::Sic);
  csis.add(Eigen::VectorXd::Constant(3, 4.0), CsiSource::Cica);
  ValidityReport rep;
  CHECK(build_rar(csis, rep) == Eigen::VectorXd::Zero(3));
  rep.valid_set = {1};
  CHECK(build_rar(csis, rep) == Eigen::VectorXd::Constant(3, 2.0));
  rep.valid_set = {0, 2};
  CHECK(build_rar(csis, rep) == Eigen::VectorXd::Constant(3, 5.0));
}

TEST_CASE("UE self-detection statistic") {
  Rng rng(4);
  const auto ch = generate_channel(400, 5, rng);
  Eigen::VectorXd v = ch.g.col(0) + ch.g.col(1) + ch.g.col(2);
  const auto own = ue_self_detect(v, ch.g.col(1), 1.0, 0.0, 0.5, rng);
  CHECK(std::abs(own.statistic - 1.0) < 0.2);
  CHECK(own.detected);
  const auto absent = ue_self_detect(v, ch.g.col(4), 1.0, 0.0, 0.5, rng);
  CHECK(std::abs(absent.statistic) < 0.2);
  CHECK_FALSE(absent.detected);
  const auto empty = ue_self_detect(Eigen::VectorXd::Zero(400), ch.g.col(0), 1.0, 0.1, 0.5, rng);
  CHECK(std::abs(empty.statistic) < 0.01);
  CHECK_FALSE(empty.detected);
  CHECK_THROWS_AS(ue_self_detect(v, ch.g.col(0), 0.0, 0.1, 0.5, rng), UsageError);
}

TEST_CASE("self-detection agrees with membership at M = 400") {
  Rng rng(5);
  std::bernoulli_distribution member(0.5);
  int wrong = 0;
  const int trials = 5000;
  for (int tr = 0; tr < trials; ++tr) {
    const auto ch = generate_channel(400, 10, rng);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(400);
    bool in = false;
    for (int k = 0; k < 10; ++k) {
      const bool m = member(rng);
      if (m) v += ch.g.col(k) + std::sqrt(0.1) * Eigen::VectorXd::Random(400) * std::sqrt(3.0);
      if (k == 0) in = m;
    }
    const auto d = ue_self_detect(v, ch.g.col(0), 1.0, 0.1, 0.5, rng);
    wrong += d.detected != in ? 1 : 0;
  }
  CHECK(wrong <= trials / 1000 + 1);
}
