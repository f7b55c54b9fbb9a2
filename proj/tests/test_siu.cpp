/*
 * Copyright 2026 The mswell Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mswell/errors.hpp"
#include "mswell/scenario.hpp"
#include "mswell/siu.hpp"
#include "support.hpp"

using namespace mswell;
using testing::Gen;

namespace {

const std::array<double, kMaxComponents> kPure{1.0, 0.0};

}  // namespace

TEST_CASE("cumulative rates equal brute-force subtree sums") {
  Gen g(61);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BranchSpec> branches{{"b0", {0, 0, 0}, {0, 0, -50}, g.integer(1, 6), {}}};
    std::vector<Point3> ends{{0, 0, -50}};
    const int nb = g.integer(0, 4);
    for (int b = 1; b <= nb; ++b) {
      const Point3 from = ends[static_cast<std::size_t>(g.integer(0, b - 1))];
      const Point3 to{from[0] + g.uniform(-40, 40), from[1] + g.uniform(-40, 40), from[2] - g.uniform(1, 40)};
      branches.push_back({"b" + std::to_string(b), from, to, g.integer(1, 6), {}});
      ends.push_back(to);
    }
    const auto mesh = build_well_mesh(branches, {0, 0, 0}, 0.1);
    std::vector<double> q(static_cast<std::size_t>(mesh.node_count())), e(q.size());
    for (std::size_t v = 0; v < q.size(); ++v) {
      q[v] = g.coin(0.3) ? g.uniform(0.0, 10.0) : 0.0;
      e[v] = g.uniform(-1e5, 1e6);
    }
    const auto c = cumulative_rates(mesh, q, e);
    double total_q = 0.0, total_e = 0.0;
    for (int v = 0; v < mesh.node_count(); ++v) {
      double sq = 0.0, se = 0.0;
      for (int w = 0; w < mesh.node_count(); ++w)
        if (mesh.precedes_or_equal(v, w)) {
          sq += q[static_cast<std::size_t>(w)];
          se += e[static_cast<std::size_t>(w)];
        }
      CHECK(c.molar[static_cast<std::size_t>(v)] == doctest::Approx(sq).epsilon(1e-12));
      CHECK(c.energy[static_cast<std::size_t>(v)] == doctest::Approx(se).epsilon(1e-12));
      total_q += q[static_cast<std::size_t>(v)];
      total_e += e[static_cast<std::size_t>(v)];
    }
    CHECK(c.molar[static_cast<std::size_t>(mesh.root())] == doctest::Approx(total_q).epsilon(1e-12));
    CHECK(c.energy[static_cast<std::size_t>(mesh.root())] == doctest::Approx(total_e).epsilon(1e-12));
  }
}

TEST_CASE("node flash: phase from the flowing enthalpy") {
  WaterFluid w;
  const DfmParams dfm;
  const double section = std::numbers::pi * 0.01;
  Gen g(62);
  for (int k = 0; k < 500; ++k) {
    const double p = g.uniform(2e5, 5e6);
    const double tsat = saturation_temperature(w, p);
    const double hl = w.properties(Phase::liquid, p, tsat, kPure).enthalpy.value;
    const double hg = w.properties(Phase::gas, p, tsat, kPure).enthalpy.value;
    const double q = g.uniform(10.0, 2000.0);
    const double o = edge_orientation(g.uniform(0.0, 1.4), 1.0);

    const double t_liq = tsat - g.uniform(1.0, 80.0);
    const double h_liq = w.properties(Phase::liquid, p, t_liq, kPure).enthalpy.value;
    const auto liq = siu_node_state(p, q, q * h_liq, w, dfm, section, o);
    CHECK(liq.phases == PhaseSet::liquid());
    CHECK(liq.T == doctest::Approx(t_liq).epsilon(1e-10));
    CHECK(liq.s_gas == 0.0);

    const double t_gas = tsat + g.uniform(1.0, 80.0);
    const double h_gas = w.properties(Phase::gas, p, t_gas, kPure).enthalpy.value;
    const auto gas = siu_node_state(p, q, q * h_gas, w, dfm, section, o);
    CHECK(gas.phases == PhaseSet::gas());
    CHECK(gas.T == doctest::Approx(t_gas).epsilon(1e-10));

    const double H = hl + g.uniform(0.01, 0.99) * (hg - hl);
    const auto two = siu_node_state(p, q, q * H, w, dfm, section, o);
    CHECK(two.phases == PhaseSet::both());
    CHECK(two.T == tsat);
    CHECK(two.s_gas >= 0.0);
    CHECK(two.s_gas <= 1.0);
    const double scale = std::max(two.u_gas, std::abs(two.u_gas + two.u_liquid));
    const double rl = w.properties(Phase::liquid, p, tsat, kPure).mass_density.value;
    const double rg = w.properties(Phase::gas, p, tsat, kPure).mass_density.value;
    CHECK(std::abs(siu_slip_residual(two.s_gas, two.u_gas, two.u_liquid, rl, rg, dfm, o)) <= 1e-12 * scale);
    // mass-weighted flowing fractions
    CHECK(two.c_liquid * hl + (1 - two.c_liquid) * hg == doctest::Approx(H).epsilon(1e-12));

    const auto ns = siu_node_state(p, q, q * H, w, dfm, section, o, SlipLaw::none);
    CHECK(ns.s_gas == doctest::Approx(ns.u_gas / (ns.u_gas + ns.u_liquid)).epsilon(1e-14));
  }
}

TEST_CASE("liquid flowing fraction decreases with the flowing enthalpy") {
  WaterFluid w;
  const DfmParams dfm;
  Gen g(63);
  for (int k = 0; k < 200; ++k) {
    const double p = g.uniform(2e5, 5e6), q = g.uniform(10.0, 500.0);
    double last = 2.0;
    for (int j = 0; j <= 40; ++j) {
      const double tsat = saturation_temperature(w, p);
      const double hl = w.properties(Phase::liquid, p, tsat, kPure).enthalpy.value;
      const double hg = w.properties(Phase::gas, p, tsat, kPure).enthalpy.value;
      const double H = hl - 0.2 * (hg - hl) + 1.4 * (hg - hl) * j / 40.0;
      const double c = siu_node_state(p, q, q * H, w, dfm, 0.01, 1.0).c_liquid;
      CHECK(c < last);
      last = c;
    }
  }
}

TEST_CASE("flash preconditions") {
  ImmiscibleFluid im;
  WaterFluid w;
  const DfmParams dfm;
  CHECK_THROWS_AS(siu_node_state(1e6, 1.0, 1e5, im, dfm, 0.01), ModelAssumptionError);
  CHECK_THROWS_AS(siu_node_state(1e6, -1.0, 1e5, w, dfm, 0.01), ModelAssumptionError);
}

TEST_CASE("frictionless liquid column is exactly hydrostatic") {
  auto cfg = load_scenario(testing::scenario_path("siu_vertical.cfg"));
  cfg.feeds.front().temperature = 400.0;
  const auto sc = build_scenario(cfg);
  const auto r = siu_run(sc.model, sc.initial);
  REQUIRE(r.converged);
  const auto& mesh = sc.model.mesh;
  for (int v = 0; v < mesh.node_count(); ++v) CHECK(r.s_gas[static_cast<std::size_t>(v)] == 0.0);
  for (const auto& e : mesh.edges()) {
    const double expect = r.p[static_cast<std::size_t>(e.parent)] +
                          r.rho_mean[static_cast<std::size_t>(e.id)] * kGravity * (mesh.z(e.parent) - mesh.z(e.child));
    CHECK(r.p[static_cast<std::size_t>(e.child)] == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK(r.p[static_cast<std::size_t>(mesh.root())] == r.head_pressure);
}

TEST_CASE("steady state honours the monitoring complementarity") {
  const auto sc = build_scenario(load_scenario(testing::scenario_path("siu_vertical.cfg")));
  const auto r = siu_run(sc.model, sc.initial);
  REQUIRE(r.converged);
  const double qbar = sc.model.monitor.max_rate, pbar = sc.model.monitor.min_head_pressure;
  CHECK(r.rate_molar <= qbar * (1 + 1e-10));
  CHECK(r.head_pressure >= pbar * (1 - 1e-10));
  CHECK(std::abs(std::min((qbar - r.rate_molar) / qbar, (r.head_pressure - pbar) / pbar)) <= 1e-10);
  CHECK(r.q_molar[static_cast<std::size_t>(sc.model.mesh.root())] == doctest::Approx(r.rate_molar).epsilon(1e-12));
  bool two_phase = false;
  for (double s : r.s_gas) two_phase = two_phase || (s > 0.0 && s < 1.0);
  CHECK(two_phase);
}

TEST_CASE("branched wells are outside the model") {
  const auto sc = build_scenario(load_scenario(testing::scenario_path("chair.cfg")));
  CHECK_THROWS_AS(siu_run(sc.model, sc.initial), ModelAssumptionError);
}
