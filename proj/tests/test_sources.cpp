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

#include "mswell/errors.hpp"
#include "mswell/primary.hpp"
#include "mswell/sources.hpp"
#include "oracles/derived_values.hpp"
#include "support.hpp"

using namespace mswell;
using testing::Gen;
using testing::rel_diff;

namespace {

NodeLocal local(const NodeState& st, const FluidModel& f) {
  return make_node_local(st, f, split_primary_secondary(st, f), 1.0);
}

FeedZone zone(double p, double T, double wi_d, double wi_f) {
  FeedZone z;
  z.pressure = p;
  z.temperature = T;
  z.wi_darcy = wi_d;
  z.wi_fourier = wi_f;
  return z;
}

}  // namespace

TEST_CASE("darcy inflow and fourier exchange") {
  WaterFluid w;
  const auto st = testing::water_state(w, PhaseSet::liquid(), 1e6, 330.0, 0.0);
  const auto src = reservoir_source(zone(2e6, 400.0, 1e-12, 0.0), local(st, w), w);
  CHECK(src.molar[0].v == doctest::Approx(derived::kDarcyInflow).epsilon(1e-12));
  CHECK(src.phase_molar[index(Phase::gas)].v == 0.0);

  const auto still = testing::water_state(w, PhaseSet::liquid(), 2e6, 350.0, 0.0);
  const auto heat = reservoir_source(zone(2e6, 520.0, 1e-12, 100.0), local(still, w), w);
  CHECK(heat.molar[0].v == 0.0);
  CHECK(heat.energy.v == doctest::Approx(derived::kFourierNoFlow).epsilon(1e-14));
  CHECK(relative_permeability(0.5, 2.0) == 0.25);
  CHECK(relative_permeability(-0.1, 2.0) == 0.0);
}

TEST_CASE("source uses reservoir quantities on inflow and well quantities on outflow") {
  WaterFluid w;
  Gen g(41);
  for (int k = 0; k < 500; ++k) {
    const double pr = g.uniform(1e6, 8e6);
    const double p = pr * g.uniform(0.5, 1.5);
    const PhaseSet q = g.coin() ? PhaseSet::both() : PhaseSet::liquid();
    auto st = testing::water_state(w, q, p, saturation_temperature(w, p) - g.uniform(1.0, 50.0), g.uniform(0.05, 0.95));
    auto z = zone(pr, g.uniform(450.0, 560.0), g.log_uniform(1e-13, 1e-11), 0.0);
    const auto src = reservoir_source(z, local(st, w), w);
    const double total = src.phase_molar[0].v + src.phase_molar[1].v;
    CHECK(src.molar[0].v == doctest::Approx(total).epsilon(1e-14));
    auto z2 = z;
    z2.temperature += 5.0;
    auto st2 = st;
    if (!q.is_both()) st2.T -= 3.0;
    st2.s = q.is_both() ? std::array<double, kNumPhases>{st.s[0] * 0.9, 1.0 - st.s[0] * 0.9} : st.s;
    if (p < pr) {
      CHECK(total > 0.0);
      // node temperature and saturation are irrelevant on inflow
      const auto other = reservoir_source(z, local(st2, w), w);
      CHECK(other.molar[0].v == doctest::Approx(src.molar[0].v).epsilon(1e-14));
      CHECK(src.molar[0].d[1] == 0.0);
    } else if (p > pr) {
      CHECK(total < 0.0);
      // reservoir temperature is irrelevant on outflow
      const auto other = reservoir_source(z2, local(st, w), w);
      CHECK(other.molar[0].v == doctest::Approx(src.molar[0].v).epsilon(1e-14));
      CHECK(other.energy.v == doctest::Approx(src.energy.v).epsilon(1e-14));
    }
  }
}

TEST_CASE("source is continuous at zero drawdown and differentiable on each side") {
  WaterFluid w;
  const double pr = 3e6;
  auto z = zone(pr, 480.0, 1e-12, 50.0);
  auto at = [&](double p) {
    const auto st = testing::water_state(w, PhaseSet::liquid(), p, 450.0, 0.0);
    return reservoir_source(z, local(st, w), w);
  };
  const double scale = std::abs(at(pr * 0.99).molar[0].v);
  CHECK(std::abs(at(pr * (1 + 1e-12)).molar[0].v) < 1e-9 * scale);
  CHECK(std::abs(at(pr * (1 - 1e-12)).molar[0].v) < 1e-9 * scale);
  for (double p : {pr * 0.7, pr * 0.999, pr * 1.001, pr * 1.3}) {
    const auto s = at(p);
    const double h = 1e-6 * p;
    const double fd_q = (at(p + h).molar[0].v - at(p - h).molar[0].v) / (2 * h);
    const double fd_e = (at(p + h).energy.v - at(p - h).energy.v) / (2 * h);
    CHECK(rel_diff(s.molar[0].d[0], fd_q) < 1e-6);
    CHECK(rel_diff(s.energy.d[0], fd_e) < 1e-6);
  }
}

TEST_CASE("outflow derivatives in a two-phase node") {
  WaterFluid w;
  auto z = zone(1e6, 450.0, 2e-12, 10.0);
  Gen g(42);
  for (int k = 0; k < 200; ++k) {
    const double p = g.uniform(1.5e6, 4e6), sg = g.uniform(0.05, 0.95);
    auto src_at = [&](double dp, double ds) {
      const auto st = testing::water_state(w, PhaseSet::both(), p + dp, 0.0, sg + ds);
      return reservoir_source(z, local(st, w), w);
    };
    const auto s0 = src_at(0, 0);
    const double hp = 1e-6 * p, hs = 1e-6;
    for (int c = 0; c < 1; ++c) {
      const double fdp = (src_at(hp, 0).molar[0].v - src_at(-hp, 0).molar[0].v) / (2 * hp);
      const double fds = (src_at(0, hs).molar[0].v - src_at(0, -hs).molar[0].v) / (2 * hs);
      CHECK(rel_diff(s0.molar[0].d[0], fdp) < 1e-5);
      CHECK(rel_diff(s0.molar[0].d[1], fds) < 1e-5);
    }
    const double fde = (src_at(hp, 0).energy.v - src_at(-hp, 0).energy.v) / (2 * hp);
    CHECK(rel_diff(s0.energy.d[0], fde) < 1e-5);
  }
}

TEST_CASE("inlet boundary") {
  ImmiscibleFluid f;
  NodeState st;
  st.phases = PhaseSet::both();
  st.s = {0.6, 0.4};
  set_pure_phase_fractions(st, f);
  InletBoundary in;
  in.section = 0.01;
  in.velocity = {-0.05, 0.55};
  const auto src = inlet_source(in, local(st, f), f);
  CHECK(src.molar[1].v == doctest::Approx(0.01 * 4.0 / 0.018 * 0.55));
  CHECK(src.molar[0].v == doctest::Approx(-0.01 * 1000.0 / 0.018 * 0.05));
  NodeState liquid;
  set_pure_phase_fractions(liquid, f);
  in.velocity = {0.0, -0.1};
  CHECK_THROWS_AS(inlet_source(in, local(liquid, f), f), NumericalError);
}
