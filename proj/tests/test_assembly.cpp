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

#include "jacobian_check.hpp"
#include "momentum_check.hpp"
#include "mswell/assembly.hpp"
#include "mswell/errors.hpp"
#include "mswell/solver.hpp"
#include "support.hpp"

using namespace mswell;
using testing::Gen;

TEST_CASE("accumulation of a liquid node") {
  WaterFluid w;
  const auto st = testing::water_state(w, PhaseSet::liquid(), 2e6, 400.0, 0.0);
  const auto acc = accumulation(st, w, 0.3);
  const auto b = w.properties(Phase::liquid, 2e6, 400.0, st.fractions(Phase::liquid));
  CHECK(acc.moles[0] == doctest::Approx(0.3 * b.molar_density.value).epsilon(1e-14));
  CHECK(acc.energy == doctest::Approx(0.3 * b.molar_density.value * b.internal_energy.value).epsilon(1e-14));
}

TEST_CASE("edge averages and upwinding") {
  CHECK(upwind_phase_quantity(1.0, 2.0, 0.0) == 2.0);
  CHECK(upwind_phase_quantity(1.0, 2.0, 1e-3) == 2.0);
  CHECK(upwind_phase_quantity(1.0, 2.0, -1e-3) == 1.0);
  CHECK(edge_phase_average(true, false, 3.0, 5.0, 0.0, 0.0) == 3.0);
  CHECK(edge_phase_average(false, true, 3.0, 5.0, 0.0, 0.0) == 5.0);
  CHECK(edge_phase_average(true, true, 3.0, 5.0, 0.0, 0.0) == 4.0);
  CHECK(edge_phase_average(true, true, 3.0, 5.0, 0.25, 0.75) == doctest::Approx(4.5));
  Gen g(51);
  for (int k = 0; k < 1000; ++k) {
    const double a = g.uniform(0.0, 10.0), b = g.uniform(0.0, 10.0), sa = g.uniform(0.0, 1.0), sb = g.uniform(0.0, 1.0);
    const double m = edge_phase_average(true, true, a, b, sa, sb);
    CHECK(m >= std::min(a, b) - 1e-12);
    CHECK(m <= std::max(a, b) + 1e-12);
  }
}

TEST_CASE("edge mixture velocity satisfies the momentum balance") {
  const auto r = testing::momentum_check(5000, 52);
  CHECK(r.samples == 5000);
  CHECK(r.worst <= 1e-9);
}

TEST_CASE("random wells: upwinding, averages and dimensions") {
  Gen g(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = testing::random_two_phase_well(g);
    const auto ev = assemble_system(w.model, w.states, w.previous, w.constraint, w.dt, true);
    const int nc = w.model.fluid->components().size();
    CHECK(ev.jacobian.rows() == (nc + 1) * w.model.mesh.node_count());
    CHECK(ev.jacobian.cols() == ev.jacobian.rows());
    for (const auto& e : w.model.mesh.edges()) {
      const auto& f = ev.edges[static_cast<std::size_t>(e.id)];
      const auto& sp = w.states[static_cast<std::size_t>(e.parent)];
      const auto& sc = w.states[static_cast<std::size_t>(e.child)];
      for (Phase a : kPhases) {
        const double u = f.u[index(a)].v;
        const auto& up = u >= 0.0 ? sc : sp;
        if (!up.phases.contains(a)) CHECK(u == 0.0);
      }
      auto rho_m = [&](const NodeState& s) {
        double r = 0.0;
        for (Phase a : kPhases)
          if (s.phases.contains(a)) r += s.saturation(a) * w.model.fluid->properties(a, s.p, s.T, s.fractions(a)).mass_density.value;
        return r;
      };
      CHECK(f.rho_m.v >= std::min(rho_m(sp), rho_m(sc)) * (1 - 1e-12));
      CHECK(f.rho_m.v <= std::max(rho_m(sp), rho_m(sc)) * (1 + 1e-12));
      CHECK(f.u[0].v + f.u[1].v == doctest::Approx(f.um.v).epsilon(1e-12));
    }
  }
}

TEST_CASE("reduced Jacobian matches finite differences") {
  Gen g(54);
  long kinks = 0, entries = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = testing::check_jacobian(testing::random_two_phase_well(g));
    kinks += r.kinks;
    entries += r.entries;
    worst = std::max(worst, r.worst);
  }
  CHECK(worst <= 1e-4);
  CHECK(kinks <= entries / 20);
  MESSAGE("entries " << entries << ", kinks " << kinks << ", worst " << worst);
}

TEST_CASE("global balance terms add up to the summed residual") {
  Gen g(55);
  for (int trial = 0; trial < 20; ++trial) {
    auto w = testing::random_two_phase_well(g);
    w.constraint = Constraint::rate;
    const auto ev = assemble_system(w.model, w.states, w.previous, w.constraint, w.dt, false);
    const int np = ev.unknowns_per_node;
    for (int q = 0; q < np; ++q) {
      double sum = 0.0;
      for (int v = 0; v < w.model.mesh.node_count(); ++v) sum += ev.residual[v * np + q];
      const auto uq = static_cast<std::size_t>(q);
      const double terms = ev.balance_accumulation[uq] - ev.balance_sources[uq] + ev.balance_outflow[uq];
      CHECK(std::abs(sum - terms) <= 1e-10 * ev.balance_scale[uq]);
    }
  }
}

TEST_CASE("primary split keeps one unknown per conservation equation") {
  WaterFluid w;
  ImmiscibleFluid im;
  Gen g(56);
  for (int k = 0; k < 300; ++k) {
    const double p = g.uniform(2e5, 5e6);
    const PhaseSet q = std::array{PhaseSet::liquid(), PhaseSet::gas(), PhaseSet::both()}[g.integer(0, 2)];
    const bool water = g.coin();
    const FluidModel& f = water ? static_cast<const FluidModel&>(w) : im;
    NodeState st = water ? testing::water_state(w, q, p, saturation_temperature(w, p) + (q == PhaseSet::gas() ? 10 : -10),
                                                g.uniform(0.1, 0.9))
                         : NodeState{};
    if (!water) {
      st.phases = q;
      st.p = p;
      st.s = q.is_both() ? std::array<double, kNumPhases>{0.4, 0.6}
                         : (q.contains(Phase::gas) ? std::array<double, kNumPhases>{0.0, 1.0}
                                                   : std::array<double, kNumPhases>{1.0, 0.0});
      set_pure_phase_fractions(st, f);
    }
    const auto split = split_primary_secondary(st, f);
    CHECK(split.count() == f.primary_count());
    CHECK(split.index_of(Unknown::pressure) == 0);
    std::vector<double> dx(static_cast<std::size_t>(split.count()), 0.0);
    dx[0] = 0.01 * p;
    if (split.count() > 1) dx[1] = split.primary[1].kind == Unknown::gas_saturation ? 0.01 : 0.1;
    apply_increment(st, f, split, dx.data());
    for (double r : closure_residual(st, f).values) CHECK(std::abs(r) <= 1e-8 * st.p);
  }
}
