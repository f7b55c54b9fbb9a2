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

#ifndef MSWELL_TESTS_JACOBIAN_CHECK_HPP
#define MSWELL_TESTS_JACOBIAN_CHECK_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mswell/assembly.hpp"
#include "mswell/solver.hpp"
#include "support.hpp"

namespace testing {

struct JacobianCheck {
  long entries = 0;   // nonzero analytic or finite-difference entries
  long compared = 0;
  long kinks = 0;     // one-sided differences disagree: a switching kink lies within the step
  long coarse = 0;    // compared with the larger step because of roundoff
  double worst = 0.0; // largest relative deviation among compared entries
};

/// Random five-node thermal water well with at least three two-phase nodes,
/// a feed zone at a leaf and a random previous state.
struct RandomWell {
  mswell::WellModel model;
  std::vector<mswell::NodeState> states;
  std::vector<mswell::Accumulation> previous;
  mswell::Constraint constraint = mswell::Constraint::pressure;
  double dt = 1.0;
};

inline RandomWell random_two_phase_well(Gen& g) {
  using namespace mswell;
  RandomWell w;
  std::vector<BranchSpec> branches;
  auto dir = [&](double len) {
    const double theta = g.uniform(0.0, std::numbers::pi / 2 * 0.95), phi = g.uniform(0.0, 2 * std::numbers::pi);
    return Point3{len * std::sin(theta) * std::cos(phi), len * std::sin(theta) * std::sin(phi), -len * std::cos(theta)};
  };
  const Point3 a = dir(g.uniform(20.0, 80.0));
  if (g.coin()) {
    branches.push_back({"upper", {0, 0, 0}, a, 4, {}});
  } else {
    const Point3 b = dir(g.uniform(10.0, 50.0)), c = dir(g.uniform(10.0, 50.0));
    const Point3 jb{a[0] + b[0], a[1] + b[1], a[2] + b[2]}, jc{a[0] + c[0], a[1] + c[1], a[2] + c[2]};
    branches.push_back({"upper", {0, 0, 0}, a, 2, {}});
    branches.push_back({"left", a, jb, 1, {}});
    branches.push_back({"right", a, jc, 1, {}});
  }
  w.model.mesh = build_well_mesh(branches, {0, 0, 0}, g.uniform(0.03, 0.1));
  auto fluid = std::make_shared<WaterFluid>();
  w.model.fluid = fluid;
  w.model.friction.fq = g.uniform(0.001, 0.08);
  const int nn = w.model.mesh.node_count();
  const double p_head = g.uniform(8e5, 3e6);
  std::vector<int> two_phase(static_cast<std::size_t>(nn), 0);
  int count = 0;
  while (count < 3) {
    count = 0;
    for (int v = 0; v < nn; ++v) count += (two_phase[static_cast<std::size_t>(v)] = g.coin(0.7));
  }
  for (int v = 0; v < nn; ++v) {
    const double p = p_head - 600.0 * kGravity * w.model.mesh.z(v) + g.uniform(-3e4, 3e4);
    const double tsat = saturation_temperature(*fluid, p);
    if (two_phase[static_cast<std::size_t>(v)]) {
      w.states.push_back(water_state(*fluid, PhaseSet::both(), p, 0.0, g.uniform(0.05, 0.95)));
    } else if (g.coin(0.7)) {
      w.states.push_back(water_state(*fluid, PhaseSet::liquid(), p, tsat - g.uniform(1.0, 30.0), 0.0));
    } else {
      w.states.push_back(water_state(*fluid, PhaseSet::gas(), p, tsat + g.uniform(1.0, 30.0), 1.0));
    }
  }
  const auto leaves = w.model.mesh.leaves();
  FeedZone z;
  z.node = leaves[static_cast<std::size_t>(g.integer(0, static_cast<int>(leaves.size()) - 1))];
  z.pressure = w.states[static_cast<std::size_t>(z.node)].p * g.uniform(0.9, 1.1);
  z.temperature = g.uniform(450.0, 540.0);
  z.wi_darcy = g.log_uniform(1e-13, 1e-11);
  z.wi_fourier = g.uniform(0.0, 200.0);
  w.model.feeds.push_back(z);
  w.model.monitor.min_head_pressure = p_head * g.uniform(0.8, 1.0);
  w.model.monitor.max_rate = g.uniform(50.0, 1000.0);
  w.constraint = g.coin() ? Constraint::pressure : Constraint::rate;
  auto old = w.states;
  for (auto& s : old) s.p *= g.uniform(0.99, 1.01);
  for (auto& s : old)
    if (s.phases.is_both()) s.T = saturation_temperature(*fluid, s.p);
  w.previous = accumulations(w.model, old);
  w.dt = g.log_uniform(0.5, 100.0);
  return w;
}

/// Largest single term summed into each residual row: accumulation rates,
/// sources, edge fluxes and the head outflow. Rows that cancel large terms
/// carry roundoff of eps times this scale.
inline std::vector<double> row_term_scale(const mswell::WellModel& model, const mswell::SystemEvaluation& ev,
                                          const std::vector<mswell::Accumulation>& previous, double dt) {
  using namespace mswell;
  const auto& mesh = model.mesh;
  const int np = ev.unknowns_per_node;
  std::vector<double> scale(static_cast<std::size_t>(ev.residual.size()), 0.0);
  auto bump = [&](int row, double x) {
    auto& s = scale[static_cast<std::size_t>(row)];
    s = std::max(s, std::abs(x));
  };
  for (int v = 0; v < mesh.node_count(); ++v) {
    const auto uv = static_cast<std::size_t>(v);
    for (int k = 0; k < np; ++k) {
      const int row = v * np + k;
      const auto kind = ev.row_kind[static_cast<std::size_t>(row)];
      if (kind == RowKind::head_pressure) {
        bump(row, model.monitor.min_head_pressure);
        continue;
      }
      const bool energy = kind == RowKind::energy;
      const auto i = static_cast<std::size_t>(std::max(ev.row_component[static_cast<std::size_t>(row)], 0));
      const double now = energy ? ev.accumulations[uv].energy : ev.accumulations[uv].moles[i];
      const double old = energy ? previous[uv].energy : previous[uv].moles[i];
      bump(row, now / dt);
      bump(row, old / dt);
      bump(row, energy ? ev.sources[uv].energy.v : ev.sources[uv].molar[i].v);
      for (int a : mesh.incident_edges(v)) {
        const auto& f = ev.edges[static_cast<std::size_t>(a)];
        bump(row, energy ? f.energy_flux.v : f.molar_flux[i].v);
        if (energy) bump(row, f.conduction.v);
      }
      if (v == mesh.root()) bump(row, energy ? ev.head.energy.v : ev.head.molar[i].v);
    }
  }
  return scale;
}

/// Compares the reduced analytic Jacobian against centered differences of
/// the reduced residual with a relative step of 1e-6. Entries whose roundoff
/// estimate exceeds a hundredth of the tolerance are compared with a step
/// 100 times larger instead. Entries straddling a kink at the step used are
/// counted, not compared.
inline JacobianCheck check_jacobian(const RandomWell& w, double tolerance = 1e-4) {
  using namespace mswell;
  constexpr double kFineStep = 1e-6, kCoarseStep = 1e-4, kRoundoffFactor = 100.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const auto& fluid = *w.model.fluid;
  const auto ev = assemble_system(w.model, w.states, w.previous, w.constraint, w.dt, true);
  const Eigen::MatrixXd A(ev.jacobian);
  const int np = ev.unknowns_per_node;
  const Eigen::Index n = ev.residual.size();
  const auto terms = row_term_scale(w.model, ev, w.previous, w.dt);
  JacobianCheck out;
  std::vector<double> row_scale(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index r = 0; r < n; ++r) row_scale[static_cast<std::size_t>(r)] = A.row(r).cwiseAbs().maxCoeff();

  struct Differences {
    Eigen::VectorXd centered, forward, backward;
  };
  for (int v = 0; v < static_cast<int>(w.states.size()); ++v) {
    const auto& split = ev.splits[static_cast<std::size_t>(v)];
    for (int k = 0; k < np; ++k) {
      const auto kind = split.primary[static_cast<std::size_t>(k)].kind;
      const double unit = kind == Unknown::pressure ? w.states[static_cast<std::size_t>(v)].p
                          : kind == Unknown::temperature ? w.states[static_cast<std::size_t>(v)].T
                                                         : 1.0;
      auto differences = [&](double h) {
        auto at = [&](double step) {
          auto st = w.states;
          std::vector<double> dx(static_cast<std::size_t>(np), 0.0);
          dx[static_cast<std::size_t>(k)] = step;
          apply_increment(st[static_cast<std::size_t>(v)], fluid, split, dx.data());
          return assemble_system(w.model, st, w.previous, w.constraint, w.dt, false).residual;
        };
        const Eigen::VectorXd rp = at(h), rm = at(-h);
        return Differences{(rp - rm) / (2 * h), (rp - ev.residual) / h, (ev.residual - rm) / h};
      };
      const double h_fine = kFineStep * unit, h_coarse = kCoarseStep * unit;
      const Differences fine = differences(h_fine);
      std::optional<Differences> coarse;
      const Eigen::Index col = static_cast<Eigen::Index>(v) * np + k;
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        const double a = A(r, col), floor = 1e-8 * row_scale[ur];
        if (std::abs(a) <= floor && std::abs(fine.centered[r]) <= floor) continue;
        ++out.entries;
        const Differences* d = &fine;
        const double roundoff = kRoundoffFactor * eps * terms[ur] / h_fine;
        if (roundoff > 1e-2 * tolerance * std::max(std::abs(a), floor)) {
          if (!coarse) coarse = differences(h_coarse);
          d = &*coarse;
          ++out.coarse;
        }
        const double fwd = d->forward[r], bwd = d->backward[r];
        if (std::abs(fwd - bwd) > 1e-3 * std::max({std::abs(fwd), std::abs(bwd), floor})) {
          ++out.kinks;
          continue;
        }
        ++out.compared;
        const double fd = d->centered[r];
        out.worst = std::max(out.worst, std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), floor}));
      }
    }
  }
  return out;
}

}  // namespace testing

#endif  // MSWELL_TESTS_JACOBIAN_CHECK_HPP
