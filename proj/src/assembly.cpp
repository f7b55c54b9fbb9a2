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

#include "mswell/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mswell/errors.hpp"

namespace mswell {

const char* to_string(Constraint c) { return c == Constraint::pressure ? "pressure" : "rate"; }

namespace {

EdgeDual at_parent(const NodeDual& x) { return lift<kEdgeSlots, kMaxPrimary>(x, kMaxPrimary, kParentOffset); }
EdgeDual at_child(const NodeDual& x) { return lift<kEdgeSlots, kMaxPrimary>(x, kMaxPrimary, kChildOffset); }

}  // namespace

EdgeFlow evaluate_edge(const WellEdge& edge, double z_parent, double z_child, const NodeLocal& parent,
                       const NodeLocal& child, const FluidModel& fluid, const DfmParams& dfm,
                       const FrictionParams& friction) {
  const auto& cm = fluid.components();
  EdgeFlow f;
  f.rho_m = 0.5 * (at_parent(parent.mixture_density()) + at_child(child.mixture_density()));
  f.mu_m = 0.5 * (at_parent(parent.mixture_viscosity()) + at_child(child.mixture_viscosity()));
  f.dphi = at_parent(parent.p) - at_child(child.p) + f.rho_m * (kGravity * (z_parent - z_child));
  f.um = mixture_velocity_t(f.dphi, f.rho_m, f.mu_m, edge.length, edge.radius, friction.fq);

  const PhaseSet q = parent.phases | child.phases;
  if (!q.is_both()) {
    const Phase a = q.single();
    f.u[index(a)] = f.um;
    f.u[index(other(a))] = EdgeDual(0.0);
  } else {
    std::array<EdgeDual, kNumPhases> rho;
    for (Phase a : kPhases) {
      const int k = index(a);
      rho[k] = edge_phase_average(parent.has(a), child.has(a), at_parent(parent.rho[k]), at_child(child.rho[k]),
                                  at_parent(parent.s[k]), at_child(child.s[k]));
      f.rho_avg[k] = rho[k].v;
    }
    const int g = index(Phase::gas);
    const int l = index(Phase::liquid);
    f.u[g] = gas_flux_t(at_child(child.s[g]), at_parent(parent.s[g]), rho[l], rho[g], EdgeDual(dfm.sigma), f.um,
                        edge.orientation, dfm);
    f.u[l] = f.um - f.u[g];
  }

  for (Phase a : kPhases) {
    const int k = index(a);
    const EdgeDual& u = f.u[k];
    const bool from_child = u.v >= 0.0;
    const NodeLocal* up = from_child ? &child : &parent;
    bool up_is_child = from_child;
    if (!up->has(a)) {
      if (u.v != 0.0)
        throw NumericalError(std::string("upwind invariant violated on edge ") + std::to_string(edge.id) + ": " +
                             to_string(a) + " velocity " + std::to_string(u.v) + " leaves a node without that phase");
      up = from_child ? &parent : &child;
      up_is_child = !from_child;
      if (!up->has(a)) continue;
    }
    const EdgeDual zeta = up_is_child ? at_child(up->zeta[k]) : at_parent(up->zeta[k]);
    const EdgeDual h = up_is_child ? at_child(up->h[k]) : at_parent(up->h[k]);
    const EdgeDual vol_flux = edge.section * zeta * u;
    for (int i : cm.components_of(a)) {
      const auto ui = static_cast<std::size_t>(i);
      f.molar_flux[ui] += up->c[k][ui] * vol_flux;
    }
    f.energy_flux += h * vol_flux;
  }

  EdgeDual lambda(0.0);
  for (Phase a : kPhases) {
    const int k = index(a);
    lambda += 0.5 * (at_parent(parent.s[k]) + at_child(child.s[k])) * fluid.thermal_conductivity(a);
  }
  f.conduction = edge.section / edge.length * lambda * (at_parent(parent.T) - at_child(child.T));
  return f;
}

double momentum_residual(const WellEdge& edge, double p_parent, double p_child, double z_parent, double z_child,
                         double rho_m, double mu_m, double um, double fq) {
  return p_parent - p_child + rho_m * kGravity * (z_parent - z_child) -
         wall_friction(um, rho_m, mu_m, edge.radius, fq) * edge.length;
}

namespace {

using D8 = Dual<kEdgeSlots + 1>;
constexpr int kVelocitySlot = kEdgeSlots;

D8 widen(const NodeDual& x) { return lift<kEdgeSlots + 1, kMaxPrimary>(x, kMaxPrimary, 0); }

/// Two-phase head mixture velocity: root of
/// zeta_g (s C0 u + s Ud o) + zeta_l ((1 - s C0) u - s Ud o) - q / |S|
/// with C0 and Ud depending on u through |u|.
EdgeDual solve_head_velocity(const NodeLocal& root, const EdgeDual& q, double section, double orientation,
                             const DfmParams& dfm) {
  const int g = index(Phase::gas);
  const int l = index(Phase::liquid);
  D8 q8(q.v);
  for (int k = 0; k < kEdgeSlots; ++k) q8.d[k] = q.d[k];
  const D8 s = widen(root.s[g]);
  const D8 zg = widen(root.zeta[g]);
  const D8 zl = widen(root.zeta[l]);
  const D8 rl = widen(root.rho[l]);
  const D8 rg = widen(root.rho[g]);
  const D8 sigma(dfm.sigma);

  auto residual = [&](double u) {
    const D8 uu = D8::variable(u, kVelocitySlot);
    const D8 c0 = profile_parameter_t(s, uu, rl, rg, sigma, dfm);
    const D8 sud = drift_term_t(s, uu, rl, rg, sigma, dfm) * orientation;
    return zg * (s * c0 * uu + sud) + zl * ((1.0 - s * c0) * uu - sud) - q8 / section;
  };

  const double scale = std::abs(q.v) / section + 1e-300;
  double u = q.v / (section * (zg.v * s.v + zl.v * (1.0 - s.v)));
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  D8 r = residual(u);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(r.v) <= 1e-14 * scale) break;
    if (r.v < 0.0) lo = std::max(lo, u); else hi = std::min(hi, u);
    double next = u - r.v / r.d[kVelocitySlot];
    const bool bad = !(r.d[kVelocitySlot] > 0.0) || !std::isfinite(next) || next <= lo || next >= hi;
    if (bad) {
      if (std::isfinite(lo) && std::isfinite(hi)) next = 0.5 * (lo + hi);
      else if (std::isfinite(lo)) next = lo + std::max(1.0, std::abs(lo));
      else next = hi - std::max(1.0, std::abs(hi));
    }
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u))) {
      u = next;
      r = residual(u);
      break;
    }
    u = next;
    r = residual(u);
  }
  const double dr_du = r.d[kVelocitySlot];
  if (!(dr_du > 0.0) || !std::isfinite(u))
    throw NumericalError("head-node mixture velocity: two-phase rate equation is not invertible");
  EdgeDual um(u);
  for (int k = 0; k < kEdgeSlots; ++k) um.d[k] = -r.d[k] / dr_du;
  return um;
}

}  // namespace

HeadFlow head_outflow(const NodeLocal& root, const EdgeDual& q, double section, double orientation,
                      const FluidModel& fluid, const DfmParams& dfm) {
  const auto& cm = fluid.components();
  HeadFlow hf;
  const int g = index(Phase::gas);
  const int l = index(Phase::liquid);
  if (!root.phases.is_both()) {
    const Phase a = root.phases.single();
    const EdgeDual zeta = at_parent(root.zeta[index(a)]);
    const double denom = section * zeta.v;
    if (!(denom > 0.0)) throw NumericalError("head-node mixture velocity: non-positive molar density");
    hf.um = q / (section * zeta);
    hf.u[index(a)] = hf.um;
    hf.u[index(other(a))] = EdgeDual(0.0);
  } else {
    const double denom = root.zeta[g].v * root.s[g].v + root.zeta[l].v * (1.0 - root.s[g].v);
    if (!(denom > 0.0)) throw NumericalError("head-node mixture velocity: non-positive denominator");
    hf.um = solve_head_velocity(root, q, section, orientation, dfm);
    const EdgeDual s = at_parent(root.s[g]);
    const EdgeDual rl = at_parent(root.rho[l]);
    const EdgeDual rg = at_parent(root.rho[g]);
    const EdgeDual sigma(dfm.sigma);
    const EdgeDual c0 = profile_parameter_t(s, hf.um, rl, rg, sigma, dfm);
    const EdgeDual sud = drift_term_t(s, hf.um, rl, rg, sigma, dfm) * orientation;
    hf.u[g] = s * c0 * hf.um + sud;
    hf.u[l] = hf.um - hf.u[g];
  }
  for (Phase a : kPhases) {
    const int k = index(a);
    if (!root.has(a)) continue;
    const EdgeDual vol_flux = section * at_parent(root.zeta[k]) * hf.u[k];
    for (int i : cm.components_of(a)) {
      const auto ui = static_cast<std::size_t>(i);
      hf.molar[ui] += root.c[k][ui] * vol_flux;
    }
    hf.energy += at_parent(root.h[k]) * vol_flux;
  }
  return hf;
}

SystemEvaluation assemble_system(const WellModel& model, const std::vector<NodeState>& states,
                                 const std::vector<Accumulation>& previous, Constraint active, double dt,
                                 bool with_jacobian) {
  const WellMesh& mesh = model.mesh;
  const FluidModel& fluid = *model.fluid;
  const int nc = fluid.components().size();
  const bool thermal = !fluid.isothermal();
  const int np = fluid.primary_count();
  const int nn = mesh.node_count();
  const int root = mesh.root();
  const int nq = nc + (thermal ? 1 : 0);

  SystemEvaluation ev;
  ev.unknowns_per_node = np;
  const Eigen::Index n = static_cast<Eigen::Index>(nn) * np;
  ev.residual = Eigen::VectorXd::Zero(n);
  ev.row_kind.resize(static_cast<std::size_t>(n));
  ev.row_component.assign(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < nn; ++v) {
    for (int i = 0; i < nc; ++i) {
      ev.row_kind[static_cast<std::size_t>(v * np + i)] = RowKind::component;
      ev.row_component[static_cast<std::size_t>(v * np + i)] = i;
    }
    if (thermal) ev.row_kind[static_cast<std::size_t>(v * np + nc)] = RowKind::energy;
  }
  const int replaced_row = active == Constraint::pressure ? root * np : -1;
  if (replaced_row >= 0) {
    ev.row_kind[static_cast<std::size_t>(replaced_row)] = RowKind::head_pressure;
    ev.row_component[static_cast<std::size_t>(replaced_row)] = -1;
  }

  std::vector<Eigen::Triplet<double>> trip;
  if (with_jacobian) trip.reserve(static_cast<std::size_t>(n) * 3 * static_cast<std::size_t>(np));

  auto add_node = [&](int row, int v, const NodeDual& x, double sign) {
    if (row == replaced_row) return;
    ev.residual[row] += sign * x.v;
    if (!with_jacobian) return;
    for (int k = 0; k < np; ++k)
      if (x.d[k] != 0.0) trip.emplace_back(row, v * np + k, sign * x.d[k]);
  };
  auto add_edge = [&](int row, int parent, int child, const EdgeDual& x, double sign,
                      const std::map<int, double>* rate_grad = nullptr) {
    if (row == replaced_row) return;
    ev.residual[row] += sign * x.v;
    if (!with_jacobian) return;
    for (int k = 0; k < np; ++k) {
      if (x.d[kParentOffset + k] != 0.0) trip.emplace_back(row, parent * np + k, sign * x.d[kParentOffset + k]);
      if (child >= 0 && x.d[kChildOffset + k] != 0.0) trip.emplace_back(row, child * np + k, sign * x.d[kChildOffset + k]);
    }
    if (rate_grad && x.d[kRateSlot] != 0.0)
      for (const auto& [col, g] : *rate_grad) trip.emplace_back(row, col, sign * x.d[kRateSlot] * g);
  };

  ev.splits.reserve(static_cast<std::size_t>(nn));
  std::vector<NodeLocal> loc;
  loc.reserve(static_cast<std::size_t>(nn));
  ev.accumulations.resize(static_cast<std::size_t>(nn));
  for (int v = 0; v < nn; ++v) {
    ev.splits.push_back(split_primary_secondary(states[static_cast<std::size_t>(v)], fluid, v));
    loc.push_back(make_node_local(states[static_cast<std::size_t>(v)], fluid, ev.splits.back(), mesh.node_volume(v)));
  }

  ev.balance_accumulation.assign(static_cast<std::size_t>(nq), 0.0);
  ev.balance_sources.assign(static_cast<std::size_t>(nq), 0.0);
  ev.balance_outflow.assign(static_cast<std::size_t>(nq), 0.0);
  std::vector<double> abs_acc(static_cast<std::size_t>(nq), 0.0), abs_src(static_cast<std::size_t>(nq), 0.0);

  // Accumulation.
  for (int v = 0; v < nn; ++v) {
    const auto& L = loc[static_cast<std::size_t>(v)];
    const auto& old = previous[static_cast<std::size_t>(v)];
    auto& acc = ev.accumulations[static_cast<std::size_t>(v)];
    for (int i = 0; i < nc; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      acc.moles[ui] = L.moles[ui].v;
      const NodeDual rate = (L.moles[ui] - old.moles[ui]) / dt;
      add_node(v * np + i, v, rate, 1.0);
      ev.balance_accumulation[ui] += rate.v;
      abs_acc[ui] += std::abs(rate.v);
    }
    acc.energy = L.energy.v;
    if (thermal) {
      const NodeDual rate = (L.energy - old.energy) / dt;
      add_node(v * np + nc, v, rate, 1.0);
      ev.balance_accumulation[static_cast<std::size_t>(nc)] += rate.v;
      abs_acc[static_cast<std::size_t>(nc)] += std::abs(rate.v);
    }
  }

  // Feed zones and inlet.
  ev.sources.assign(static_cast<std::size_t>(nn), NodeSource{});
  auto add_source = [&](int v, const NodeSource& src) {
    auto& total = ev.sources[static_cast<std::size_t>(v)];
    for (int i = 0; i < nc; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      add_node(v * np + i, v, src.molar[ui], -1.0);
      total.molar[ui] += src.molar[ui];
      ev.balance_sources[ui] += src.molar[ui].v;
      abs_src[ui] += std::abs(src.molar[ui].v);
    }
    for (Phase a : kPhases) total.phase_molar[index(a)] += src.phase_molar[index(a)];
    if (thermal) {
      add_node(v * np + nc, v, src.energy, -1.0);
      ev.balance_sources[static_cast<std::size_t>(nc)] += src.energy.v;
      abs_src[static_cast<std::size_t>(nc)] += std::abs(src.energy.v);
    }
    total.energy += src.energy;
  };
  for (const auto& zone : model.feeds)
    add_source(zone.node, reservoir_source(zone, loc[static_cast<std::size_t>(zone.node)], fluid));
  if (model.inlet) add_source(model.inlet->node, inlet_source(*model.inlet, loc[static_cast<std::size_t>(model.inlet->node)], fluid));

  // Edges.
  ev.edges.reserve(static_cast<std::size_t>(mesh.edge_count()));
  for (const auto& e : mesh.edges()) {
    ev.edges.push_back(evaluate_edge(e, mesh.z(e.parent), mesh.z(e.child), loc[static_cast<std::size_t>(e.parent)],
                                     loc[static_cast<std::size_t>(e.child)], fluid, model.dfm, model.friction));
    const EdgeFlow& f = ev.edges.back();
    for (int i = 0; i < nc; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      add_edge(e.parent * np + i, e.parent, e.child, f.molar_flux[ui], -1.0);
      add_edge(e.child * np + i, e.parent, e.child, f.molar_flux[ui], 1.0);
    }
    if (thermal) {
      add_edge(e.parent * np + nc, e.parent, e.child, f.conduction - f.energy_flux, 1.0);
      add_edge(e.child * np + nc, e.parent, e.child, f.energy_flux - f.conduction, 1.0);
    }
  }

  // Head-node rate: prescribed, or eliminated from the summed molar balance at the root.
  std::map<int, double> rate_grad;
  double q = model.monitor.max_rate;
  if (active == Constraint::pressure) {
    q = 0.0;
    const auto& L = loc[static_cast<std::size_t>(root)];
    const auto& old = previous[static_cast<std::size_t>(root)];
    const auto& src = ev.sources[static_cast<std::size_t>(root)];
    for (int i = 0; i < nc; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const NodeDual part = -(L.moles[ui] - old.moles[ui]) / dt + src.molar[ui];
      q += part.v;
      for (int k = 0; k < np; ++k) rate_grad[root * np + k] += part.d[k];
    }
    for (int a : mesh.incident_edges(root)) {
      const auto& e = mesh.edge(a);
      const auto& f = ev.edges[static_cast<std::size_t>(a)];
      const double kappa = mesh.incidence(a, root);
      const int other_node = e.parent == root ? e.child : e.parent;
      const int root_off = e.parent == root ? kParentOffset : kChildOffset;
      const int other_off = e.parent == root ? kChildOffset : kParentOffset;
      for (int i = 0; i < nc; ++i) {
        const EdgeDual& x = f.molar_flux[static_cast<std::size_t>(i)];
        q += kappa * x.v;
        for (int k = 0; k < np; ++k) {
          rate_grad[root * np + k] += kappa * x.d[root_off + k];
          rate_grad[other_node * np + k] += kappa * x.d[other_off + k];
        }
      }
    }
  }
  ev.q_head = q;
  const int root_edge = mesh.incident_edges(root).front();
  EdgeDual qd(q);
  qd.d[kRateSlot] = 1.0;
  ev.head = head_outflow(loc[static_cast<std::size_t>(root)], qd, mesh.head_section(), mesh.edge(root_edge).orientation,
                         fluid, model.dfm);
  const std::map<int, double>* grad = active == Constraint::pressure ? &rate_grad : nullptr;
  for (int i = 0; i < nc; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    add_edge(root * np + i, root, -1, ev.head.molar[ui], 1.0, grad);
    ev.balance_outflow[ui] += ev.head.molar[ui].v;
  }
  if (thermal) {
    add_edge(root * np + nc, root, -1, ev.head.energy, 1.0, grad);
    ev.balance_outflow[static_cast<std::size_t>(nc)] += ev.head.energy.v;
  }
  if (replaced_row >= 0) {
    ev.residual[replaced_row] = states[static_cast<std::size_t>(root)].p - model.monitor.min_head_pressure;
    if (with_jacobian) trip.emplace_back(replaced_row, root * np, 1.0);
  }

  ev.balance_scale.resize(static_cast<std::size_t>(nq));
  for (std::size_t k = 0; k < static_cast<std::size_t>(nq); ++k)
    ev.balance_scale[k] = std::max({abs_acc[k], abs_src[k], std::abs(ev.balance_outflow[k])});

  if (with_jacobian) {
    ev.jacobian.resize(n, n);
    ev.jacobian.setFromTriplets(trip.begin(), trip.end());
  }
  return ev;
}

}  // namespace mswell
