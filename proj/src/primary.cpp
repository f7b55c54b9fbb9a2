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

#include "mswell/primary.hpp"

#include <algorithm>

#include "mswell/errors.hpp"

namespace mswell {

std::string to_string(const UnknownRef& x) {
  switch (x.kind) {
    case Unknown::pressure: return "p";
    case Unknown::temperature: return "T";
    case Unknown::gas_saturation: return "s_gas";
    case Unknown::liquid_saturation: return "s_liquid";
    case Unknown::fraction: return std::string("c_") + to_string(x.phase) + "_" + std::to_string(x.component);
    case Unknown::absent_moles: return "n_absent_" + std::to_string(x.component);
  }
  return "?";
}

int PrimarySplit::index_of(Unknown kind) const {
  for (int k = 0; k < count(); ++k)
    if (primary[static_cast<std::size_t>(k)].kind == kind) return k;
  return -1;
}

namespace {

std::vector<UnknownRef> natural_unknowns(PhaseSet q, const FluidModel& fluid) {
  const auto& cm = fluid.components();
  std::vector<UnknownRef> x{{Unknown::pressure}};
  if (!fluid.isothermal()) x.push_back({Unknown::temperature});
  x.push_back({Unknown::gas_saturation});
  x.push_back({Unknown::liquid_saturation});
  for (Phase a : kPhases) {
    if (!q.contains(a)) continue;
    for (int i : cm.components_of(a)) x.push_back({Unknown::fraction, a, i});
  }
  for (int i : cm.absent_components(q)) x.push_back({Unknown::absent_moles, Phase::liquid, i});
  return x;
}

bool has_equilibrium(PhaseSet q, const FluidModel& fluid) {
  if (!q.is_both()) return false;
  const auto& cm = fluid.components();
  for (int i = 0; i < cm.size(); ++i)
    if (cm.phases_of(i).is_both()) return true;
  return false;
}

}  // namespace

double primary_value(const NodeState& state, const UnknownRef& x) {
  switch (x.kind) {
    case Unknown::pressure: return state.p;
    case Unknown::temperature: return state.T;
    case Unknown::gas_saturation: return state.s[index(Phase::gas)];
    case Unknown::liquid_saturation: return state.s[index(Phase::liquid)];
    case Unknown::fraction: return state.c[index(x.phase)][static_cast<std::size_t>(x.component)];
    case Unknown::absent_moles: return state.absent_moles[static_cast<std::size_t>(x.component)];
  }
  return 0.0;
}

PrimarySplit split_primary_secondary(const NodeState& state, const FluidModel& fluid, int node_id) {
  const auto& cm = fluid.components();
  const PhaseSet q = state.phases;
  PrimarySplit sp;
  sp.phases = q;

  sp.primary.push_back({Unknown::pressure});
  const bool equilibrium = has_equilibrium(q, fluid);
  if (!fluid.isothermal() && !equilibrium) sp.primary.push_back({Unknown::temperature});
  if (q.is_both()) sp.primary.push_back({Unknown::gas_saturation});
  for (int i : cm.absent_components(q)) sp.primary.push_back({Unknown::absent_moles, Phase::liquid, i});
  if (sp.count() != fluid.primary_count())
    throw NumericalError("node " + std::to_string(node_id) + ": phase set " + to_string(q) + " yields " +
                         std::to_string(sp.count()) + " primary unknowns instead of " +
                         std::to_string(fluid.primary_count()) + " (unsupported component layout)");

  for (const auto& x : natural_unknowns(q, fluid))
    if (std::find(sp.primary.begin(), sp.primary.end(), x) == sp.primary.end()) sp.secondary.push_back(x);

  // Closure rows in the order of closure_residual.
  std::vector<std::vector<std::pair<UnknownRef, double>>> rows;
  for (int i = 0; i < cm.size(); ++i) {
    if (q.is_both() && cm.phases_of(i).is_both()) {
      const double dpsat = fluid.saturation_law()->dpressure_dT(state.T);
      rows.push_back({{{Unknown::pressure}, 1.0}, {{Unknown::temperature}, -dpsat}});
    }
  }
  for (Phase a : kPhases) {
    if (!q.contains(a)) continue;
    std::vector<std::pair<UnknownRef, double>> r;
    for (int i : cm.components_of(a)) r.push_back({{Unknown::fraction, a, i}, 1.0});
    rows.push_back(r);
  }
  {
    std::vector<std::pair<UnknownRef, double>> r;
    if (q.contains(Phase::gas)) r.push_back({{Unknown::gas_saturation}, 1.0});
    if (q.contains(Phase::liquid)) r.push_back({{Unknown::liquid_saturation}, 1.0});
    rows.push_back(r);
  }
  if (!q.contains(Phase::gas)) rows.push_back({{{Unknown::gas_saturation}, 1.0}});
  if (!q.contains(Phase::liquid)) rows.push_back({{{Unknown::liquid_saturation}, 1.0}});

  const auto ns = static_cast<Eigen::Index>(sp.secondary.size());
  const auto np = static_cast<Eigen::Index>(sp.primary.size());
  if (static_cast<Eigen::Index>(rows.size()) != ns)
    throw NumericalError("node " + std::to_string(node_id) + ": " + std::to_string(rows.size()) +
                         " closure equations for " + std::to_string(ns) + " secondary unknowns");
  sp.closure_secondary = Eigen::MatrixXd::Zero(ns, ns);
  sp.closure_primary = Eigen::MatrixXd::Zero(ns, np);
  for (Eigen::Index r = 0; r < ns; ++r) {
    for (const auto& [x, val] : rows[static_cast<std::size_t>(r)]) {
      auto ps = std::find(sp.primary.begin(), sp.primary.end(), x);
      if (ps != sp.primary.end()) {
        sp.closure_primary(r, ps - sp.primary.begin()) += val;
        continue;
      }
      auto ss = std::find(sp.secondary.begin(), sp.secondary.end(), x);
      if (ss != sp.secondary.end()) sp.closure_secondary(r, ss - sp.secondary.begin()) += val;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sp.closure_secondary);
  if (!lu.isInvertible())
    throw NumericalError("node " + std::to_string(node_id) + ": singular closure block for phase set " + to_string(q));
  sp.sensitivity = -lu.solve(sp.closure_primary);
  return sp;
}

void apply_increment(NodeState& state, const FluidModel& fluid, const PrimarySplit& split, const double* dx) {
  for (int k = 0; k < split.count(); ++k) {
    const auto& x = split.primary[static_cast<std::size_t>(k)];
    switch (x.kind) {
      case Unknown::pressure: state.p += dx[k]; break;
      case Unknown::temperature: state.T += dx[k]; break;
      case Unknown::gas_saturation: state.s[index(Phase::gas)] += dx[k]; break;
      case Unknown::absent_moles: state.absent_moles[static_cast<std::size_t>(x.component)] += dx[k]; break;
      default: throw NumericalError("unexpected primary unknown " + to_string(x));
    }
  }
  // Secondaries solved exactly from the closure laws.
  set_pure_phase_fractions(state, fluid);
  if (state.phases.is_both()) {
    state.s[index(Phase::liquid)] = 1.0 - state.s[index(Phase::gas)];
    if (has_equilibrium(state.phases, fluid)) state.T = saturation_temperature(fluid, state.p);
  }
}

NodeDual NodeLocal::mixture_density() const {
  NodeDual r(0.0);
  for (Phase a : kPhases)
    if (has(a)) r += s[index(a)] * rho[index(a)];
  return r;
}

NodeDual NodeLocal::mixture_viscosity() const {
  NodeDual r(0.0);
  for (Phase a : kPhases)
    if (has(a)) r += s[index(a)] * mu[index(a)];
  return r;
}

namespace {

NodeDual lift_property(const PropertyValue& v, const NodeDual& p, const NodeDual& T) {
  NodeDual r(v.value);
  for (int k = 0; k < kMaxPrimary; ++k) r.d[k] = v.dp * p.d[k] + v.dT * T.d[k];
  return r;
}

}  // namespace

NodeLocal make_node_local(const NodeState& state, const FluidModel& fluid, const PrimarySplit& split, double volume) {
  const auto& cm = fluid.components();
  NodeLocal L;
  L.phases = state.phases;
  L.primary_count = split.count();
  L.volume = volume;

  auto var = [&](const UnknownRef& x) {
    NodeDual r(primary_value(state, x));
    for (int k = 0; k < split.count(); ++k)
      if (split.primary[static_cast<std::size_t>(k)] == x) {
        r.d[k] = 1.0;
        return r;
      }
    for (std::size_t j = 0; j < split.secondary.size(); ++j)
      if (split.secondary[j] == x) {
        for (int k = 0; k < split.count(); ++k) r.d[k] = split.sensitivity(static_cast<Eigen::Index>(j), k);
        return r;
      }
    return r;  // not an unknown (isothermal temperature)
  };

  L.p = var({Unknown::pressure});
  L.T = var({Unknown::temperature});
  L.s[index(Phase::gas)] = var({Unknown::gas_saturation});
  L.s[index(Phase::liquid)] = var({Unknown::liquid_saturation});
  L.c = state.c;

  for (Phase a : kPhases) {
    if (!L.has(a)) continue;
    const int k = index(a);
    const PropertyBundle b = eval_properties(fluid, a, state.p, state.T, state.fractions(a));
    L.zeta[k] = lift_property(b.molar_density, L.p, L.T);
    L.rho[k] = lift_property(b.mass_density, L.p, L.T);
    L.mu[k] = lift_property(b.viscosity, L.p, L.T);
    L.h[k] = lift_property(b.enthalpy, L.p, L.T);
    L.e[k] = lift_property(b.internal_energy, L.p, L.T);
  }

  const auto absent = cm.absent_components(L.phases);
  for (int i = 0; i < cm.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (std::find(absent.begin(), absent.end(), i) != absent.end()) {
      L.moles[ui] = var({Unknown::absent_moles, Phase::liquid, i});
      continue;
    }
    NodeDual n(0.0);
    for (Phase a : kPhases)
      if (L.has(a) && cm.in_phase(i, a)) n += L.c[index(a)][ui] * L.s[index(a)] * L.zeta[index(a)];
    L.moles[ui] = volume * n;
  }
  NodeDual ne(0.0);
  for (Phase a : kPhases)
    if (L.has(a)) ne += L.s[index(a)] * L.zeta[index(a)] * L.e[index(a)];
  L.energy = volume * ne;
  return L;
}

Accumulation accumulation(const NodeState& state, const FluidModel& fluid, double volume) {
  const PrimarySplit sp = split_primary_secondary(state, fluid);
  const NodeLocal L = make_node_local(state, fluid, sp, volume);
  Accumulation acc;
  for (int i = 0; i < fluid.components().size(); ++i) acc.moles[static_cast<std::size_t>(i)] = L.moles[static_cast<std::size_t>(i)].v;
  acc.energy = L.energy.v;
  return acc;
}

}  // namespace mswell
