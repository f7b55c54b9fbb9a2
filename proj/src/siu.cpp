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

#include "mswell/siu.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "mswell/errors.hpp"

namespace mswell {

CumulativeRates cumulative_rates(const WellMesh& mesh, const std::vector<double>& molar,
                                 const std::vector<double>& energy) {
  const auto n = static_cast<std::size_t>(mesh.node_count());
  if (molar.size() != n || energy.size() != n)
    throw DomainError("cumulative rates: source vectors must have one entry per node");
  CumulativeRates r{molar, energy};
  for (int v : mesh.leaf_to_root_order()) {
    const auto& pe = mesh.node(v).parent_edge;
    if (!pe) continue;
    const auto parent = static_cast<std::size_t>(mesh.edge(*pe).parent);
    r.molar[parent] += r.molar[static_cast<std::size_t>(v)];
    r.energy[parent] += r.energy[static_cast<std::size_t>(v)];
  }
  return r;
}

double siu_slip_residual(double s, double u_gas, double u_liquid, double rho_liquid, double rho_gas,
                         const DfmParams& dfm, double orientation) {
  const double um = u_gas + u_liquid;
  const double sud = drift_term(s, um, rho_liquid, rho_gas, dfm.sigma, dfm).value;
  const double c0 = profile_parameter(s, um, rho_liquid, rho_gas, dfm).value;
  return sud * orientation + s * c0 * um - u_gas;
}

namespace {

constexpr double kWater[] = {1.0};

PropertyBundle water_properties(const FluidModel& fluid, Phase a, double p, double T) {
  return fluid.properties(a, p, T, std::span<const double>(kWater, 1));
}

/// Safeguarded Newton with bisection fallback for h^a(p, T) = target on [lo, hi].
double solve_enthalpy_temperature(const FluidModel& fluid, Phase a, double p, double target, double lo, double hi) {
  auto f = [&](double T) {
    const PropertyValue h = water_properties(fluid, a, p, T).enthalpy;
    return std::pair{h.value - target, h.dT};
  };
  double flo = f(lo).first;
  const double fhi = f(hi).first;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg << to_string(a) << " enthalpy " << target << " J/mol at p = " << p << " Pa has no temperature in [" << lo
        << ", " << hi << "] K";
    throw DomainError(msg.str());
  }
  double T = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto [r, dr] = f(T);
    if (std::abs(r) <= 1e-13 * std::max(1.0, std::abs(target))) return T;
    if ((r > 0.0) == (flo > 0.0)) {
      lo = T;
      flo = r;
    } else {
      hi = T;
    }
    double next = dr != 0.0 ? T - r / dr : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-12 * hi) return next;
    T = next;
  }
  return T;
}

}  // namespace

SiuNodeState siu_node_state(double p, double q_molar, double q_energy, const FluidModel& fluid, const DfmParams& dfm,
                            double section, double orientation, SlipLaw slip) {
  const SaturationLaw* law = fluid.saturation_law();
  if (!law || fluid.components().size() != 1)
    throw ModelAssumptionError("single implicit unknown flash needs a single-component liquid/vapour fluid");
  if (!(q_molar > 0.0)) throw ModelAssumptionError("single implicit unknown flash needs a producing node");
  const double T_sat = law->temperature(p);
  const PropertyBundle lb = water_properties(fluid, Phase::liquid, p, T_sat);
  const PropertyBundle gb = water_properties(fluid, Phase::gas, p, T_sat);
  const double H = q_energy / q_molar;
  const double hl = lb.enthalpy.value;
  const double hg = gb.enthalpy.value;

  SiuNodeState out;
  out.c_liquid = (hg - H) / (hg - hl);
  const ValidityRange& range = fluid.validity();
  if (out.c_liquid >= 1.0) {
    out.phases = PhaseSet::liquid();
    out.T = out.c_liquid == 1.0 ? T_sat
                                : solve_enthalpy_temperature(fluid, Phase::liquid, p, H,
                                                             std::max(range.T_min, law->min_temperature()), T_sat);
    out.s_gas = 0.0;
    out.u_liquid = q_molar / (section * water_properties(fluid, Phase::liquid, p, out.T).molar_density.value);
    return out;
  }
  if (out.c_liquid <= 0.0) {
    out.phases = PhaseSet::gas();
    out.T = out.c_liquid == 0.0 ? T_sat : solve_enthalpy_temperature(fluid, Phase::gas, p, H, T_sat, range.T_max);
    out.s_gas = 1.0;
    out.u_gas = q_molar / (section * water_properties(fluid, Phase::gas, p, out.T).molar_density.value);
    return out;
  }

  out.phases = PhaseSet::both();
  out.T = T_sat;
  out.u_liquid = out.c_liquid * q_molar / (section * lb.molar_density.value);
  out.u_gas = (1.0 - out.c_liquid) * q_molar / (section * gb.molar_density.value);
  if (slip == SlipLaw::none) {
    out.s_gas = out.u_gas / (out.u_gas + out.u_liquid);
    return out;
  }
  const double rl = lb.mass_density.value;
  const double rg = gb.mass_density.value;
  auto r = [&](double s) { return siu_slip_residual(s, out.u_gas, out.u_liquid, rl, rg, dfm, orientation); };
  // Grid scan for sign changes, then bisection on the first bracket.
  constexpr int kGrid = 400;
  double a = 0.0, fa = r(0.0);
  std::optional<std::pair<double, double>> bracket;
  int roots = 0;
  for (int k = 1; k <= kGrid; ++k) {
    const double b = static_cast<double>(k) / kGrid;
    const double fb = r(b);
    if ((fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0)) {
      if (!bracket) bracket = std::pair{a, b};
      ++roots;
      if (fb == 0.0) {
        a = b;
        fa = r(std::min(1.0, b + 0.5 / kGrid));
        continue;
      }
    }
    a = b;
    fa = fb;
  }
  if (!bracket) throw DomainError("slip equation has no gas saturation root in [0, 1]");
  out.multiple_roots = roots > 1;
  double lo = bracket->first, hi = bracket->second;
  double flo = r(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = r(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  out.s_gas = std::abs(r(lo)) <= std::abs(r(hi)) ? lo : hi;
  return out;
}

SiuResult siu_run(const WellModel& model, const std::vector<NodeState>& initial, const SiuOptions& options) {
  const WellMesh& mesh = model.mesh;
  const FluidModel& fluid = *model.fluid;
  if (!fluid.saturation_law() || fluid.components().size() != 1)
    throw ModelAssumptionError("single implicit unknown model needs a single-component liquid/vapour fluid");
  if (mesh.leaves().size() != 1) throw ModelAssumptionError("single implicit unknown model needs a single-branch well");
  if (model.inlet) throw ModelAssumptionError("single implicit unknown model does not support prescribed inlets");
  const auto n = static_cast<std::size_t>(mesh.node_count());
  if (initial.size() != n) throw DomainError("initial state must have one entry per node");
  const int root = mesh.root();
  const double M = fluid.molar_mass(0);
  const double q_max = model.monitor.max_rate;  // mol/s
  const double p_min = model.monitor.min_head_pressure;

  auto mixture_density = [&](PhaseSet q, double p, double T, double sg) {
    double rho = 0.0;
    if (q.contains(Phase::liquid)) rho += (1.0 - sg) * water_properties(fluid, Phase::liquid, p, T).mass_density.value;
    if (q.contains(Phase::gas)) rho += sg * water_properties(fluid, Phase::gas, p, T).mass_density.value;
    return rho;
  };

  SiuResult res;
  res.p.resize(n);
  res.T.resize(n);
  res.s_gas.assign(n, 0.0);
  res.u_gas.assign(n, 0.0);
  res.u_liquid.assign(n, 0.0);
  std::vector<double> node_rho(n);
  for (std::size_t v = 0; v < n; ++v) {
    const NodeState& s = initial[v];
    res.p[v] = s.p;
    res.T[v] = s.T;
    res.s_gas[v] = s.s[index(Phase::gas)];
    node_rho[v] = mixture_density(s.phases, s.p, s.T, res.s_gas[v]);
  }
  res.rho_mean.resize(static_cast<std::size_t>(mesh.edge_count()));
  auto freeze_densities = [&] {
    for (const auto& e : mesh.edges())
      res.rho_mean[static_cast<std::size_t>(e.id)] =
          0.5 * (node_rho[static_cast<std::size_t>(e.parent)] + node_rho[static_cast<std::size_t>(e.child)]);
  };
  freeze_densities();

  // Head pressure offset of every node under the frozen densities.
  std::vector<double> offset(n, 0.0);
  auto build_offsets = [&] {
    const auto& order = mesh.leaf_to_root_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      const auto& pe = mesh.node(v).parent_edge;
      if (!pe) {
        offset[static_cast<std::size_t>(v)] = 0.0;
        continue;
      }
      const auto& e = mesh.edge(*pe);
      offset[static_cast<std::size_t>(v)] = offset[static_cast<std::size_t>(e.parent)] +
                                            res.rho_mean[static_cast<std::size_t>(e.id)] * kGravity *
                                                (mesh.z(e.parent) - mesh.z(e.child));
    }
  };

  // Feed sources without conduction at node pressure p; value and d/dp.
  std::vector<double> src_molar(n), src_energy(n);
  auto feed_sources = [&](double p_head, double* dq_dp) {
    std::fill(src_molar.begin(), src_molar.end(), 0.0);
    std::fill(src_energy.begin(), src_energy.end(), 0.0);
    double d = 0.0;
    for (FeedZone zone : model.feeds) {
      zone.wi_fourier = 0.0;
      const auto v = static_cast<std::size_t>(zone.node);
      NodeState s;
      s.phases = PhaseSet::liquid();
      s.p = p_head + offset[v];
      s.T = res.T[v];
      s.s = {1.0, 0.0};
      s.c[index(Phase::liquid)][0] = 1.0;
      const PrimarySplit split = split_primary_secondary(s, fluid, zone.node);
      const NodeLocal local = make_node_local(s, fluid, split, mesh.node_volume(zone.node));
      const NodeSource q = reservoir_source(zone, local, fluid);
      src_molar[v] += q.molar[0].v;
      src_energy[v] += q.energy.v;
      d += q.molar[0].d[static_cast<std::size_t>(split.index_of(Unknown::pressure))];
    }
    if (dq_dp) *dq_dp = d;
    double total = 0.0;
    for (double x : src_molar) total += x;
    return total;
  };

  double p_head = initial[static_cast<std::size_t>(root)].p;
  Constraint active = model.monitor.initial;
  for (int outer = 1; outer <= options.max_iterations; ++outer) {
    build_offsets();
    // Semi-smooth Newton on min((qmax - q)/qmax, (p - pmin)/pmin).
    for (int it = 0; it < 100; ++it) {
      double dq = 0.0;
      const double q = feed_sources(p_head, &dq);
      const double g_rate = (q_max - q) / q_max;
      const double g_press = (p_head - p_min) / p_min;
      double step;
      if (g_rate <= g_press) {
        active = Constraint::rate;
        if (dq == 0.0) throw NumericalError("single implicit unknown model: rate does not depend on head pressure");
        step = -g_rate / (-dq / q_max);
      } else {
        active = Constraint::pressure;
        step = -g_press * p_min;
      }
      p_head += step;
      if (std::abs(step) <= 1e-12 * std::max(p_head, p_min)) break;
    }
    const double q_total = feed_sources(p_head, nullptr);

    for (const auto& zone : model.feeds)
      if (src_molar[static_cast<std::size_t>(zone.node)] < 0.0)
        throw ModelAssumptionError("cross flow: feed zone at node " + std::to_string(zone.node) +
                                   " receives fluid from the well");
    const CumulativeRates cum = cumulative_rates(mesh, src_molar, src_energy);
    res.q_molar = cum.molar;
    res.q_energy = cum.energy;

    bool warned = false;
    for (std::size_t v = 0; v < n; ++v) {
      res.p[v] = p_head + offset[v];
      const double Q = cum.molar[v];
      if (Q < 0.0) throw ModelAssumptionError("cross flow: negative cumulative rate at node " + std::to_string(v));
      if (Q == 0.0) {
        res.u_gas[v] = res.u_liquid[v] = 0.0;
        node_rho[v] = mixture_density(res.s_gas[v] > 0.0 ? PhaseSet::both() : PhaseSet::liquid(), res.p[v], res.T[v],
                                      res.s_gas[v]);
        continue;
      }
      const auto& pe = mesh.node(static_cast<int>(v)).parent_edge;
      double section = mesh.head_section();
      double orientation = 1.0;
      if (pe) {
        section = mesh.edge(*pe).section;
        orientation = mesh.edge(*pe).orientation;
      } else if (!mesh.incident_edges(root).empty()) {
        orientation = mesh.edge(mesh.incident_edges(root).front()).orientation;
      }
      const SiuNodeState st = siu_node_state(res.p[v], Q, cum.energy[v], fluid, model.dfm, section, orientation,
                                             options.slip);
      res.T[v] = st.T;
      res.s_gas[v] = st.s_gas;
      res.u_gas[v] = st.u_gas;
      res.u_liquid[v] = st.u_liquid;
      node_rho[v] = mixture_density(st.phases, res.p[v], st.T, st.s_gas);
      if (st.multiple_roots && !warned) {
        res.warnings.push_back("iteration " + std::to_string(outer) + ": slip equation has several roots at node " +
                               std::to_string(v) + "; the smallest is used");
        warned = true;
      }
    }
    const std::vector<double> before = res.rho_mean;
    freeze_densities();
    double change = 0.0;
    for (std::size_t a = 0; a < before.size(); ++a)
      change = std::max(change, std::abs(res.rho_mean[a] - before[a]) / std::max(before[a], 1e-300));
    const double p_change = res.head_pressure_history.empty()
                                ? std::numeric_limits<double>::infinity()
                                : std::abs(p_head - res.head_pressure_history.back()) / p_head;
    res.head_pressure_history.push_back(p_head);
    res.iterations = outer;
    res.head_pressure = p_head;
    res.rate_molar = q_total;
    res.rate_mass = q_total * M;
    res.constraint = active;
    if (change <= options.tolerance && p_change <= options.tolerance) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace mswell
