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

#include "mswell/sources.hpp"

#include <cmath>

#include "mswell/errors.hpp"

namespace mswell {

double relative_permeability(double s, double exponent) {
  if (s <= 0.0) return 0.0;
  return std::pow(std::min(s, 1.0), exponent);
}

namespace {

NodeDual relperm(const NodeDual& s, double exponent) {
  if (s.v <= 0.0) return NodeDual(0.0);
  return pow(s, exponent);
}

std::array<double, kMaxComponents> pure_fractions(const FluidModel& fluid, Phase a) {
  std::array<double, kMaxComponents> c{};
  const auto& list = fluid.components().components_of(a);
  if (list.size() != 1) throw Error("feed zones require single-component phases");
  c[static_cast<std::size_t>(list.front())] = 1.0;
  return c;
}

}  // namespace

NodeSource reservoir_molar_source(const FeedZone& zone, const NodeLocal& node, const FluidModel& fluid) {
  const auto& cm = fluid.components();
  NodeSource src;
  for (Phase a : kPhases) {
    const int k = index(a);
    const NodeDual V = zone.wi_darcy * (zone.pressure - node.p);
    NodeDual q_phase(0.0);
    std::array<NodeDual, kMaxComponents> q_comp{};
    if (V.v < 0.0 && node.has(a)) {
      const NodeDual mob = node.zeta[k] / node.mu[k] * relperm(node.s[k], zone.relperm_exponent);
      for (int i : cm.components_of(a)) q_comp[static_cast<std::size_t>(i)] += node.c[k][static_cast<std::size_t>(i)] * mob * V;
    } else if (V.v > 0.0 && zone.saturation[k] > 0.0) {
      const auto cr = pure_fractions(fluid, a);
      const PropertyBundle b = eval_properties(fluid, a, zone.pressure, zone.temperature, cr);
      const double mob = b.molar_density.value / b.viscosity.value * relative_permeability(zone.saturation[k], zone.relperm_exponent);
      for (int i : cm.components_of(a)) q_comp[static_cast<std::size_t>(i)] += cr[static_cast<std::size_t>(i)] * mob * V;
    }
    for (int i : cm.components_of(a)) {
      src.molar[static_cast<std::size_t>(i)] += q_comp[static_cast<std::size_t>(i)];
      q_phase += q_comp[static_cast<std::size_t>(i)];
    }
    src.phase_molar[k] = q_phase;
  }
  return src;
}

void reservoir_energy_source(const FeedZone& zone, const NodeLocal& node, const FluidModel& fluid, NodeSource& src) {
  NodeDual e(0.0);
  for (Phase a : kPhases) {
    const int k = index(a);
    const NodeDual& q = src.phase_molar[k];
    if (q.v < 0.0) {
      e += node.h[k] * q;
    } else if (q.v > 0.0) {
      const PropertyBundle b = eval_properties(fluid, a, zone.pressure, zone.temperature, pure_fractions(fluid, a));
      e += b.enthalpy.value * q;
    }
  }
  e += zone.wi_fourier * (zone.temperature - node.T);
  src.energy = e;
}

NodeSource reservoir_source(const FeedZone& zone, const NodeLocal& node, const FluidModel& fluid) {
  NodeSource src = reservoir_molar_source(zone, node, fluid);
  reservoir_energy_source(zone, node, fluid, src);
  return src;
}

NodeSource inlet_source(const InletBoundary& inlet, const NodeLocal& node, const FluidModel& fluid) {
  const auto& cm = fluid.components();
  NodeSource src;
  for (Phase a : kPhases) {
    const int k = index(a);
    const double u = inlet.velocity[k];
    if (u == 0.0) continue;
    NodeDual zeta, h;
    std::array<double, kMaxComponents> c{};
    if (u > 0.0) {
      c = pure_fractions(fluid, a);
      const PropertyBundle b = eval_properties(fluid, a, node.p.v, inlet.temperature, c);
      zeta = chain(node.p, b.molar_density.value, b.molar_density.dp);
      h = chain(node.p, b.enthalpy.value, b.enthalpy.dp);
    } else {
      if (!node.has(a))
        throw NumericalError(std::string("inlet withdraws the ") + to_string(a) + " phase from a node where it is absent");
      zeta = node.zeta[k];
      h = node.h[k];
      c = node.c[k];
    }
    const NodeDual q = inlet.section * zeta * u;
    for (int i : cm.components_of(a)) src.molar[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(i)] * q;
    src.phase_molar[k] = q;
    src.energy += h * q;
  }
  return src;
}

}  // namespace mswell
