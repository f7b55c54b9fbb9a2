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

#ifndef MSWELL_SOURCES_HPP
#define MSWELL_SOURCES_HPP

#include <array>

#include "mswell/fluid.hpp"
#include "mswell/primary.hpp"

namespace mswell {

/// Fixed reservoir state exchanging fluid and heat with one well node.
struct FeedZone {
  int node = 0;
  double pressure = 1.0e5;     // reservoir pressure, shared by both phases
  double temperature = 293.15;
  std::array<double, kNumPhases> saturation{1.0, 0.0};
  double wi_darcy = 0.0;       // m
  double wi_fourier = 0.0;     // W/K
  double relperm_exponent = 2.0;  // k_r(s) = s^n
};

/// Prescribed phase superficial velocities entering a leaf node from below
/// (positive into the well). Inflowing phases carry the external state,
/// outflowing phases the node state.
struct InletBoundary {
  int node = 0;
  double section = 0.0;
  std::array<double, kNumPhases> velocity{0.0, 0.0};
  double temperature = 293.15;
};

/// Source terms q^{r->w} at one node with derivatives w.r.t. the node primaries.
struct NodeSource {
  std::array<NodeDual, kMaxComponents> molar;
  std::array<NodeDual, kNumPhases> phase_molar;  // q_{v,alpha} summed over components
  NodeDual energy;
};

double relative_permeability(double s, double exponent);

NodeSource reservoir_molar_source(const FeedZone& zone, const NodeLocal& node, const FluidModel& fluid);
/// Adds the enthalpy and Fourier terms; src must hold the molar part.
void reservoir_energy_source(const FeedZone& zone, const NodeLocal& node, const FluidModel& fluid, NodeSource& src);
NodeSource reservoir_source(const FeedZone& zone, const NodeLocal& node, const FluidModel& fluid);

NodeSource inlet_source(const InletBoundary& inlet, const NodeLocal& node, const FluidModel& fluid);

}  // namespace mswell

#endif  // MSWELL_SOURCES_HPP
