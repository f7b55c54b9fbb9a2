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

#ifndef MSWELL_PRIMARY_HPP
#define MSWELL_PRIMARY_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mswell/dual.hpp"
#include "mswell/fluid.hpp"

namespace mswell {

inline constexpr int kMaxPrimary = kMaxComponents + 1;
using NodeDual = Dual<kMaxPrimary>;

/// Entries of the natural-variable vector X_v.
enum class Unknown { pressure, temperature, gas_saturation, liquid_saturation, fraction, absent_moles };

struct UnknownRef {
  Unknown kind = Unknown::pressure;
  Phase phase = Phase::liquid;  // fraction: phase of c^alpha_i
  int component = -1;           // fraction / absent_moles
  bool operator==(const UnknownRef&) const = default;
};

std::string to_string(const UnknownRef& x);

/// Result of the primary/secondary splitting at one node: #C+1 primaries
/// (#C when isothermal), the remaining secondaries, and the linearized
/// closure elimination dX^s = sensitivity dX^p.
struct PrimarySplit {
  PhaseSet phases;
  std::vector<UnknownRef> primary;
  std::vector<UnknownRef> secondary;
  Eigen::MatrixXd closure_secondary;  // dC/dX^s
  Eigen::MatrixXd closure_primary;    // dC/dX^p
  Eigen::MatrixXd sensitivity;        // -(dC/dX^s)^{-1} dC/dX^p

  int count() const { return static_cast<int>(primary.size()); }
  int index_of(Unknown kind) const;
};

/// Choose primaries for the present-phase set, linearize the closure laws and
/// eliminate the secondaries. Throws NumericalError if dC/dX^s is singular.
PrimarySplit split_primary_secondary(const NodeState& state, const FluidModel& fluid, int node_id = -1);

/// Value of primary k at a state.
double primary_value(const NodeState& state, const UnknownRef& x);

/// Apply a Newton increment to the primaries and back-substitute the
/// secondaries through the closure laws (exactly, not only to first order).
void apply_increment(NodeState& state, const FluidModel& fluid, const PrimarySplit& split, const double* dx);

/// Node variables with derivatives with respect to the node primaries.
struct NodeLocal {
  PhaseSet phases;
  int primary_count = 0;
  double volume = 0.0;
  NodeDual p, T;
  std::array<NodeDual, kNumPhases> s;
  std::array<NodeDual, kNumPhases> zeta, rho, mu, h, e;  // defined for present phases only
  std::array<std::array<double, kMaxComponents>, kNumPhases> c{};
  std::array<NodeDual, kMaxComponents> moles;  // n_{v,i}
  NodeDual energy;                             // n_{v,e}

  bool has(Phase a) const { return phases.contains(a); }
  NodeDual mixture_density() const;
  NodeDual mixture_viscosity() const;
};

/// Evaluate properties and accumulations at a node with exact derivatives.
NodeLocal make_node_local(const NodeState& state, const FluidModel& fluid, const PrimarySplit& split, double volume);

/// Accumulation values only (no derivatives).
struct Accumulation {
  std::array<double, kMaxComponents> moles{};
  double energy = 0.0;
};
Accumulation accumulation(const NodeState& state, const FluidModel& fluid, double volume);

}  // namespace mswell

#endif  // MSWELL_PRIMARY_HPP
