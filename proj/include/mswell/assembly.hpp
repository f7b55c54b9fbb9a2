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

#ifndef MSWELL_ASSEMBLY_HPP
#define MSWELL_ASSEMBLY_HPP

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "mswell/dfm.hpp"
#include "mswell/fluid.hpp"
#include "mswell/primary.hpp"
#include "mswell/sources.hpp"
#include "mswell/well_graph.hpp"

namespace mswell {

/// Derivative slots of edge quantities: parent primaries, child primaries,
/// then the head-node molar rate.
inline constexpr int kEdgeSlots = 2 * kMaxPrimary + 1;
inline constexpr int kParentOffset = 0;
inline constexpr int kChildOffset = kMaxPrimary;
inline constexpr int kRateSlot = 2 * kMaxPrimary;
using EdgeDual = Dual<kEdgeSlots>;

inline constexpr double kAverageEpsilon = 1e-8;

enum class Constraint { pressure, rate };
const char* to_string(Constraint c);

/// Head-node monitoring: minimum pressure and maximum molar rate.
struct MonitorSpec {
  double min_head_pressure = 1.0e5;  // Pa
  double max_rate = 0.0;             // mol/s
  Constraint initial = Constraint::pressure;
};

/// Everything that defines the well problem apart from its state.
struct WellModel {
  WellMesh mesh;
  std::shared_ptr<const FluidModel> fluid;
  DfmParams dfm;
  FrictionParams friction;
  std::vector<FeedZone> feeds;
  std::optional<InletBoundary> inlet;
  MonitorSpec monitor;
};

/// xi at v' when u >= 0, else xi at v.
template <class S>
S upwind_phase_quantity(const S& at_parent, const S& at_child, double u) {
  return u >= 0.0 ? at_child : at_parent;
}

/// Edge average of a phase property for the slip law: one-sided when the
/// phase is present on one side only, saturation weighted otherwise.
template <class S>
S edge_phase_average(bool in_parent, bool in_child, const S& x_parent, const S& x_child, const S& s_parent,
                     const S& s_child, double eps = kAverageEpsilon) {
  if (in_parent && !in_child) return x_parent;
  if (!in_parent && in_child) return x_child;
  const S w = s_parent + s_child;
  if (value_of(w) > eps) return (s_parent * x_parent + s_child * x_child) / w;
  return 0.5 * (x_parent + x_child);
}

/// Fluxes across one edge, positive from the child towards the parent.
struct EdgeFlow {
  EdgeDual dphi, rho_m, mu_m, um;
  std::array<EdgeDual, kNumPhases> u;                 // superficial velocities
  std::array<EdgeDual, kMaxComponents> molar_flux;    // |S| sum_alpha c zeta u
  EdgeDual energy_flux;                               // |S| sum_alpha h zeta u
  EdgeDual conduction;                                // |S| lambda / |a| (T_v - T_v'), v the parent
  std::array<double, kNumPhases> rho_avg{};           // slip-law averages (two-phase edges)
};

EdgeFlow evaluate_edge(const WellEdge& edge, double z_parent, double z_child, const NodeLocal& parent,
                       const NodeLocal& child, const FluidModel& fluid, const DfmParams& dfm,
                       const FrictionParams& friction);

/// p_v - p_v' + rho_m g (z_v - z_v') - T^f |a| for a given mixture velocity.
double momentum_residual(const WellEdge& edge, double p_parent, double p_child, double z_parent, double z_child,
                         double rho_m, double mu_m, double um, double fq);

/// Head-node outflow given the total molar rate q (slot kRateSlot).
struct HeadFlow {
  EdgeDual um;
  std::array<EdgeDual, kNumPhases> u;
  std::array<EdgeDual, kMaxComponents> molar;
  EdgeDual energy;
};

HeadFlow head_outflow(const NodeLocal& root, const EdgeDual& q, double section, double orientation,
                      const FluidModel& fluid, const DfmParams& dfm);

enum class RowKind { component, energy, head_pressure };

/// Residual rows, reduced Jacobian and the eliminated quantities of one
/// Newton iterate.
struct SystemEvaluation {
  int unknowns_per_node = 0;
  Eigen::VectorXd residual;
  Eigen::SparseMatrix<double> jacobian;
  std::vector<RowKind> row_kind;
  std::vector<int> row_component;  // component index of component rows, else -1
  std::vector<PrimarySplit> splits;
  std::vector<EdgeFlow> edges;
  HeadFlow head;
  double q_head = 0.0;             // mol/s
  std::vector<NodeSource> sources; // per node (zero where no feed)
  std::vector<Accumulation> accumulations;
  // Global balance terms per conserved quantity (components then energy).
  std::vector<double> balance_accumulation, balance_sources, balance_outflow;
  // Largest term of each balance: max of sum_v |accumulation rate|, sum_v |source|, |outflow|.
  std::vector<double> balance_scale;
};

SystemEvaluation assemble_system(const WellModel& model, const std::vector<NodeState>& states,
                                 const std::vector<Accumulation>& previous, Constraint active, double dt,
                                 bool with_jacobian = true);

}  // namespace mswell

#endif  // MSWELL_ASSEMBLY_HPP
