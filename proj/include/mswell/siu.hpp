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

#ifndef MSWELL_SIU_HPP
#define MSWELL_SIU_HPP

#include <string>
#include <vector>

#include "mswell/assembly.hpp"

namespace mswell {

/// Subtree sums of the node molar and energy sources.
struct CumulativeRates {
  std::vector<double> molar;   // mol/s
  std::vector<double> energy;  // W
};

CumulativeRates cumulative_rates(const WellMesh& mesh, const std::vector<double>& molar,
                                 const std::vector<double>& energy);

enum class SlipLaw { none, dfm };

/// Flash of a producing node from its cumulative rates.
struct SiuNodeState {
  PhaseSet phases = PhaseSet::liquid();
  double T = 0.0;
  double s_gas = 0.0;
  double u_gas = 0.0;
  double u_liquid = 0.0;
  double c_liquid = 1.0;
  bool multiple_roots = false;
};

/// s U_d(s) o + s C0(s) (u^g + u^l) - u^g at phase densities rho.
double siu_slip_residual(double s, double u_gas, double u_liquid, double rho_liquid, double rho_gas,
                         const DfmParams& dfm, double orientation);

SiuNodeState siu_node_state(double p, double q_molar, double q_energy, const FluidModel& fluid, const DfmParams& dfm,
                            double section, double orientation = 1.0, SlipLaw slip = SlipLaw::dfm);

struct SiuOptions {
  SlipLaw slip = SlipLaw::dfm;
  int max_iterations = 500;
  double tolerance = 1.0e-12;  // relative change of the frozen densities and head pressure
};

struct SiuResult {
  bool converged = false;
  int iterations = 0;
  Constraint constraint = Constraint::pressure;
  double head_pressure = 0.0;  // Pa
  double rate_molar = 0.0;     // mol/s
  double rate_mass = 0.0;      // kg/s
  std::vector<double> p, T, s_gas, u_gas, u_liquid;  // per node
  std::vector<double> q_molar, q_energy;             // cumulative, per node
  std::vector<double> rho_mean;                      // per edge, frozen for the next iteration
  std::vector<double> head_pressure_history;
  std::vector<std::string> warnings;
};

/// Steady state of the single-implicit-unknown model: frozen mean densities,
/// frictionless hydrostatic pressures from the head pressure, inflow-only
/// feeds without conduction, and the monitoring complementarity solved by a
/// scalar semi-smooth Newton method. Requires a single-branch water well.
SiuResult siu_run(const WellModel& model, const std::vector<NodeState>& initial, const SiuOptions& options = {});

}  // namespace mswell

#endif  // MSWELL_SIU_HPP
