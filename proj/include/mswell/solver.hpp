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

#ifndef MSWELL_SOLVER_HPP
#define MSWELL_SOLVER_HPP

#include <functional>
#include <string>
#include <vector>

#include "mswell/assembly.hpp"

namespace mswell {

struct TimeStepConfig {
  double initial_dt = 1.0;  // s
  double max_dt = 100.0;    // s
  double growth = 1.1;
  double final_time = 1.0;  // s
  int max_newton = 50;
  double min_dt = 1.0e-6;   // s
  bool operator==(const TimeStepConfig&) const = default;
};

struct SolverConfig {
  double residual_tolerance = 1.0e-8;
  double increment_tolerance = 1.0e-10;
  double weight_saturation = 1.0;
  double weight_pressure = 1.0e-5;
  double weight_temperature = 1.0e-2;
  // Newton updates are scaled down uniformly so that no saturation moves by
  // more than max_saturation_change and no pressure by more than
  // max_pressure_change times its value.
  double max_saturation_change = 0.2;
  double max_pressure_change = 1.0;
  // Seed saturation below which absent-component moles do not make their
  // phase appear.
  double appearance_saturation = 1.0e-6;
  // An update that increases the relative residual (without a phase or
  // constraint switch) is retried at half length, up to max_backtracks
  // times in a row, from iteration backtrack_after on.
  int backtrack_after = 1;
  int max_backtracks = 4;
  bool operator==(const SolverConfig&) const = default;
};

/// Outcome of one Newton solve of a time step.
struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  bool phase_appeared = false;     // some node gained a phase during the solve
  int phase_changes = 0;
  std::vector<std::string> active_set_log;
  std::string failure;
  Constraint constraint = Constraint::pressure;
  SystemEvaluation evaluation;     // at the converged iterate
};

/// One accepted time step.
struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  int iterations = 0;
  int restarts = 0;               // failed attempts before acceptance
  bool phase_appeared = false;    // in the accepted solve or in a failed attempt
  double rate_mass = 0.0;         // head outflow, kg/s
  double rate_molar = 0.0;        // mol/s
  double head_pressure = 0.0;     // Pa
  std::vector<double> leaf_pressures;
  double gas_volume = 0.0;        // m3
  Constraint constraint = Constraint::pressure;
  std::vector<double> balance_relative;  // per component, then energy
};

struct NewtonReport {
  int steps = 0;
  int failures = 0;
  int iterations = 0;
  std::vector<std::string> active_set_log;
  std::vector<Constraint> regime_history;
};

struct TransientResult {
  std::vector<StepRecord> history;
  std::vector<NodeState> final_state;
  std::vector<int> leaves;
  NewtonReport report;
  Constraint constraint = Constraint::pressure;
  double time = 0.0;
  bool completed = false;
  std::string failure;
};

/// du^alpha_a / dX^p at the parent and child of one edge.
struct HydroCoefficients {
  std::array<std::array<double, kMaxPrimary>, kNumPhases> parent{};
  std::array<std::array<double, kMaxPrimary>, kNumPhases> child{};
  std::array<double, kNumPhases> velocity{};
};

HydroCoefficients eliminate_hydrodynamics(const WellModel& model, int edge, const std::vector<NodeState>& states);

/// Head-node rate and velocities for the given constraint.
struct MonitoringElimination {
  double q = 0.0;  // mol/s
  double um = 0.0;
  std::array<double, kNumPhases> u{};
};

MonitoringElimination eliminate_monitoring(const WellModel& model, const std::vector<NodeState>& states,
                                           const std::vector<Accumulation>& previous, Constraint active, double dt);

std::vector<Accumulation> accumulations(const WellModel& model, const std::vector<NodeState>& states);

/// Relative l1 residual per conserved quantity (components then energy),
/// skipping the head-pressure row.
std::vector<double> residual_norms(const SystemEvaluation& ev, int components, bool thermal);

/// Solve one implicit step in place. states holds the previous step on entry
/// and the new state on success; constraint is updated likewise.
NewtonOutcome newton_solve_timestep(const WellModel& model, std::vector<NodeState>& states, Constraint& constraint,
                                    double dt, const TimeStepConfig& steps, const SolverConfig& config);

double gas_volume(const WellModel& model, const std::vector<NodeState>& states);

/// Mass rate in kg/s of a head outflow.
double head_mass_rate(const WellModel& model, const HeadFlow& head);

using StepCallback = std::function<void(const StepRecord&, const std::vector<NodeState>&, const SystemEvaluation&)>;

/// Time loop with the adaptive step controller. Throws SolverFailure on
/// step underflow unless keep_partial is set, in which case the partial
/// result is returned with completed = false.
TransientResult run_transient(const WellModel& model, std::vector<NodeState> initial, const TimeStepConfig& steps,
                              const SolverConfig& config, const StepCallback& on_step = {},
                              bool keep_partial = false);

}  // namespace mswell

#endif  // MSWELL_SOLVER_HPP
