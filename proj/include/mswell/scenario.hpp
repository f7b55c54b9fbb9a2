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

#ifndef MSWELL_SCENARIO_HPP
#define MSWELL_SCENARIO_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mswell/solver.hpp"

namespace mswell {

struct BranchConfig {
  std::string name;
  Point3 from{};
  Point3 to{};
  int segments = 1;
  std::optional<double> radius;
  bool operator==(const BranchConfig&) const = default;
};

struct WellConfig {
  Point3 root{};
  double radius = 0.05;
  std::vector<BranchConfig> branches;
  bool operator==(const WellConfig&) const = default;
};

struct FluidConfig {
  std::string model = "water";  // water | immiscible
  // water
  std::string saturation_law = "quartic";  // quartic | clausius_clapeyron | table
  double log_base = 0.0;                   // 0 selects the natural logarithm
  std::vector<double> table_temperatures, table_pressures;
  double molar_mass = 0.018;
  // immiscible
  std::array<double, kNumPhases> density{1000.0, 4.0};
  std::array<double, kNumPhases> viscosity{1.0e-3, 1.0e-5};
  std::array<double, kNumPhases> phase_molar_mass{0.018, 0.018};
  std::array<double, kNumPhases> heat_capacity{4180.0, 1900.0};
  bool isothermal = true;
  double temperature = 293.15;
  // both
  std::array<double, kNumPhases> conductivity{2.0, 2.0};
  bool operator==(const FluidConfig&) const = default;
};

/// A node chosen by branch name and arc length from the branch start; the
/// far end of the branch when the arc length is omitted.
struct NodeSelector {
  std::string branch;
  std::optional<double> arc_length;
  bool operator==(const NodeSelector&) const = default;
};

struct FeedZoneConfig {
  NodeSelector node;
  double pressure = 0.0;
  double temperature = 0.0;
  double gas_saturation = 0.0;
  double wi_darcy = 0.0;
  double wi_fourier = 0.0;
  double relperm_exponent = 2.0;
  bool operator==(const FeedZoneConfig&) const = default;
};

struct InletConfig {
  NodeSelector node;
  double gas_velocity = 0.0;     // positive into the well
  double liquid_velocity = 0.0;
  double temperature = 293.15;
  bool operator==(const InletConfig&) const = default;
};

struct MonitorConfig {
  double min_head_pressure = 1.0e5;
  double max_mass_rate = 0.0;  // kg/s
  Constraint initial = Constraint::pressure;
  bool operator==(const MonitorConfig&) const = default;
};

struct InitialConfig {
  double temperature = 293.15;
  double head_pressure = 1.0e5;
  std::string phase = "liquid";  // liquid | gas
  bool operator==(const InitialConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "output";
  std::vector<double> profile_times;
  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  std::string name;
  WellConfig well;
  FluidConfig fluid;
  DfmParams dfm;
  FrictionParams friction;
  std::vector<FeedZoneConfig> feeds;
  std::optional<InletConfig> inlet;
  MonitorConfig monitor;
  InitialConfig initial;
  TimeStepConfig time;
  SolverConfig solver;
  OutputConfig output;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parse and validate a scenario. Throws ConfigError with every problem found.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

/// Canonical text form (SI units, round-trip precision).
std::string serialize_scenario(const ScenarioConfig& config);

std::shared_ptr<FluidModel> make_fluid(const FluidConfig& config);
int select_node(const WellMesh& mesh, const NodeSelector& selector);

/// Liquid (or gas) column at uniform temperature in discrete hydrostatic
/// equilibrium with the given head pressure.
std::vector<NodeState> hydrostatic_state(const WellMesh& mesh, const FluidModel& fluid, double temperature,
                                         double head_pressure, Phase phase);

struct Scenario {
  ScenarioConfig config;
  WellModel model;
  std::vector<NodeState> initial;
};

Scenario build_scenario(const ScenarioConfig& config);

/// Streams histories per accepted step and writes profile snapshots, the
/// final edge table and a JSON run summary.
class OutputWriter {
 public:
  OutputWriter(const Scenario& scenario, std::string directory);

  void on_step(const StepRecord& step, const std::vector<NodeState>& states, const SystemEvaluation& ev);
  void finish(const TransientResult& result);

  static std::string history_header(const std::vector<int>& leaves);

 private:
  void write_profile(const std::string& path, const std::vector<NodeState>& states) const;
  void write_edges(const std::string& path, const SystemEvaluation& ev) const;

  const Scenario& scenario_;
  std::string dir_;
  std::ofstream history_;
  std::size_t next_profile_ = 0;
  std::vector<NodeState> last_states_;
  SystemEvaluation last_eval_;
};

/// Summary object as JSON text.
std::string run_summary_json(const Scenario& scenario, const TransientResult& result);

std::string format_double(double x);

}  // namespace mswell

#endif  // MSWELL_SCENARIO_HPP
