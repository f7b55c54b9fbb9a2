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

#ifndef MSWELL_FLUID_HPP
#define MSWELL_FLUID_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mswell {

inline constexpr double kGravity = 9.81;
inline constexpr double kGasConstant = 8.314462618;

enum class Phase : int { liquid = 0, gas = 1 };
inline constexpr int kNumPhases = 2;
inline constexpr std::array<Phase, kNumPhases> kPhases{Phase::liquid, Phase::gas};
inline constexpr int index(Phase a) { return static_cast<int>(a); }
inline constexpr Phase other(Phase a) { return a == Phase::liquid ? Phase::gas : Phase::liquid; }
const char* to_string(Phase a);

/// Subset of {liquid, gas}.
class PhaseSet {
 public:
  constexpr PhaseSet() = default;
  static constexpr PhaseSet liquid() { return PhaseSet(1); }
  static constexpr PhaseSet gas() { return PhaseSet(2); }
  static constexpr PhaseSet both() { return PhaseSet(3); }
  static constexpr PhaseSet of(Phase a) { return PhaseSet(static_cast<std::uint8_t>(1u << index(a))); }

  constexpr bool contains(Phase a) const { return (bits_ >> index(a)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_both() const { return bits_ == 3; }
  constexpr int size() const { return (bits_ & 1u) + ((bits_ >> 1) & 1u); }
  constexpr PhaseSet with(Phase a) const { return PhaseSet(bits_ | of(a).bits_); }
  constexpr PhaseSet without(Phase a) const { return PhaseSet(bits_ & ~of(a).bits_); }
  constexpr PhaseSet operator|(PhaseSet o) const { return PhaseSet(bits_ | o.bits_); }
  constexpr std::uint8_t bits() const { return bits_; }
  /// The only phase of a singleton set.
  Phase single() const;
  constexpr bool operator==(const PhaseSet&) const = default;

 private:
  constexpr explicit PhaseSet(std::uint8_t b) : bits_(b) {}
  std::uint8_t bits_ = 0;
};

std::string to_string(PhaseSet q);

inline constexpr int kMaxComponents = 2;

/// Component list and the phase membership of each component.
class ComponentModel {
 public:
  ComponentModel(std::vector<std::string> names, std::array<std::vector<int>, kNumPhases> phase_components);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& components_of(Phase a) const { return phase_components_[index(a)]; }
  bool in_phase(int i, Phase a) const;
  /// Phases containing component i.
  PhaseSet phases_of(int i) const;
  /// Components absent from every phase of q.
  std::vector<int> absent_components(PhaseSet q) const;

 private:
  std::vector<std::string> names_;
  std::array<std::vector<int>, kNumPhases> phase_components_;
};

/// A property value with its partial derivatives.
struct PropertyValue {
  double value = 0.0;
  double dp = 0.0;
  double dT = 0.0;
  std::array<double, kMaxComponents> dc{};
};

/// Molar density (mol/m3), mass density (kg/m3), viscosity (Pa.s),
/// molar internal energy and molar enthalpy (J/mol).
struct PropertyBundle {
  PropertyValue molar_density;
  PropertyValue mass_density;
  PropertyValue viscosity;
  PropertyValue internal_energy;
  PropertyValue enthalpy;
};

enum class SaturationLawKind { quartic, clausius_clapeyron, table };

/// Vapour pressure law p_sat(T) and its inverse.
class SaturationLaw {
 public:
  /// p_sat = 1e-3 (T - 273)^4.
  static SaturationLaw quartic();
  /// p_sat = 100 exp(46.784 - 6435/T - 3.868 log(T)); log_base is e or 10.
  static SaturationLaw clausius_clapeyron(double log_base = 0.0);
  /// Piecewise log-linear interpolation through (T, p) points; T and p strictly increasing.
  static SaturationLaw table(std::vector<double> temperatures, std::vector<double> pressures);

  SaturationLawKind kind() const { return kind_; }
  double log_base() const { return log_base_; }
  const std::vector<double>& table_temperatures() const { return table_T_; }
  const std::vector<double>& table_pressures() const { return table_p_; }
  double min_temperature() const { return T_min_; }
  double max_temperature() const { return T_max_; }

  double pressure(double T) const;
  double dpressure_dT(double T) const;
  double temperature(double p) const;

 private:
  SaturationLaw(SaturationLawKind k, double T_min, double T_max) : kind_(k), T_min_(T_min), T_max_(T_max) {}
  void check_temperature(double T) const;

  SaturationLawKind kind_;
  double T_min_;
  double T_max_;
  double log_base_ = 0.0;  // 0 selects the natural logarithm
  std::vector<double> table_T_;
  std::vector<double> table_p_;
};

struct ValidityRange {
  double p_min = 1.0;
  double p_max = 1.0e9;
  double T_min = 273.16;
  double T_max = 800.0;
};

/// Thermodynamic model: phase properties, component layout and, for
/// single-component liquid/vapour systems, the saturation law.
class FluidModel {
 public:
  virtual ~FluidModel() = default;

  virtual const ComponentModel& components() const = 0;
  virtual PropertyBundle properties(Phase a, double p, double T, std::span<const double> c) const = 0;
  virtual double molar_mass(int component) const = 0;
  virtual double thermal_conductivity(Phase a) const = 0;
  /// Saturation law when the liquid and gas phases share a component at
  /// equilibrium; nullptr for immiscible systems.
  virtual const SaturationLaw* saturation_law() const = 0;
  virtual bool isothermal() const = 0;
  virtual const ValidityRange& validity() const = 0;

  /// Number of primary unknowns (= conservation equations) per node.
  int primary_count() const { return components().size() + (isothermal() ? 0 : 1); }
  /// Throws DomainError naming the violated bound.
  void check_state(double p, double T) const;
};

struct WaterFluidParams {
  SaturationLaw saturation = SaturationLaw::quartic();
  double molar_mass = 0.018;
  std::array<double, kNumPhases> conductivity{2.0, 2.0};
  ValidityRange range{};
};

/// Single-component H2O liquid/vapour with the default analytic correlations:
///   liquid: rho = 1000 (1 - 3e-4 (T-293)) (1 + 4.5e-10 (p-1e5)), h = 4180 (T-273) J/kg,
///           mu = 2.414e-5 10^(247.8/(T-140))
///   gas:    ideal gas, h = 2.5e6 + 1900 (T-273) J/kg, mu = 1.2e-5
class WaterFluid final : public FluidModel {
 public:
  explicit WaterFluid(WaterFluidParams params = {});

  const ComponentModel& components() const override { return components_; }
  PropertyBundle properties(Phase a, double p, double T, std::span<const double> c) const override;
  double molar_mass(int) const override { return params_.molar_mass; }
  double thermal_conductivity(Phase a) const override { return params_.conductivity[index(a)]; }
  const SaturationLaw* saturation_law() const override { return &params_.saturation; }
  bool isothermal() const override { return false; }
  const ValidityRange& validity() const override { return params_.range; }
  const WaterFluidParams& params() const { return params_; }

 private:
  WaterFluidParams params_;
  ComponentModel components_;
};

struct ImmiscibleFluidParams {
  std::array<double, kNumPhases> mass_density{1000.0, 4.0};
  std::array<double, kNumPhases> viscosity{1.0e-3, 1.0e-5};
  std::array<double, kNumPhases> molar_mass{0.018, 0.018};
  std::array<double, kNumPhases> heat_capacity{4180.0, 1900.0};  // J/kg/K, thermal mode only
  std::array<double, kNumPhases> conductivity{0.0, 0.0};
  bool isothermal = true;
  double temperature = 293.15;  // fixed temperature in isothermal mode
  ValidityRange range{};
};

/// Two components, one per phase (component 0 in the liquid, component 1 in
/// the gas), with constant densities and viscosities.
class ImmiscibleFluid final : public FluidModel {
 public:
  explicit ImmiscibleFluid(ImmiscibleFluidParams params = {});

  const ComponentModel& components() const override { return components_; }
  PropertyBundle properties(Phase a, double p, double T, std::span<const double> c) const override;
  double molar_mass(int component) const override;
  double thermal_conductivity(Phase a) const override { return params_.conductivity[index(a)]; }
  const SaturationLaw* saturation_law() const override { return nullptr; }
  bool isothermal() const override { return params_.isothermal; }
  const ValidityRange& validity() const override { return params_.range; }
  const ImmiscibleFluidParams& params() const { return params_; }

 private:
  ImmiscibleFluidParams params_;
  ComponentModel components_;
};

/// Node unknowns of the natural-variable formulation: present phases,
/// pressure, temperature, saturations, phase molar fractions and mole
/// counts of components absent from every present phase.
struct NodeState {
  PhaseSet phases = PhaseSet::liquid();
  double p = 1.0e5;
  double T = 293.15;
  std::array<double, kNumPhases> s{1.0, 0.0};
  std::array<std::array<double, kMaxComponents>, kNumPhases> c{};
  std::array<double, kMaxComponents> absent_moles{};

  double saturation(Phase a) const { return s[index(a)]; }
  std::span<const double> fractions(Phase a) const { return c[index(a)]; }
};

/// Fill phase molar fractions with the unique normalized composition of
/// each phase (valid when every phase holds a single component).
void set_pure_phase_fractions(NodeState& state, const FluidModel& fluid);

/// Evaluate all phase properties with analytic derivatives.
PropertyBundle eval_properties(const FluidModel& fluid, Phase a, double p, double T, std::span<const double> c);

double saturation_pressure(const FluidModel& fluid, double T);
double saturation_temperature(const FluidModel& fluid, double p);

enum class ClosureRow { equilibrium, fraction_sum, saturation_sum, absent_saturation };

struct ClosureResidual {
  std::vector<double> values;
  std::vector<ClosureRow> kinds;
};

/// Thermodynamic closure residuals at one node: equilibrium rows for
/// components present in both phases, fraction normalization per present
/// phase, saturation sum, and zero saturation of absent phases.
ClosureResidual closure_residual(const NodeState& state, const FluidModel& fluid);

/// Update the present-phase set after a Newton update. Returns the new set
/// and rewrites saturations/absent-component counts accordingly. node_volume
/// converts absent-component moles into a seed saturation when a phase
/// appears; with node_volume = 0 the seed is zero. With a positive
/// node_volume, absent-component moles make their phase appear only once the
/// seed saturation exceeds appearance_saturation; below it they stay in the
/// absent-component unknowns.
PhaseSet flash_update(NodeState& state, const FluidModel& fluid, double node_volume = 0.0,
                      double appearance_saturation = 0.0);

std::unique_ptr<FluidModel> clone(const FluidModel& fluid);

}  // namespace mswell

#endif  // MSWELL_FLUID_HPP
