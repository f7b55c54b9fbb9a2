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

#include "mswell/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mswell/errors.hpp"

namespace mswell {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(Phase a) { return a == Phase::liquid ? "liquid" : "gas"; }

Phase PhaseSet::single() const {
  if (bits_ == 1) return Phase::liquid;
  if (bits_ == 2) return Phase::gas;
  throw Error("PhaseSet::single() called on a set of size " + std::to_string(size()));
}

std::string to_string(PhaseSet q) {
  if (q.is_both()) return "liquid+gas";
  if (q.contains(Phase::liquid)) return "liquid";
  if (q.contains(Phase::gas)) return "gas";
  return "none";
}

// ---------------------------------------------------------------------------
// ComponentModel
// ---------------------------------------------------------------------------

ComponentModel::ComponentModel(std::vector<std::string> names,
                               std::array<std::vector<int>, kNumPhases> phase_components)
    : names_(std::move(names)), phase_components_(std::move(phase_components)) {
  if (names_.empty() || size() > kMaxComponents)
    throw Error("component count must be in [1, " + std::to_string(kMaxComponents) + "]");
  for (int i = 0; i < size(); ++i) {
    if (phases_of(i).empty()) throw Error("component '" + names_[static_cast<std::size_t>(i)] + "' belongs to no phase");
  }
}

bool ComponentModel::in_phase(int i, Phase a) const {
  const auto& list = phase_components_[index(a)];
  return std::find(list.begin(), list.end(), i) != list.end();
}

PhaseSet ComponentModel::phases_of(int i) const {
  PhaseSet q;
  for (Phase a : kPhases)
    if (in_phase(i, a)) q = q.with(a);
  return q;
}

std::vector<int> ComponentModel::absent_components(PhaseSet q) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    bool present = false;
    for (Phase a : kPhases) present = present || (q.contains(a) && in_phase(i, a));
    if (!present) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SaturationLaw
// ---------------------------------------------------------------------------

SaturationLaw SaturationLaw::quartic() { return SaturationLaw(SaturationLawKind::quartic, 273.0, 1000.0); }

SaturationLaw SaturationLaw::clausius_clapeyron(double log_base) {
  if (log_base != 0.0 && log_base != 10.0) throw Error("Clausius-Clapeyron log base must be e or 10");
  SaturationLaw law(SaturationLawKind::clausius_clapeyron, 273.15, 647.0);
  law.log_base_ = log_base;
  return law;
}

SaturationLaw SaturationLaw::table(std::vector<double> temperatures, std::vector<double> pressures) {
  if (temperatures.size() < 2 || temperatures.size() != pressures.size())
    throw Error("saturation table needs at least two (T, p) points of equal count");
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (pressures[k] <= 0.0) throw Error("saturation table pressures must be positive");
    if (k > 0 && (temperatures[k] <= temperatures[k - 1] || pressures[k] <= pressures[k - 1]))
      throw Error("saturation table must be strictly increasing in T and p");
  }
  SaturationLaw law(SaturationLawKind::table, temperatures.front(), temperatures.back());
  law.table_T_ = std::move(temperatures);
  law.table_p_ = std::move(pressures);
  return law;
}

void SaturationLaw::check_temperature(double T) const {
  if (!(T > T_min_) && kind_ == SaturationLawKind::quartic)
    throw DomainError("saturation law: T = " + fmt_double(T) + " K must exceed " + fmt_double(T_min_) + " K");
  if (!(T >= T_min_) || !(T <= T_max_))
    throw DomainError("saturation law: T = " + fmt_double(T) + " K outside [" + fmt_double(T_min_) + ", " +
                      fmt_double(T_max_) + "] K");
}

double SaturationLaw::pressure(double T) const {
  if (kind_ == SaturationLawKind::quartic) {
    if (T == T_min_) return 0.0;
    check_temperature(T);
    const double x = T - 273.0;
    return 1.0e-3 * x * x * x * x;
  }
  check_temperature(T);
  if (kind_ == SaturationLawKind::clausius_clapeyron) {
    const double lg = log_base_ == 10.0 ? std::log10(T) : std::log(T);
    return 100.0 * std::exp(46.784 - 6435.0 / T - 3.868 * lg);
  }
  auto it = std::upper_bound(table_T_.begin(), table_T_.end(), T);
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - table_T_.begin(), 1)),
                                        table_T_.size() - 1);
  const double w = (T - table_T_[k - 1]) / (table_T_[k] - table_T_[k - 1]);
  return std::exp((1.0 - w) * std::log(table_p_[k - 1]) + w * std::log(table_p_[k]));
}

double SaturationLaw::dpressure_dT(double T) const {
  if (kind_ == SaturationLawKind::quartic) {
    check_temperature(T);
    const double x = T - 273.0;
    return 4.0e-3 * x * x * x;
  }
  if (kind_ == SaturationLawKind::clausius_clapeyron) {
    const double dlg = log_base_ == 10.0 ? 1.0 / (T * std::log(10.0)) : 1.0 / T;
    return pressure(T) * (6435.0 / (T * T) - 3.868 * dlg);
  }
  check_temperature(T);
  auto it = std::upper_bound(table_T_.begin(), table_T_.end(), T);
  std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - table_T_.begin(), 1)),
                                        table_T_.size() - 1);
  const double slope = (std::log(table_p_[k]) - std::log(table_p_[k - 1])) / (table_T_[k] - table_T_[k - 1]);
  return pressure(T) * slope;
}

double SaturationLaw::temperature(double p) const {
  if (!(p > 0.0)) throw DomainError("saturation temperature: p = " + fmt_double(p) + " Pa must be positive");
  if (kind_ == SaturationLawKind::quartic) return 273.0 + std::pow(1.0e3 * p, 0.25);
  if (kind_ == SaturationLawKind::table) {
    if (p < table_p_.front() || p > table_p_.back())
      throw DomainError("saturation temperature: p = " + fmt_double(p) + " Pa outside table range");
    auto it = std::upper_bound(table_p_.begin(), table_p_.end(), p);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - table_p_.begin(), 1)),
                                          table_p_.size() - 1);
    const double w = (std::log(p) - std::log(table_p_[k - 1])) / (std::log(table_p_[k]) - std::log(table_p_[k - 1]));
    return table_T_[k - 1] + w * (table_T_[k] - table_T_[k - 1]);
  }
  // Clausius-Clapeyron: safeguarded Newton on ln p_sat(T) - ln p, monotone on the range.
  const double target = std::log(p);
  double lo = T_min_, hi = T_max_;
  if (target < std::log(pressure(lo)) || target > std::log(pressure(hi)))
    throw DomainError("saturation temperature: p = " + fmt_double(p) + " Pa outside law range");
  double T = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = std::log(pressure(T)) - target;
    if (f > 0.0) hi = T; else lo = T;
    const double df = dpressure_dT(T) / pressure(T);
    double next = T - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - T) <= 1e-14 * T) return next;
    T = next;
  }
  return T;
}

// ---------------------------------------------------------------------------
// FluidModel
// ---------------------------------------------------------------------------

void FluidModel::check_state(double p, double T) const {
  const auto& r = validity();
  if (!(p >= r.p_min)) throw DomainError("pressure " + fmt_double(p) + " Pa below minimum " + fmt_double(r.p_min) + " Pa");
  if (!(p <= r.p_max)) throw DomainError("pressure " + fmt_double(p) + " Pa above maximum " + fmt_double(r.p_max) + " Pa");
  if (!(T >= r.T_min)) throw DomainError("temperature " + fmt_double(T) + " K below minimum " + fmt_double(r.T_min) + " K");
  if (!(T <= r.T_max)) throw DomainError("temperature " + fmt_double(T) + " K above maximum " + fmt_double(r.T_max) + " K");
}

namespace {

/// e = h - p / zeta with derivatives.
PropertyValue internal_energy_from(const PropertyValue& h, const PropertyValue& zeta, double p) {
  PropertyValue e;
  e.value = h.value - p / zeta.value;
  const double z2 = zeta.value * zeta.value;
  e.dp = h.dp - 1.0 / zeta.value + p * zeta.dp / z2;
  e.dT = h.dT + p * zeta.dT / z2;
  return e;
}

}  // namespace

WaterFluid::WaterFluid(WaterFluidParams params)
    : params_(std::move(params)), components_({"H2O"}, {std::vector<int>{0}, std::vector<int>{0}}) {}

PropertyBundle WaterFluid::properties(Phase a, double p, double T, std::span<const double>) const {
  check_state(p, T);
  const double M = params_.molar_mass;
  PropertyBundle b;
  if (a == Phase::liquid) {
    const double ft = 1.0 - 3.0e-4 * (T - 293.0);
    const double fp = 1.0 + 4.5e-10 * (p - 1.0e5);
    b.mass_density = {1000.0 * ft * fp, 1000.0 * ft * 4.5e-10, -0.3 * fp, {}};
    const double mu = 2.414e-5 * std::pow(10.0, 247.8 / (T - 140.0));
    b.viscosity = {mu, 0.0, -mu * std::log(10.0) * 247.8 / ((T - 140.0) * (T - 140.0)), {}};
    b.enthalpy = {M * 4180.0 * (T - 273.0), 0.0, M * 4180.0, {}};
  } else {
    const double RT = kGasConstant * T;
    b.mass_density = {p * M / RT, M / RT, -p * M / (RT * T), {}};
    b.viscosity = {1.2e-5, 0.0, 0.0, {}};
    b.enthalpy = {M * (2.5e6 + 1900.0 * (T - 273.0)), 0.0, M * 1900.0, {}};
  }
  b.molar_density = {b.mass_density.value / M, b.mass_density.dp / M, b.mass_density.dT / M, {}};
  b.internal_energy = internal_energy_from(b.enthalpy, b.molar_density, p);
  return b;
}

ImmiscibleFluid::ImmiscibleFluid(ImmiscibleFluidParams params)
    : params_(std::move(params)), components_({"liquid_component", "gas_component"}, {std::vector<int>{0}, std::vector<int>{1}}) {
  for (Phase a : kPhases) {
    if (!(params_.mass_density[index(a)] > 0.0) || !(params_.viscosity[index(a)] > 0.0) ||
        !(params_.molar_mass[index(a)] > 0.0))
      throw Error("immiscible fluid: densities, viscosities and molar masses must be positive");
  }
}

double ImmiscibleFluid::molar_mass(int component) const { return params_.molar_mass[static_cast<std::size_t>(component)]; }

PropertyBundle ImmiscibleFluid::properties(Phase a, double p, double T, std::span<const double>) const {
  check_state(p, T);
  const int k = index(a);
  const double M = params_.molar_mass[k];
  PropertyBundle b;
  b.mass_density = {params_.mass_density[k], 0.0, 0.0, {}};
  b.molar_density = {params_.mass_density[k] / M, 0.0, 0.0, {}};
  b.viscosity = {params_.viscosity[k], 0.0, 0.0, {}};
  const double cp = params_.heat_capacity[k];
  b.enthalpy = {M * cp * (T - 273.15), 0.0, M * cp, {}};
  b.internal_energy = internal_energy_from(b.enthalpy, b.molar_density, p);
  return b;
}

std::unique_ptr<FluidModel> clone(const FluidModel& fluid) {
  if (auto w = dynamic_cast<const WaterFluid*>(&fluid)) return std::make_unique<WaterFluid>(*w);
  if (auto i = dynamic_cast<const ImmiscibleFluid*>(&fluid)) return std::make_unique<ImmiscibleFluid>(*i);
  throw Error("clone: unknown fluid model type");
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

PropertyBundle eval_properties(const FluidModel& fluid, Phase a, double p, double T, std::span<const double> c) {
  if (!c.empty()) {
    double sum = 0.0;
    for (int i : fluid.components().components_of(a)) sum += c[static_cast<std::size_t>(i)];
    if (std::abs(sum - 1.0) > 1e-10) throw DomainError(std::string("molar fractions of the ") + to_string(a) + " phase are not normalized");
  }
  return fluid.properties(a, p, T, c);
}

double saturation_pressure(const FluidModel& fluid, double T) {
  const SaturationLaw* law = fluid.saturation_law();
  if (!law) throw Error("fluid model has no saturation law");
  return law->pressure(T);
}

double saturation_temperature(const FluidModel& fluid, double p) {
  const SaturationLaw* law = fluid.saturation_law();
  if (!law) throw Error("fluid model has no saturation law");
  return law->temperature(p);
}

void set_pure_phase_fractions(NodeState& state, const FluidModel& fluid) {
  const auto& cm = fluid.components();
  for (Phase a : kPhases) {
    auto& c = state.c[index(a)];
    c.fill(0.0);
    const auto& list = cm.components_of(a);
    if (list.size() == 1) c[static_cast<std::size_t>(list.front())] = 1.0;
  }
}

ClosureResidual closure_residual(const NodeState& state, const FluidModel& fluid) {
  ClosureResidual r;
  const auto& cm = fluid.components();
  const PhaseSet q = state.phases;
  // Equilibrium: with one component per phase pair the fugacity equality
  // reduces to the saturation law.
  for (int i = 0; i < cm.size(); ++i) {
    if (q.is_both() && cm.phases_of(i).is_both()) {
      r.values.push_back(state.p - saturation_pressure(fluid, state.T));
      r.kinds.push_back(ClosureRow::equilibrium);
    }
  }
  for (Phase a : kPhases) {
    if (!q.contains(a)) continue;
    double sum = 0.0;
    for (int i : cm.components_of(a)) sum += state.c[index(a)][static_cast<std::size_t>(i)];
    r.values.push_back(sum - 1.0);
    r.kinds.push_back(ClosureRow::fraction_sum);
  }
  double ssum = 0.0;
  for (Phase a : kPhases)
    if (q.contains(a)) ssum += state.s[index(a)];
  r.values.push_back(ssum - 1.0);
  r.kinds.push_back(ClosureRow::saturation_sum);
  for (Phase a : kPhases) {
    if (q.contains(a)) continue;
    r.values.push_back(state.s[index(a)]);
    r.kinds.push_back(ClosureRow::absent_saturation);
  }
  return r;
}

PhaseSet flash_update(NodeState& state, const FluidModel& fluid, double node_volume, double appearance_saturation) {
  const auto& cm = fluid.components();
  const SaturationLaw* law = fluid.saturation_law();
  const PhaseSet q = state.phases;

  if (q.is_both()) {
    for (Phase a : kPhases) {
      if (state.s[index(a)] < 0.0) {
        const Phase b = other(a);
        state.phases = PhaseSet::of(b);
        state.s[index(a)] = 0.0;
        state.s[index(b)] = 1.0;
        for (int i : cm.absent_components(state.phases)) state.absent_moles[static_cast<std::size_t>(i)] = 0.0;
        return state.phases;
      }
    }
    return q;
  }

  const Phase present = q.single();
  const Phase missing = other(present);
  bool appears = false;
  if (law) {
    // Relative band around the saturation curve.
    const double psat = law->pressure(state.T);
    constexpr double band = 1e-12;
    appears = present == Phase::liquid ? state.p < psat * (1.0 - band) : state.p > psat * (1.0 + band);
  }
  const auto absent = cm.absent_components(q);
  double seed_moles = 0.0;
  for (int i : absent) {
    double& n = state.absent_moles[static_cast<std::size_t>(i)];
    if (n < 0.0) n = 0.0;
    if (cm.in_phase(i, missing)) seed_moles += n;
  }
  double seed = 0.0;
  if (seed_moles > 0.0 && node_volume > 0.0) {
    const auto props = fluid.properties(missing, state.p, state.T, state.fractions(missing));
    seed = std::clamp(seed_moles / (node_volume * props.molar_density.value), 0.0, 1.0);
    if (seed > appearance_saturation) appears = true;
  } else if (seed_moles > 0.0) {
    appears = true;
  }
  if (!appears) return q;

  state.phases = PhaseSet::both();
  state.s[index(missing)] = seed;
  state.s[index(present)] = 1.0 - seed;
  for (int i : absent) state.absent_moles[static_cast<std::size_t>(i)] = 0.0;
  if (law) state.T = law->temperature(state.p);
  return state.phases;
}

}  // namespace mswell
