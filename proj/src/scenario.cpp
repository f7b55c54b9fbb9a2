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

#include "mswell/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mswell/errors.hpp"

namespace mswell {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

enum class Dim {
  none,
  length,
  pressure,
  temperature,
  time,
  velocity,
  mass_rate,
  density,
  viscosity,
  conductivity,
  thermal_index,
  tension,
  molar_mass,
  heat_capacity
};

struct UnitDef {
  const char* name;
  Dim dim;
  double factor;
  double offset;
};

constexpr UnitDef kUnits[] = {
    {"m", Dim::length, 1.0, 0.0},           {"km", Dim::length, 1e3, 0.0},
    {"cm", Dim::length, 1e-2, 0.0},         {"mm", Dim::length, 1e-3, 0.0},
    {"Pa", Dim::pressure, 1.0, 0.0},        {"kPa", Dim::pressure, 1e3, 0.0},
    {"MPa", Dim::pressure, 1e6, 0.0},       {"bar", Dim::pressure, 1e5, 0.0},
    {"K", Dim::temperature, 1.0, 0.0},      {"degC", Dim::temperature, 1.0, 273.15},
    {"s", Dim::time, 1.0, 0.0},             {"min", Dim::time, 60.0, 0.0},
    {"h", Dim::time, 3600.0, 0.0},          {"d", Dim::time, 86400.0, 0.0},
    {"m/s", Dim::velocity, 1.0, 0.0},       {"kg/s", Dim::mass_rate, 1.0, 0.0},
    {"t/h", Dim::mass_rate, 1000.0 / 3600.0, 0.0},
    {"kg/m3", Dim::density, 1.0, 0.0},      {"Pa.s", Dim::viscosity, 1.0, 0.0},
    {"mPa.s", Dim::viscosity, 1e-3, 0.0},   {"cP", Dim::viscosity, 1e-3, 0.0},
    {"W/m/K", Dim::conductivity, 1.0, 0.0}, {"W/K", Dim::thermal_index, 1.0, 0.0},
    {"J/s/K", Dim::thermal_index, 1.0, 0.0}, {"N/m", Dim::tension, 1.0, 0.0},
    {"kg/mol", Dim::molar_mass, 1.0, 0.0},  {"g/mol", Dim::molar_mass, 1e-3, 0.0},
    {"J/kg/K", Dim::heat_capacity, 1.0, 0.0},
};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::none: return "dimensionless";
    case Dim::length: return "length";
    case Dim::pressure: return "pressure";
    case Dim::temperature: return "temperature";
    case Dim::time: return "time";
    case Dim::velocity: return "velocity";
    case Dim::mass_rate: return "mass rate";
    case Dim::density: return "density";
    case Dim::viscosity: return "viscosity";
    case Dim::conductivity: return "thermal conductivity";
    case Dim::thermal_index: return "thermal well index";
    case Dim::tension: return "surface tension";
    case Dim::molar_mass: return "molar mass";
    case Dim::heat_capacity: return "heat capacity";
  }
  return "?";
}

/// SI unit written by the serializer.
const char* si_unit(Dim d) {
  for (const auto& u : kUnits)
    if (u.dim == d && u.factor == 1.0 && u.offset == 0.0) return u.name;
  return "";
}

std::string units_of(Dim d) {
  std::string out;
  for (const auto& u : kUnits)
    if (u.dim == d) out += (out.empty() ? "" : ", ") + std::string(u.name);
  return out;
}

class Reader {
 public:
  std::vector<std::string> problems;

  static std::string line(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.is_null() ? std::string() : "line " + std::to_string(m.line + 1) + ": ";
  }

  void fail(const YAML::Node& at, const std::string& msg) { problems.push_back(line(at) + msg); }

  bool expect_map(const YAML::Node& n, const std::string& path) {
    if (n.IsMap()) return true;
    fail(n, path + " must be a mapping");
    return false;
  }

  void check_keys(const YAML::Node& map, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        std::string list;
        for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail(kv.first, "unknown key '" + (path.empty() ? key : path + "." + key) + "' (allowed: " + list + ")");
      }
    }
  }

  std::optional<double> quantity(const YAML::Node& map, const char* key, const std::string& path, Dim dim,
                                 bool required) {
    const YAML::Node n = map[key];
    const std::string full = path + "." + key;
    if (!n) {
      if (required) fail(map, "missing required key '" + full + "'");
      return std::nullopt;
    }
    return parse_quantity(n, full, dim);
  }

  std::optional<double> parse_quantity(const YAML::Node& n, const std::string& full, Dim dim) {
    if (!n.IsScalar()) {
      fail(n, full + " must be a scalar");
      return std::nullopt;
    }
    const std::string text = n.Scalar();
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || errno == ERANGE || !std::isfinite(v)) {
      fail(n, full + ": '" + text + "' is not a number");
      return std::nullopt;
    }
    std::string unit(end);
    unit.erase(0, unit.find_first_not_of(" \t"));
    unit.erase(unit.find_last_not_of(" \t") + 1);
    if (dim == Dim::none) {
      if (!unit.empty()) {
        fail(n, full + " is dimensionless but carries unit '" + unit + "'");
        return std::nullopt;
      }
      return v;
    }
    if (unit.empty()) {
      fail(n, full + ": missing unit (expected " + std::string(dim_name(dim)) + " in " + units_of(dim) + ")");
      return std::nullopt;
    }
    for (const auto& u : kUnits) {
      if (unit != u.name) continue;
      if (u.dim != dim) {
        fail(n, full + ": unit '" + unit + "' is a " + dim_name(u.dim) + ", expected " + dim_name(dim) + " (" +
                    units_of(dim) + ")");
        return std::nullopt;
      }
      return v * u.factor + u.offset;
    }
    fail(n, full + ": unknown unit '" + unit + "' (expected " + units_of(dim) + ")");
    return std::nullopt;
  }

  void set(double& target, const YAML::Node& map, const char* key, const std::string& path, Dim dim,
           bool required = false) {
    if (auto v = quantity(map, key, path, dim, required)) target = *v;
  }

  std::optional<std::string> string(const YAML::Node& map, const char* key, const std::string& path, bool required) {
    const YAML::Node n = map[key];
    if (!n) {
      if (required) fail(map, "missing required key '" + path + "." + key + "'");
      return std::nullopt;
    }
    if (!n.IsScalar()) {
      fail(n, path + "." + key + " must be a scalar");
      return std::nullopt;
    }
    return n.Scalar();
  }

  std::optional<int> integer(const YAML::Node& map, const char* key, const std::string& path) {
    const YAML::Node n = map[key];
    if (!n) return std::nullopt;
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      fail(n, path + "." + key + " must be an integer");
      return std::nullopt;
    }
  }

  std::optional<bool> boolean(const YAML::Node& map, const char* key, const std::string& path) {
    const YAML::Node n = map[key];
    if (!n) return std::nullopt;
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(n, path + "." + key + " must be true or false");
      return std::nullopt;
    }
  }

  std::optional<Point3> point(const YAML::Node& map, const char* key, const std::string& path) {
    const YAML::Node n = map[key];
    const std::string full = path + "." + key;
    if (!n) {
      fail(map, "missing required key '" + full + "'");
      return std::nullopt;
    }
    if (!n.IsSequence() || n.size() != 3) {
      fail(n, full + " must be a list of three lengths");
      return std::nullopt;
    }
    Point3 p{};
    bool ok = true;
    for (std::size_t k = 0; k < 3; ++k) {
      auto v = parse_quantity(n[k], full + "[" + std::to_string(k) + "]", Dim::length);
      if (v) p[k] = *v; else ok = false;
    }
    return ok ? std::optional<Point3>(p) : std::nullopt;
  }

  void phase_pair(std::array<double, kNumPhases>& target, const YAML::Node& map, const char* key,
                  const std::string& path, Dim dim) {
    const YAML::Node n = map[key];
    if (!n) return;
    const std::string full = path + "." + key;
    if (!expect_map(n, full)) return;
    check_keys(n, full, {"liquid", "gas"});
    set(target[index(Phase::liquid)], n, "liquid", full, dim, true);
    set(target[index(Phase::gas)], n, "gas", full, dim, true);
  }

  std::vector<double> list(const YAML::Node& map, const char* key, const std::string& path, Dim dim) {
    std::vector<double> out;
    const YAML::Node n = map[key];
    if (!n) return out;
    const std::string full = path + "." + key;
    if (!n.IsSequence()) {
      fail(n, full + " must be a list");
      return out;
    }
    for (std::size_t k = 0; k < n.size(); ++k)
      if (auto v = parse_quantity(n[k], full + "[" + std::to_string(k) + "]", dim)) out.push_back(*v);
    return out;
  }

  void require(bool cond, const YAML::Node& at, const std::string& msg) {
    if (!cond) fail(at, msg);
  }
};

void read_selector(Reader& r, const YAML::Node& n, const std::string& path, NodeSelector& sel) {
  if (auto b = r.string(n, "branch", path, true)) sel.branch = *b;
  sel.arc_length = r.quantity(n, "arc_length", path, Dim::length, false);
}

void read_well(Reader& r, const YAML::Node& n, WellConfig& w) {
  if (!r.expect_map(n, "well")) return;
  r.check_keys(n, "well", {"root", "radius", "branches"});
  if (auto p = r.point(n, "root", "well")) w.root = *p;
  r.set(w.radius, n, "radius", "well", Dim::length, true);
  r.require(w.radius > 0.0, n, "well.radius must be positive");
  const YAML::Node b = n["branches"];
  if (!b) {
    r.fail(n, "missing required key 'well.branches'");
    return;
  }
  if (!b.IsSequence() || b.size() == 0) {
    r.fail(b, "well.branches must be a non-empty list");
    return;
  }
  std::set<std::string> names;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const std::string path = "well.branches[" + std::to_string(k) + "]";
    const YAML::Node e = b[k];
    if (!r.expect_map(e, path)) continue;
    r.check_keys(e, path, {"name", "from", "to", "segments", "radius"});
    BranchConfig br;
    if (auto s = r.string(e, "name", path, true)) br.name = *s;
    if (auto p = r.point(e, "from", path)) br.from = *p;
    if (auto p = r.point(e, "to", path)) br.to = *p;
    if (auto s = r.integer(e, "segments", path)) br.segments = *s;
    else if (!e["segments"]) r.fail(e, "missing required key '" + path + ".segments'");
    br.radius = r.quantity(e, "radius", path, Dim::length, false);
    r.require(br.segments >= 1, e, path + ".segments must be at least 1");
    r.require(!br.radius || *br.radius > 0.0, e, path + ".radius must be positive");
    r.require(!br.name.empty(), e, path + ".name must not be empty");
    r.require(names.insert(br.name).second, e, "duplicate branch name '" + br.name + "'");
    w.branches.push_back(br);
  }
}

void read_fluid(Reader& r, const YAML::Node& n, FluidConfig& f) {
  if (!r.expect_map(n, "fluid")) return;
  if (auto m = r.string(n, "model", "fluid", true)) f.model = *m;
  if (f.model == "water") {
    r.check_keys(n, "fluid", {"model", "saturation_law", "log_base", "table", "molar_mass", "conductivity"});
    if (auto s = r.string(n, "saturation_law", "fluid", false)) f.saturation_law = *s;
    if (f.saturation_law != "quartic" && f.saturation_law != "clausius_clapeyron" && f.saturation_law != "table")
      r.fail(n["saturation_law"], "fluid.saturation_law must be quartic, clausius_clapeyron or table");
    if (auto lb = r.string(n, "log_base", "fluid", false)) {
      if (*lb == "e") f.log_base = 0.0;
      else if (*lb == "10") f.log_base = 10.0;
      else r.fail(n["log_base"], "fluid.log_base must be e or 10");
    }
    if (const YAML::Node t = n["table"]) {
      if (r.expect_map(t, "fluid.table")) {
        r.check_keys(t, "fluid.table", {"temperatures", "pressures"});
        f.table_temperatures = r.list(t, "temperatures", "fluid.table", Dim::temperature);
        f.table_pressures = r.list(t, "pressures", "fluid.table", Dim::pressure);
      }
    }
    if (f.saturation_law == "table")
      r.require(f.table_temperatures.size() >= 2 && f.table_temperatures.size() == f.table_pressures.size(), n,
                "fluid.table needs matching temperature and pressure lists of at least two points");
    r.set(f.molar_mass, n, "molar_mass", "fluid", Dim::molar_mass);
    r.require(f.molar_mass > 0.0, n, "fluid.molar_mass must be positive");
  } else if (f.model == "immiscible") {
    r.check_keys(n, "fluid", {"model", "density", "viscosity", "molar_mass", "heat_capacity", "isothermal",
                              "temperature", "conductivity"});
    r.phase_pair(f.density, n, "density", "fluid", Dim::density);
    r.phase_pair(f.viscosity, n, "viscosity", "fluid", Dim::viscosity);
    r.phase_pair(f.phase_molar_mass, n, "molar_mass", "fluid", Dim::molar_mass);
    r.phase_pair(f.heat_capacity, n, "heat_capacity", "fluid", Dim::heat_capacity);
    if (auto b = r.boolean(n, "isothermal", "fluid")) f.isothermal = *b;
    r.set(f.temperature, n, "temperature", "fluid", Dim::temperature);
    for (Phase a : kPhases) {
      const int k = index(a);
      r.require(f.density[k] > 0.0 && f.viscosity[k] > 0.0 && f.phase_molar_mass[k] > 0.0, n,
                std::string("fluid: ") + to_string(a) + " density, viscosity and molar mass must be positive");
    }
    r.require(f.density[index(Phase::liquid)] > f.density[index(Phase::gas)], n,
              "fluid.density: liquid must be denser than gas");
  } else {
    r.fail(n["model"], "fluid.model must be water or immiscible");
    return;
  }
  r.phase_pair(f.conductivity, n, "conductivity", "fluid", Dim::conductivity);
  r.require(f.conductivity[0] >= 0.0 && f.conductivity[1] >= 0.0, n, "fluid.conductivity must be non-negative");
}

void read_hydro(Reader& r, const YAML::Node& n, DfmParams& d, FrictionParams& f) {
  if (!r.expect_map(n, "hydrodynamics")) return;
  r.check_keys(n, "hydrodynamics", {"A", "B", "a1", "a2", "Ku", "Fv", "surface_tension", "friction_factor"});
  r.set(d.A, n, "A", "hydrodynamics", Dim::none);
  r.set(d.B, n, "B", "hydrodynamics", Dim::none);
  r.set(d.a1, n, "a1", "hydrodynamics", Dim::none);
  r.set(d.a2, n, "a2", "hydrodynamics", Dim::none);
  r.set(d.Ku, n, "Ku", "hydrodynamics", Dim::none);
  r.set(d.Fv, n, "Fv", "hydrodynamics", Dim::none);
  r.set(d.sigma, n, "surface_tension", "hydrodynamics", Dim::tension);
  r.set(f.fq, n, "friction_factor", "hydrodynamics", Dim::none);
  try {
    d.validate();
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) r.fail(n, "hydrodynamics: " + p);
  } catch (const Error& e) {
    r.fail(n, std::string("hydrodynamics: ") + e.what());
  }
  r.require(f.fq >= 0.0, n, "hydrodynamics.friction_factor must be non-negative");
}

void read_feeds(Reader& r, const YAML::Node& n, std::vector<FeedZoneConfig>& feeds) {
  if (!n.IsSequence()) {
    r.fail(n, "feed_zones must be a list");
    return;
  }
  for (std::size_t k = 0; k < n.size(); ++k) {
    const std::string path = "feed_zones[" + std::to_string(k) + "]";
    const YAML::Node e = n[k];
    if (!r.expect_map(e, path)) continue;
    r.check_keys(e, path, {"branch", "arc_length", "pressure", "temperature", "gas_saturation", "darcy_index",
                           "fourier_index", "relperm_exponent"});
    FeedZoneConfig z;
    read_selector(r, e, path, z.node);
    r.set(z.pressure, e, "pressure", path, Dim::pressure, true);
    r.set(z.temperature, e, "temperature", path, Dim::temperature, true);
    r.set(z.gas_saturation, e, "gas_saturation", path, Dim::none);
    r.set(z.wi_darcy, e, "darcy_index", path, Dim::length, true);
    r.set(z.wi_fourier, e, "fourier_index", path, Dim::thermal_index);
    r.set(z.relperm_exponent, e, "relperm_exponent", path, Dim::none);
    r.require(z.pressure > 0.0, e, path + ".pressure must be positive");
    r.require(z.temperature > 0.0, e, path + ".temperature must be positive");
    r.require(z.gas_saturation >= 0.0 && z.gas_saturation <= 1.0, e, path + ".gas_saturation must lie in [0, 1]");
    r.require(z.wi_darcy >= 0.0 && z.wi_fourier >= 0.0, e, path + ": well indexes must be non-negative");
    r.require(z.relperm_exponent > 0.0, e, path + ".relperm_exponent must be positive");
    feeds.push_back(z);
  }
}

void read_inlet(Reader& r, const YAML::Node& n, InletConfig& in) {
  if (!r.expect_map(n, "inlet")) return;
  r.check_keys(n, "inlet", {"branch", "arc_length", "gas_velocity", "liquid_velocity", "temperature"});
  read_selector(r, n, "inlet", in.node);
  r.set(in.gas_velocity, n, "gas_velocity", "inlet", Dim::velocity, true);
  r.set(in.liquid_velocity, n, "liquid_velocity", "inlet", Dim::velocity, true);
  r.set(in.temperature, n, "temperature", "inlet", Dim::temperature);
}

void read_monitor(Reader& r, const YAML::Node& n, MonitorConfig& m) {
  if (!r.expect_map(n, "monitoring")) return;
  r.check_keys(n, "monitoring", {"min_head_pressure", "max_mass_rate", "initial"});
  r.set(m.min_head_pressure, n, "min_head_pressure", "monitoring", Dim::pressure, true);
  r.set(m.max_mass_rate, n, "max_mass_rate", "monitoring", Dim::mass_rate, true);
  if (auto s = r.string(n, "initial", "monitoring", false)) {
    if (*s == "pressure") m.initial = Constraint::pressure;
    else if (*s == "rate") m.initial = Constraint::rate;
    else r.fail(n["initial"], "monitoring.initial must be pressure or rate");
  }
  r.require(m.min_head_pressure > 0.0, n, "monitoring.min_head_pressure must be positive");
  r.require(m.max_mass_rate >= 0.0, n, "monitoring.max_mass_rate must be non-negative");
}

void read_initial(Reader& r, const YAML::Node& n, InitialConfig& c) {
  if (!r.expect_map(n, "initial")) return;
  r.check_keys(n, "initial", {"temperature", "head_pressure", "phase"});
  r.set(c.temperature, n, "temperature", "initial", Dim::temperature, true);
  r.set(c.head_pressure, n, "head_pressure", "initial", Dim::pressure, true);
  if (auto s = r.string(n, "phase", "initial", false)) c.phase = *s;
  r.require(c.phase == "liquid" || c.phase == "gas", n, "initial.phase must be liquid or gas");
  r.require(c.head_pressure > 0.0 && c.temperature > 0.0, n, "initial: pressure and temperature must be positive");
}

void read_time(Reader& r, const YAML::Node& n, TimeStepConfig& t) {
  if (!r.expect_map(n, "time")) return;
  r.check_keys(n, "time", {"initial_step", "max_step", "final_time", "growth", "max_newton", "min_step"});
  r.set(t.initial_dt, n, "initial_step", "time", Dim::time, true);
  r.set(t.max_dt, n, "max_step", "time", Dim::time, true);
  r.set(t.final_time, n, "final_time", "time", Dim::time, true);
  r.set(t.growth, n, "growth", "time", Dim::none);
  if (auto k = r.integer(n, "max_newton", "time")) t.max_newton = *k;
  r.set(t.min_dt, n, "min_step", "time", Dim::time);
  r.require(t.initial_dt > 0.0 && t.initial_dt <= t.max_dt, n, "time: need 0 < initial_step <= max_step");
  r.require(t.growth >= 1.0, n, "time.growth must be at least 1");
  r.require(t.final_time > 0.0, n, "time.final_time must be positive");
  r.require(t.max_newton >= 1, n, "time.max_newton must be at least 1");
  r.require(t.min_dt > 0.0, n, "time.min_step must be positive");
}

void read_solver(Reader& r, const YAML::Node& n, SolverConfig& s) {
  if (!r.expect_map(n, "solver")) return;
  r.check_keys(n, "solver", {"residual_tolerance", "increment_tolerance", "weight_saturation", "weight_pressure",
                             "weight_temperature", "max_saturation_change", "max_pressure_change",
                             "appearance_saturation", "backtrack_after", "max_backtracks"});
  r.set(s.residual_tolerance, n, "residual_tolerance", "solver", Dim::none);
  r.set(s.increment_tolerance, n, "increment_tolerance", "solver", Dim::none);
  r.set(s.weight_saturation, n, "weight_saturation", "solver", Dim::none);
  r.set(s.weight_pressure, n, "weight_pressure", "solver", Dim::none);
  r.set(s.weight_temperature, n, "weight_temperature", "solver", Dim::none);
  r.set(s.max_saturation_change, n, "max_saturation_change", "solver", Dim::none);
  r.set(s.max_pressure_change, n, "max_pressure_change", "solver", Dim::none);
  r.set(s.appearance_saturation, n, "appearance_saturation", "solver", Dim::none);
  if (auto k = r.integer(n, "backtrack_after", "solver")) s.backtrack_after = *k;
  if (auto k = r.integer(n, "max_backtracks", "solver")) s.max_backtracks = *k;
  r.require(s.residual_tolerance > 0.0 && s.increment_tolerance > 0.0, n, "solver: tolerances must be positive");
  r.require(s.max_saturation_change > 0.0 && s.max_pressure_change > 0.0, n,
            "solver: update bounds must be positive");
  r.require(s.appearance_saturation >= 0.0 && s.appearance_saturation < 1.0, n,
            "solver.appearance_saturation must lie in [0, 1)");
  r.require(s.backtrack_after >= 0 && s.max_backtracks >= 0, n, "solver: backtracking counts must be non-negative");
}

void read_output(Reader& r, const YAML::Node& n, OutputConfig& o) {
  if (!r.expect_map(n, "output")) return;
  r.check_keys(n, "output", {"directory", "profile_times"});
  if (auto d = r.string(n, "directory", "output", false)) o.directory = *d;
  o.profile_times = r.list(n, "profile_times", "output", Dim::time);
  r.require(std::is_sorted(o.profile_times.begin(), o.profile_times.end()), n,
            "output.profile_times must be increasing");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({"line " + std::to_string(e.mark.line + 1) + ": " + e.msg});
  }
  Reader r;
  ScenarioConfig c;
  static const char* required[] = {"well", "fluid", "monitoring", "initial", "time"};
  if (!root || root.IsNull()) {
    std::vector<std::string> p;
    for (const char* b : required) p.push_back(std::string("missing required block '") + b + "'");
    throw ConfigError(p);
  }
  if (!root.IsMap()) throw ConfigError({Reader::line(root) + "scenario must be a mapping of blocks"});
  r.check_keys(root, "", {"name", "well", "fluid", "hydrodynamics", "feed_zones", "inlet", "monitoring", "initial",
                          "time", "solver", "output"});
  for (const char* b : required)
    if (!root[b]) r.problems.push_back(std::string("missing required block '") + b + "'");

  if (auto n = r.string(root, "name", "", false)) c.name = *n;
  if (root["well"]) read_well(r, root["well"], c.well);
  if (root["fluid"]) read_fluid(r, root["fluid"], c.fluid);
  if (root["hydrodynamics"]) read_hydro(r, root["hydrodynamics"], c.dfm, c.friction);
  if (root["feed_zones"]) read_feeds(r, root["feed_zones"], c.feeds);
  if (root["inlet"]) {
    c.inlet.emplace();
    read_inlet(r, root["inlet"], *c.inlet);
  }
  if (root["monitoring"]) read_monitor(r, root["monitoring"], c.monitor);
  if (root["initial"]) read_initial(r, root["initial"], c.initial);
  if (root["time"]) read_time(r, root["time"], c.time);
  if (root["solver"]) read_solver(r, root["solver"], c.solver);
  if (root["output"]) read_output(r, root["output"], c.output);

  std::set<std::string> names;
  for (const auto& b : c.well.branches) names.insert(b.name);
  auto check_branch = [&](const NodeSelector& s, const std::string& what) {
    if (!s.branch.empty() && !names.empty() && !names.count(s.branch))
      r.problems.push_back(what + " refers to unknown branch '" + s.branch + "'");
  };
  for (std::size_t k = 0; k < c.feeds.size(); ++k) check_branch(c.feeds[k].node, "feed_zones[" + std::to_string(k) + "]");
  if (c.inlet) check_branch(c.inlet->node, "inlet");

  if (!r.problems.empty()) throw ConfigError(r.problems);
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open scenario file '" + path + "': " + std::strerror(errno)});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

std::string q(double v, Dim d) {
  std::string s = format_double(v);
  if (d != Dim::none) s += std::string(" ") + si_unit(d);
  return s;
}

std::string point(const Point3& p) {
  return "[" + q(p[0], Dim::length) + ", " + q(p[1], Dim::length) + ", " + q(p[2], Dim::length) + "]";
}

std::string pair(const std::array<double, kNumPhases>& a, Dim d) {
  return "{liquid: " + q(a[index(Phase::liquid)], d) + ", gas: " + q(a[index(Phase::gas)], d) + "}";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void selector(std::ostringstream& o, const NodeSelector& s, const char* indent) {
  o << indent << "branch: " << quoted(s.branch) << "\n";
  if (s.arc_length) o << indent << "arc_length: " << q(*s.arc_length, Dim::length) << "\n";
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& c) {
  std::ostringstream o;
  if (!c.name.empty()) o << "name: " << quoted(c.name) << "\n";
  o << "well:\n  root: " << point(c.well.root) << "\n  radius: " << q(c.well.radius, Dim::length) << "\n  branches:\n";
  for (const auto& b : c.well.branches) {
    o << "    - name: " << quoted(b.name) << "\n      from: " << point(b.from) << "\n      to: " << point(b.to)
      << "\n      segments: " << b.segments << "\n";
    if (b.radius) o << "      radius: " << q(*b.radius, Dim::length) << "\n";
  }
  const auto& f = c.fluid;
  o << "fluid:\n  model: " << f.model << "\n";
  if (f.model == "water") {
    o << "  saturation_law: " << f.saturation_law << "\n";
    if (f.saturation_law == "clausius_clapeyron") o << "  log_base: " << (f.log_base == 10.0 ? "\"10\"" : "e") << "\n";
    if (!f.table_temperatures.empty() || !f.table_pressures.empty()) {
      o << "  table:\n    temperatures: [";
      for (std::size_t k = 0; k < f.table_temperatures.size(); ++k)
        o << (k ? ", " : "") << q(f.table_temperatures[k], Dim::temperature);
      o << "]\n    pressures: [";
      for (std::size_t k = 0; k < f.table_pressures.size(); ++k)
        o << (k ? ", " : "") << q(f.table_pressures[k], Dim::pressure);
      o << "]\n";
    }
    o << "  molar_mass: " << q(f.molar_mass, Dim::molar_mass) << "\n";
  } else {
    o << "  density: " << pair(f.density, Dim::density) << "\n  viscosity: " << pair(f.viscosity, Dim::viscosity)
      << "\n  molar_mass: " << pair(f.phase_molar_mass, Dim::molar_mass)
      << "\n  heat_capacity: " << pair(f.heat_capacity, Dim::heat_capacity)
      << "\n  isothermal: " << (f.isothermal ? "true" : "false")
      << "\n  temperature: " << q(f.temperature, Dim::temperature) << "\n";
  }
  o << "  conductivity: " << pair(f.conductivity, Dim::conductivity) << "\n";
  o << "hydrodynamics:\n  A: " << q(c.dfm.A, Dim::none) << "\n  B: " << q(c.dfm.B, Dim::none)
    << "\n  a1: " << q(c.dfm.a1, Dim::none) << "\n  a2: " << q(c.dfm.a2, Dim::none) << "\n  Ku: " << q(c.dfm.Ku, Dim::none)
    << "\n  Fv: " << q(c.dfm.Fv, Dim::none) << "\n  surface_tension: " << q(c.dfm.sigma, Dim::tension)
    << "\n  friction_factor: " << q(c.friction.fq, Dim::none) << "\n";
  if (!c.feeds.empty()) {
    o << "feed_zones:\n";
    for (const auto& z : c.feeds) {
      o << "  - ";
      std::ostringstream s;
      selector(s, z.node, "    ");
      o << s.str().substr(4);
      o << "    pressure: " << q(z.pressure, Dim::pressure) << "\n    temperature: " << q(z.temperature, Dim::temperature)
        << "\n    gas_saturation: " << q(z.gas_saturation, Dim::none) << "\n    darcy_index: " << q(z.wi_darcy, Dim::length)
        << "\n    fourier_index: " << q(z.wi_fourier, Dim::thermal_index)
        << "\n    relperm_exponent: " << q(z.relperm_exponent, Dim::none) << "\n";
    }
  }
  if (c.inlet) {
    o << "inlet:\n";
    selector(o, c.inlet->node, "  ");
    o << "  gas_velocity: " << q(c.inlet->gas_velocity, Dim::velocity)
      << "\n  liquid_velocity: " << q(c.inlet->liquid_velocity, Dim::velocity)
      << "\n  temperature: " << q(c.inlet->temperature, Dim::temperature) << "\n";
  }
  o << "monitoring:\n  min_head_pressure: " << q(c.monitor.min_head_pressure, Dim::pressure)
    << "\n  max_mass_rate: " << q(c.monitor.max_mass_rate, Dim::mass_rate)
    << "\n  initial: " << to_string(c.monitor.initial) << "\n";
  o << "initial:\n  temperature: " << q(c.initial.temperature, Dim::temperature)
    << "\n  head_pressure: " << q(c.initial.head_pressure, Dim::pressure) << "\n  phase: " << c.initial.phase << "\n";
  o << "time:\n  initial_step: " << q(c.time.initial_dt, Dim::time) << "\n  max_step: " << q(c.time.max_dt, Dim::time)
    << "\n  final_time: " << q(c.time.final_time, Dim::time) << "\n  growth: " << q(c.time.growth, Dim::none)
    << "\n  max_newton: " << c.time.max_newton << "\n  min_step: " << q(c.time.min_dt, Dim::time) << "\n";
  o << "solver:\n  residual_tolerance: " << q(c.solver.residual_tolerance, Dim::none)
    << "\n  increment_tolerance: " << q(c.solver.increment_tolerance, Dim::none)
    << "\n  weight_saturation: " << q(c.solver.weight_saturation, Dim::none)
    << "\n  weight_pressure: " << q(c.solver.weight_pressure, Dim::none)
    << "\n  weight_temperature: " << q(c.solver.weight_temperature, Dim::none)
    << "\n  max_saturation_change: " << q(c.solver.max_saturation_change, Dim::none)
    << "\n  max_pressure_change: " << q(c.solver.max_pressure_change, Dim::none)
    << "\n  appearance_saturation: " << q(c.solver.appearance_saturation, Dim::none)
    << "\n  backtrack_after: " << c.solver.backtrack_after << "\n  max_backtracks: " << c.solver.max_backtracks << "\n";
  o << "output:\n  directory: " << quoted(c.output.directory) << "\n  profile_times: [";
  for (std::size_t k = 0; k < c.output.profile_times.size(); ++k)
    o << (k ? ", " : "") << q(c.output.profile_times[k], Dim::time);
  o << "]\n";
  return o.str();
}

std::shared_ptr<FluidModel> make_fluid(const FluidConfig& f) {
  if (f.model == "water") {
    WaterFluidParams p;
    if (f.saturation_law == "quartic") p.saturation = SaturationLaw::quartic();
    else if (f.saturation_law == "clausius_clapeyron") p.saturation = SaturationLaw::clausius_clapeyron(f.log_base);
    else p.saturation = SaturationLaw::table(f.table_temperatures, f.table_pressures);
    p.molar_mass = f.molar_mass;
    p.conductivity = f.conductivity;
    return std::make_shared<WaterFluid>(p);
  }
  ImmiscibleFluidParams p;
  p.mass_density = f.density;
  p.viscosity = f.viscosity;
  p.molar_mass = f.phase_molar_mass;
  p.heat_capacity = f.heat_capacity;
  p.conductivity = f.conductivity;
  p.isothermal = f.isothermal;
  p.temperature = f.temperature;
  return std::make_shared<ImmiscibleFluid>(p);
}

int select_node(const WellMesh& mesh, const NodeSelector& s) {
  return s.arc_length ? mesh.branch_node_at(s.branch, *s.arc_length) : mesh.branch_end(s.branch);
}

std::vector<NodeState> hydrostatic_state(const WellMesh& mesh, const FluidModel& fluid, double temperature,
                                         double head_pressure, Phase phase) {
  std::vector<NodeState> st(static_cast<std::size_t>(mesh.node_count()));
  for (auto& s : st) {
    s.phases = PhaseSet::of(phase);
    s.T = temperature;
    s.s = {0.0, 0.0};
    s.s[index(phase)] = 1.0;
    s.p = head_pressure;
    set_pure_phase_fractions(s, fluid);
  }
  auto density = [&](const NodeState& s) { return eval_properties(fluid, phase, s.p, s.T, s.fractions(phase)).mass_density.value; };
  const auto& order = mesh.leaf_to_root_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const auto& node = mesh.node(v);
    if (!node.parent_edge) continue;
    const auto& e = mesh.edge(*node.parent_edge);
    const NodeState& parent = st[static_cast<std::size_t>(e.parent)];
    NodeState& child = st[static_cast<std::size_t>(v)];
    const double dz = mesh.z(e.parent) - mesh.z(v);
    const double rho_p = density(parent);
    child.p = parent.p + rho_p * kGravity * dz;
    for (int k = 0; k < 100; ++k) {
      const double next = parent.p + 0.5 * (rho_p + density(child)) * kGravity * dz;
      const bool done = std::abs(next - child.p) <= 1e-15 * std::abs(next);
      child.p = next;
      if (done) break;
    }
  }
  return st;
}

Scenario build_scenario(const ScenarioConfig& config) {
  Scenario sc;
  sc.config = config;
  WellModel& m = sc.model;
  std::vector<std::string> problems;
  try {
    m.fluid = make_fluid(config.fluid);
    std::vector<BranchSpec> branches;
    for (const auto& b : config.well.branches) branches.push_back({b.name, b.from, b.to, b.segments, b.radius});
    m.mesh = build_well_mesh(branches, config.well.root, config.well.radius);
  } catch (const Error& e) {
    throw ConfigError({std::string("well: ") + e.what()});
  }
  m.dfm = config.dfm;
  m.friction = config.friction;
  for (std::size_t k = 0; k < config.feeds.size(); ++k) {
    const auto& z = config.feeds[k];
    try {
      FeedZone f;
      f.node = select_node(m.mesh, z.node);
      f.pressure = z.pressure;
      f.temperature = z.temperature;
      f.saturation[index(Phase::gas)] = z.gas_saturation;
      f.saturation[index(Phase::liquid)] = 1.0 - z.gas_saturation;
      f.wi_darcy = z.wi_darcy;
      f.wi_fourier = z.wi_fourier;
      f.relperm_exponent = z.relperm_exponent;
      m.feeds.push_back(f);
    } catch (const Error& e) {
      problems.push_back("feed_zones[" + std::to_string(k) + "]: " + e.what());
    }
  }
  if (config.inlet) {
    try {
      InletBoundary in;
      in.node = select_node(m.mesh, config.inlet->node);
      in.section = m.mesh.edge(m.mesh.incident_edges(in.node).front()).section;
      in.velocity[index(Phase::gas)] = config.inlet->gas_velocity;
      in.velocity[index(Phase::liquid)] = config.inlet->liquid_velocity;
      in.temperature = config.inlet->temperature;
      m.inlet = in;
    } catch (const Error& e) {
      problems.push_back(std::string("inlet: ") + e.what());
    }
  }
  m.monitor.min_head_pressure = config.monitor.min_head_pressure;
  m.monitor.max_rate = config.monitor.max_mass_rate / m.fluid->molar_mass(0);
  m.monitor.initial = config.monitor.initial;
  if (!problems.empty()) throw ConfigError(problems);

  const Phase phase = config.initial.phase == "gas" ? Phase::gas : Phase::liquid;
  const double T = m.fluid->isothermal() ? config.fluid.temperature : config.initial.temperature;
  try {
    sc.initial = hydrostatic_state(m.mesh, *m.fluid, T, config.initial.head_pressure, phase);
  } catch (const Error& e) {
    throw ConfigError({std::string("initial: ") + e.what()});
  }
  return sc;
}

// ---------------------------------------------------------------- outputs

OutputWriter::OutputWriter(const Scenario& scenario, std::string directory) : scenario_(scenario), dir_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
  const std::string path = dir_ + "/history.csv";
  history_.open(path);
  if (!history_) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
  history_ << history_header(scenario_.model.mesh.leaves()) << '\n';
  history_.flush();
}

std::string OutputWriter::history_header(const std::vector<int>& leaves) {
  std::string h = "t_s,dt_s,newton_iterations,q_kg_s,q_mol_s,p_head_Pa";
  for (int leaf : leaves) h += ",p_leaf" + std::to_string(leaf) + "_Pa";
  h += ",gas_volume_m3,constraint";
  return h;
}

void OutputWriter::on_step(const StepRecord& r, const std::vector<NodeState>& states, const SystemEvaluation& ev) {
  history_ << format_double(r.t) << ',' << format_double(r.dt) << ',' << r.iterations << ',' << format_double(r.rate_mass)
           << ',' << format_double(r.rate_molar) << ',' << format_double(r.head_pressure);
  for (double p : r.leaf_pressures) history_ << ',' << format_double(p);
  history_ << ',' << format_double(r.gas_volume) << ',' << to_string(r.constraint) << '\n';
  history_.flush();
  if (!history_) throw IoError("write failure on '" + dir_ + "/history.csv'");
  const auto& times = scenario_.config.output.profile_times;
  while (next_profile_ < times.size() && r.t >= times[next_profile_] * (1.0 - 1e-12)) {
    write_profile(dir_ + "/profile_t" + format_double(times[next_profile_]) + ".csv", states);
    ++next_profile_;
  }
  last_states_ = states;
  last_eval_ = ev;
}

void OutputWriter::write_profile(const std::string& path, const std::vector<NodeState>& states) const {
  std::ofstream o(path);
  if (!o) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
  const auto& mesh = scenario_.model.mesh;
  const auto& fluid = *scenario_.model.fluid;
  o << "node,branch,arc_length_m,z_m,p_Pa,T_K,s_gas,zeta_liquid_mol_m3,zeta_gas_mol_m3,h_liquid_J_mol,h_gas_J_mol\n";
  for (int v = 0; v < mesh.node_count(); ++v) {
    const auto& n = mesh.node(v);
    const auto& s = states[static_cast<std::size_t>(v)];
    o << v << ',' << mesh.branch_names()[static_cast<std::size_t>(n.branch)] << ',' << format_double(n.arc_length) << ','
      << format_double(mesh.z(v)) << ',' << format_double(s.p) << ',' << format_double(s.T) << ','
      << format_double(s.s[index(Phase::gas)]);
    std::array<std::string, kNumPhases> zeta{"nan", "nan"}, h{"nan", "nan"};
    for (Phase a : kPhases) {
      if (!s.phases.contains(a)) continue;
      const auto b = eval_properties(fluid, a, s.p, s.T, s.fractions(a));
      zeta[index(a)] = format_double(b.molar_density.value);
      h[index(a)] = format_double(b.enthalpy.value);
    }
    o << ',' << zeta[index(Phase::liquid)] << ',' << zeta[index(Phase::gas)] << ',' << h[index(Phase::liquid)] << ','
      << h[index(Phase::gas)] << '\n';
  }
  if (!o) throw IoError("write failure on '" + path + "'");
}

void OutputWriter::write_edges(const std::string& path, const SystemEvaluation& ev) const {
  std::ofstream o(path);
  if (!o) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
  const auto& mesh = scenario_.model.mesh;
  o << "edge,parent,child,branch,u_gas_m_s,u_liquid_m_s,u_mixture_m_s\n";
  for (std::size_t a = 0; a < ev.edges.size(); ++a) {
    const auto& e = mesh.edge(static_cast<int>(a));
    const auto& f = ev.edges[a];
    o << a << ',' << e.parent << ',' << e.child << ',' << mesh.branch_names()[static_cast<std::size_t>(e.branch)] << ','
      << format_double(f.u[index(Phase::gas)].v) << ',' << format_double(f.u[index(Phase::liquid)].v) << ','
      << format_double(f.um.v) << '\n';
  }
  if (!o) throw IoError("write failure on '" + path + "'");
}

void OutputWriter::finish(const TransientResult& result) {
  write_profile(dir_ + "/profile_final.csv", result.final_state);
  if (!last_eval_.edges.empty()) write_edges(dir_ + "/edges_final.csv", last_eval_);
  const std::string path = dir_ + "/summary.json";
  std::ofstream o(path);
  if (!o) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
  o << run_summary_json(scenario_, result) << '\n';
}

std::string run_summary_json(const Scenario& scenario, const TransientResult& r) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario.config.name;
  j["completed"] = r.completed;
  if (!r.failure.empty()) j["failure"] = r.failure;
  j["time_s"] = r.time;
  j["steps"] = r.report.steps;
  j["failures"] = r.report.failures;
  j["newton_iterations"] = r.report.iterations;
  j["mean_newton_per_step"] = r.report.steps ? static_cast<double>(r.report.iterations) / r.report.steps : 0.0;
  std::vector<std::string> regimes;
  for (Constraint c : r.report.regime_history)
    if (regimes.empty() || regimes.back() != to_string(c)) regimes.push_back(to_string(c));
  j["regime_sequence"] = regimes;
  double worst = 0.0;
  for (const auto& s : r.history)
    for (double b : s.balance_relative) worst = std::max(worst, b);
  j["max_balance_residual"] = worst;
  if (!r.history.empty()) {
    const auto& last = r.history.back();
    j["final"] = {{"q_kg_s", last.rate_mass}, {"p_head_Pa", last.head_pressure}, {"gas_volume_m3", last.gas_volume},
                  {"constraint", to_string(last.constraint)}};
  }
  return j.dump(2);
}

}  // namespace mswell
