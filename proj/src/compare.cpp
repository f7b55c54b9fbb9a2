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

#include "mswell/compare.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "mswell/errors.hpp"

namespace mswell {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct FluxSample {
  double rl, rg, sigma, um, o;
};

double flux(double u, double v, const FluxSample& x, const DfmParams& p) {
  return gas_flux_t(u, v, x.rl, x.rg, x.sigma, x.um, x.o, p);
}

/// Continuous gas velocity s C0(s) u^m + o s U_d(s).
double continuous_flux(double s, const FluxSample& x, const DfmParams& p) {
  return s * profile_parameter_t(s, x.um, x.rl, x.rg, x.sigma, p) * x.um +
         x.o * drift_term_t(s, x.um, x.rl, x.rg, x.sigma, p);
}

}  // namespace

bool FluxCheckReport::passed() const {
  return consistency_max_error <= 1e-12 && monotonicity_violations == 0 &&
         std::all_of(sign_violations.begin(), sign_violations.end(), [](long n) { return n == 0; }) &&
         profile_violations == 0 && closure_monotonicity_violations == 0;
}

FluxCheckReport flux_property_check(long samples, std::uint64_t seed, const DfmParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  FluxCheckReport r;
  r.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
  constexpr double kStep = 1e-3;
  constexpr double kTol = 1e-12;

  const FluxSample reference{1000.0, 4.0, params.sigma, 0.5, 1.0};
  for (int k = 0; k <= 1000; ++k) {
    const double s = k / 1000.0;
    r.consistency_max_error =
        std::max(r.consistency_max_error, std::abs(flux(s, s, reference, params) - continuous_flux(s, reference, params)));
  }

  for (long n = 0; n < samples; ++n) {
    FluxSample x;
    x.rl = uniform(500.0, 1200.0);
    x.rg = uniform(0.05, 0.5 * x.rl);
    x.sigma = uniform(0.005, 0.1);
    x.um = uniform(-5.0, 5.0);
    x.o = edge_orientation(uniform(0.0, std::numbers::pi / 2.0), unit(rng) < 0.5 ? -1.0 : 1.0);
    const double u = unit(rng);
    const double v = unit(rng);
    const double s = unit(rng);

    r.consistency_max_error = std::max(r.consistency_max_error, std::abs(flux(s, s, x, params) - continuous_flux(s, x, params)));

    const double f = flux(u, v, x, params);
    const double du = flux(std::min(1.0, u + kStep), v, x, params) - f;
    const double dv = flux(u, std::min(1.0, v + kStep), x, params) - f;
    if (du < -kTol || dv > kTol) {
      ++r.monotonicity_violations;
      r.monotonicity_worst = std::max({r.monotonicity_worst, -du, dv});
    }

    if (flux(0.0, v, x, params) > 0.0) ++r.sign_violations[0];
    if (flux(u, 0.0, x, params) < 0.0) ++r.sign_violations[1];
    if (x.um - flux(1.0, v, x, params) > 0.0) ++r.sign_violations[2];
    if (x.um - flux(u, 1.0, x, params) < 0.0) ++r.sign_violations[3];

    const double s2 = std::min(1.0, s + kStep);
    const double c0 = profile_parameter_t(s, x.um, x.rl, x.rg, x.sigma, params);
    const double c02 = profile_parameter_t(s2, x.um, x.rl, x.rg, x.sigma, params);
    const double sc = s * c0;
    const double sc2 = s2 * c02;
    if (sc < 0.0 || sc > 1.0 || sc2 < sc - kTol) ++r.profile_violations;
    const double g = drift_profile_t(s, c0, x.rl, x.rg);
    const double g2 = drift_profile_t(s2, c02, x.rl, x.rg);
    const double kk = kutateladze_t(s, x.um, x.rl, x.rg, x.sigma, params);
    const double kk2 = kutateladze_t(s2, x.um, x.rl, x.rg, x.sigma, params);
    if (g2 > g + kTol || kk2 < kk - kTol) ++r.closure_monotonicity_violations;
  }
  r.seconds = seconds_since(t0);
  return r;
}

BlProblem bl_problem_for(const Scenario& scenario) {
  const ScenarioConfig& c = scenario.config;
  const WellMesh& mesh = scenario.model.mesh;
  if (c.fluid.model != "immiscible" || !c.fluid.isothermal)
    throw ConfigError({"Buckley-Leverett comparison needs an isothermal immiscible fluid"});
  if (!c.inlet || !scenario.model.inlet) throw ConfigError({"Buckley-Leverett comparison needs an inlet block"});
  if (!c.feeds.empty()) throw ConfigError({"Buckley-Leverett comparison does not allow feed zones"});
  const auto leaves = mesh.leaves();
  if (leaves.size() != 1 || scenario.model.inlet->node != leaves.front())
    throw ConfigError({"Buckley-Leverett comparison needs a single column with the inlet at its far end"});
  if (c.time.growth != 1.0 || c.time.initial_dt != c.time.max_dt)
    throw ConfigError({"Buckley-Leverett comparison needs a fixed time step (growth 1, initial_step = max_step)"});
  const int leaf = leaves.front();
  for (const auto& e : mesh.edges())
    if (std::abs(e.angle) > 1e-6 || mesh.z(e.parent) <= mesh.z(e.child))
      throw ConfigError({"Buckley-Leverett comparison needs a vertical column rising towards the head"});

  BlProblem p;
  p.length = mesh.z(mesh.root()) - mesh.z(leaf);
  p.cells = mesh.edge_count();
  p.dt = c.time.initial_dt;
  p.steps = static_cast<int>(std::lround(c.time.final_time / c.time.initial_dt));
  p.inlet_gas_velocity = c.inlet->gas_velocity;
  p.inlet_liquid_velocity = c.inlet->liquid_velocity;
  p.um = p.inlet_gas_velocity + p.inlet_liquid_velocity;
  p.rho_liquid = c.fluid.density[index(Phase::liquid)];
  p.rho_gas = c.fluid.density[index(Phase::gas)];
  p.sigma = c.dfm.sigma;
  p.dfm = c.dfm;
  p.initial.assign(static_cast<std::size_t>(p.cells), c.initial.phase == "gas" ? 1.0 : 0.0);
  return p;
}

BlComparison bl_compare(const Scenario& scenario) {
  const BlProblem problem = bl_problem_for(scenario);
  const WellMesh& mesh = scenario.model.mesh;
  BlComparison out;

  auto t0 = std::chrono::steady_clock::now();
  const TransientResult run =
      run_transient(scenario.model, scenario.initial, scenario.config.time, scenario.config.solver);
  out.model_seconds = seconds_since(t0);
  out.steps = run.report.steps;

  const double z0 = mesh.z(mesh.leaves().front());
  std::vector<std::pair<double, double>> pts;
  for (int v = 0; v < mesh.node_count(); ++v)
    pts.emplace_back(mesh.z(v) - z0, run.final_state[static_cast<std::size_t>(v)].s[index(Phase::gas)]);
  std::sort(pts.begin(), pts.end());
  for (const auto& [z, s] : pts) {
    out.z_model.push_back(z);
    out.s_model.push_back(s);
  }

  t0 = std::chrono::steady_clock::now();
  const BlSolution oracle = bl_solve(problem);
  out.oracle_seconds = seconds_since(t0);
  out.z_oracle = oracle.z;
  out.s_oracle = oracle.s;

  out.difference = compare_profiles(out.z_model, out.s_model, out.z_oracle, out.s_oracle, problem.length);
  out.cell_size = problem.length / problem.cells;
  out.front_cells = std::abs(out.difference.front_a - out.difference.front_b) / out.cell_size;
  return out;
}

SiuComparison siu_compare(const Scenario& scenario) {
  const auto t0 = std::chrono::steady_clock::now();
  SiuComparison out;
  out.mswell = run_transient(scenario.model, scenario.initial, scenario.config.time, scenario.config.solver);
  SiuOptions options;
  options.slip = SlipLaw::dfm;
  out.siu_dfm = siu_run(scenario.model, scenario.initial, options);
  options.slip = SlipLaw::none;
  out.siu_no_slip = siu_run(scenario.model, scenario.initial, options);
  if (!out.siu_dfm.converged || !out.siu_no_slip.converged)
    throw NumericalError("single implicit unknown model did not reach a steady state");

  const auto& final_state = out.mswell.final_state;
  const int root = scenario.model.mesh.root();
  const double p_ms = final_state[static_cast<std::size_t>(root)].p;
  const double q_ms = out.mswell.history.empty() ? 0.0 : out.mswell.history.back().rate_mass;
  out.head_pressure_difference = std::abs(p_ms - out.siu_dfm.head_pressure) / p_ms;
  out.no_slip_head_pressure_difference = std::abs(p_ms - out.siu_no_slip.head_pressure) / p_ms;
  out.rate_difference = std::abs(q_ms - out.siu_dfm.rate_mass) / std::max(std::abs(q_ms), 1e-300);
  for (std::size_t v = 0; v < final_state.size(); ++v) {
    const NodeState& s = final_state[v];
    out.max_pressure_difference = std::max(out.max_pressure_difference, std::abs(s.p - out.siu_dfm.p[v]) / s.p);
    out.max_temperature_difference = std::max(out.max_temperature_difference, std::abs(s.T - out.siu_dfm.T[v]));
    out.max_saturation_difference =
        std::max(out.max_saturation_difference, std::abs(s.s[index(Phase::gas)] - out.siu_dfm.s_gas[v]));
  }
  out.seconds = seconds_since(t0);
  return out;
}

}  // namespace mswell
