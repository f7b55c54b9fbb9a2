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

#include "mswell/c_api.h"

#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "mswell/compare.hpp"
#include "mswell/errors.hpp"
#include "mswell/scenario.hpp"

struct msw_scenario {
  mswell::ScenarioConfig config;
  std::unique_ptr<mswell::Scenario> built;
};

namespace {

using nlohmann::ordered_json;

thread_local std::string g_last_error;

msw_status fail(msw_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

/// Runs f, mapping exceptions to status codes.
template <class F>
msw_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const mswell::ConfigError& e) {
    return fail(MSW_ERROR_CONFIG, e.what());
  } catch (const mswell::SolverFailure& e) {
    return fail(MSW_ERROR_SOLVER, e.what());
  } catch (const mswell::DomainError& e) {
    return fail(MSW_ERROR_DOMAIN, e.what());
  } catch (const mswell::NumericalError& e) {
    return fail(MSW_ERROR_NUMERICAL, e.what());
  } catch (const mswell::ModelAssumptionError& e) {
    return fail(MSW_ERROR_MODEL, e.what());
  } catch (const mswell::IoError& e) {
    return fail(MSW_ERROR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(MSW_ERROR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(MSW_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(MSW_ERROR_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

msw_status make_scenario(mswell::ScenarioConfig config, msw_scenario** out) {
  auto s = std::make_unique<msw_scenario>();
  s->config = std::move(config);
  s->built = std::make_unique<mswell::Scenario>(mswell::build_scenario(s->config));
  *out = s.release();
  return MSW_OK;
}

ordered_json siu_json(const mswell::SiuResult& r) {
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"constraint", mswell::to_string(r.constraint)},
          {"head_pressure_Pa", r.head_pressure},
          {"q_kg_s", r.rate_mass},
          {"warnings", r.warnings}};
}

}  // namespace

extern "C" {

const char* msw_version(void) { return MSWELL_VERSION; }

const char* msw_last_error(void) { return g_last_error.c_str(); }

const char* msw_status_name(msw_status status) {
  switch (status) {
    case MSW_OK: return "ok";
    case MSW_ERROR_CONFIG: return "config error";
    case MSW_ERROR_SOLVER: return "solver failure";
    case MSW_ERROR_DOMAIN: return "domain error";
    case MSW_ERROR_NUMERICAL: return "numerical error";
    case MSW_ERROR_MODEL: return "model assumption violated";
    case MSW_ERROR_IO: return "i/o error";
    case MSW_ERROR_ARGUMENT: return "invalid argument";
    case MSW_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void msw_string_free(char* text) { std::free(text); }

msw_status msw_scenario_load(const char* path, msw_scenario** out) {
  if (!path || !out) return fail(MSW_ERROR_ARGUMENT, "msw_scenario_load: null argument");
  *out = nullptr;
  return guarded([&] { return make_scenario(mswell::load_scenario(path), out); });
}

msw_status msw_scenario_parse(const char* text, msw_scenario** out) {
  if (!text || !out) return fail(MSW_ERROR_ARGUMENT, "msw_scenario_parse: null argument");
  *out = nullptr;
  return guarded([&] { return make_scenario(mswell::parse_scenario(text), out); });
}

void msw_scenario_free(msw_scenario* scenario) { delete scenario; }

msw_status msw_scenario_to_text(const msw_scenario* scenario, char** text) {
  if (!scenario || !text) return fail(MSW_ERROR_ARGUMENT, "msw_scenario_to_text: null argument");
  return guarded([&] {
    *text = copy_string(mswell::serialize_scenario(scenario->config));
    return MSW_OK;
  });
}

msw_status msw_scenario_info(const msw_scenario* scenario, char** json) {
  if (!scenario || !json) return fail(MSW_ERROR_ARGUMENT, "msw_scenario_info: null argument");
  return guarded([&] {
    const auto& mesh = scenario->built->model.mesh;
    ordered_json j;
    j["name"] = scenario->config.name;
    j["fluid"] = scenario->config.fluid.model;
    j["nodes"] = mesh.node_count();
    j["edges"] = mesh.edge_count();
    j["branches"] = mesh.branch_names();
    j["leaves"] = mesh.leaves();
    j["feed_zones"] = scenario->config.feeds.size();
    j["inlet"] = scenario->config.inlet.has_value();
    *json = copy_string(j.dump(2));
    return MSW_OK;
  });
}

msw_status msw_scenario_set_friction(msw_scenario* scenario, double fq) {
  if (!scenario) return fail(MSW_ERROR_ARGUMENT, "msw_scenario_set_friction: null scenario");
  if (!(fq >= 0.0)) return fail(MSW_ERROR_ARGUMENT, "friction coefficient must be non-negative");
  return guarded([&] {
    mswell::ScenarioConfig c = scenario->config;
    c.friction.fq = fq;
    auto built = std::make_unique<mswell::Scenario>(mswell::build_scenario(c));
    scenario->config = std::move(c);
    scenario->built = std::move(built);
    return MSW_OK;
  });
}

msw_status msw_run(const msw_scenario* scenario, const char* output_directory, char** summary_json) {
  if (!scenario || !summary_json) return fail(MSW_ERROR_ARGUMENT, "msw_run: null argument");
  *summary_json = nullptr;
  return guarded([&] {
    const mswell::Scenario& s = *scenario->built;
    mswell::OutputWriter writer(s, output_directory ? output_directory : s.config.output.directory);
    const mswell::TransientResult result = mswell::run_transient(
        s.model, s.initial, s.config.time, s.config.solver,
        [&](const mswell::StepRecord& r, const std::vector<mswell::NodeState>& states,
            const mswell::SystemEvaluation& ev) { writer.on_step(r, states, ev); },
        true);
    writer.finish(result);
    *summary_json = copy_string(mswell::run_summary_json(s, result));
    if (!result.completed) return fail(MSW_ERROR_SOLVER, result.failure);
    return MSW_OK;
  });
}

msw_status msw_bl_compare(const msw_scenario* scenario, char** report_json) {
  if (!scenario || !report_json) return fail(MSW_ERROR_ARGUMENT, "msw_bl_compare: null argument");
  *report_json = nullptr;
  return guarded([&] {
    const mswell::BlComparison c = mswell::bl_compare(*scenario->built);
    ordered_json j;
    j["scenario"] = scenario->config.name;
    j["steps"] = c.steps;
    j["l1"] = c.difference.l1;
    j["linf"] = c.difference.linf;
    j["front_model_m"] = c.difference.front_a;
    j["front_oracle_m"] = c.difference.front_b;
    j["front_difference_cells"] = c.front_cells;
    j["cell_size_m"] = c.cell_size;
    j["model_seconds"] = c.model_seconds;
    j["oracle_seconds"] = c.oracle_seconds;
    j["model_profile"] = {{"z_m", c.z_model}, {"s_gas", c.s_model}};
    j["oracle_profile"] = {{"z_m", c.z_oracle}, {"s_gas", c.s_oracle}};
    *report_json = copy_string(j.dump(2));
    return MSW_OK;
  });
}

msw_status msw_siu_compare(const msw_scenario* scenario, char** report_json) {
  if (!scenario || !report_json) return fail(MSW_ERROR_ARGUMENT, "msw_siu_compare: null argument");
  *report_json = nullptr;
  return guarded([&] {
    const mswell::SiuComparison c = mswell::siu_compare(*scenario->built);
    const auto& hist = c.mswell.history;
    ordered_json j;
    j["scenario"] = scenario->config.name;
    j["friction_factor"] = scenario->config.friction.fq;
    j["mswell"] = {{"steps", c.mswell.report.steps},
                   {"newton_iterations", c.mswell.report.iterations},
                   {"constraint", mswell::to_string(c.mswell.constraint)},
                   {"head_pressure_Pa", hist.empty() ? 0.0 : hist.back().head_pressure},
                   {"q_kg_s", hist.empty() ? 0.0 : hist.back().rate_mass}};
    j["siu_dfm"] = siu_json(c.siu_dfm);
    j["siu_no_slip"] = siu_json(c.siu_no_slip);
    j["head_pressure_relative_difference"] = c.head_pressure_difference;
    j["rate_relative_difference"] = c.rate_difference;
    j["no_slip_head_pressure_relative_difference"] = c.no_slip_head_pressure_difference;
    j["profile"] = {{"max_pressure_relative_difference", c.max_pressure_difference},
                    {"max_temperature_difference_K", c.max_temperature_difference},
                    {"max_gas_saturation_difference", c.max_saturation_difference}};
    j["seconds"] = c.seconds;
    *report_json = copy_string(j.dump(2));
    return MSW_OK;
  });
}

msw_status msw_flux_check(long samples, unsigned long long seed, char** report_json, int* passed) {
  if (!report_json) return fail(MSW_ERROR_ARGUMENT, "msw_flux_check: null argument");
  if (samples < 0) return fail(MSW_ERROR_ARGUMENT, "sample count must be non-negative");
  *report_json = nullptr;
  return guarded([&] {
    const mswell::FluxCheckReport r = mswell::flux_property_check(samples, seed);
    ordered_json j;
    j["samples"] = r.samples;
    j["seed"] = seed;
    j["consistency_max_error"] = r.consistency_max_error;
    j["monotonicity_violations"] = r.monotonicity_violations;
    j["monotonicity_worst"] = r.monotonicity_worst;
    j["sign_violations"] = {{"F(0,v) <= 0", r.sign_violations[0]},
                            {"F(u,0) >= 0", r.sign_violations[1]},
                            {"um - F(1,v) <= 0", r.sign_violations[2]},
                            {"um - F(u,1) >= 0", r.sign_violations[3]}};
    j["profile_violations"] = r.profile_violations;
    j["closure_monotonicity_violations"] = r.closure_monotonicity_violations;
    j["passed"] = r.passed();
    j["seconds"] = r.seconds;
    if (passed) *passed = r.passed() ? 1 : 0;
    *report_json = copy_string(j.dump(2));
    return MSW_OK;
  });
}

}  // extern "C"
