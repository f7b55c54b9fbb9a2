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

// Command-line front end over the mswell C interface.
//
// Exit codes: 0 success, 2 invalid scenario or arguments, 3 solver or model
// failure, 1 anything else (i/o, failed property checks).

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mswell/c_api.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

int exit_code(msw_status s) {
  switch (s) {
    case MSW_OK: return kExitOk;
    case MSW_ERROR_CONFIG:
    case MSW_ERROR_ARGUMENT: return kExitInvalid;
    case MSW_ERROR_SOLVER:
    case MSW_ERROR_DOMAIN:
    case MSW_ERROR_NUMERICAL:
    case MSW_ERROR_MODEL: return kExitSolver;
    default: return kExitOther;
  }
}

int report_error(msw_status s) {
  std::fprintf(stderr, "mswell: %s\n%s\n", msw_status_name(s), msw_last_error());
  return exit_code(s);
}

struct ScenarioDeleter {
  void operator()(msw_scenario* s) const { msw_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<msw_scenario, ScenarioDeleter>;

struct StringDeleter {
  void operator()(char* s) const { msw_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

void print(const OwnedString& s) {
  if (s) std::printf("%s\n", s.get());
}

/// Loads the scenario and applies an optional friction override.
msw_status load(const std::string& path, std::optional<double> friction, ScenarioPtr& out) {
  msw_scenario* raw = nullptr;
  msw_status s = msw_scenario_load(path.c_str(), &raw);
  out.reset(raw);
  if (s == MSW_OK && friction) s = msw_scenario_set_friction(out.get(), *friction);
  return s;
}

int cmd_run(const std::string& path, const std::string& output, std::optional<double> friction) {
  ScenarioPtr sc;
  if (msw_status s = load(path, friction, sc); s != MSW_OK) return report_error(s);
  char* raw = nullptr;
  const msw_status s = msw_run(sc.get(), output.empty() ? nullptr : output.c_str(), &raw);
  OwnedString summary(raw);
  print(summary);
  return s == MSW_OK ? kExitOk : report_error(s);
}

int cmd_validate(const std::string& path, bool canonical) {
  ScenarioPtr sc;
  if (msw_status s = load(path, std::nullopt, sc); s != MSW_OK) return report_error(s);
  char* raw = nullptr;
  msw_status s = canonical ? msw_scenario_to_text(sc.get(), &raw) : msw_scenario_info(sc.get(), &raw);
  OwnedString text(raw);
  if (s != MSW_OK) return report_error(s);
  print(text);
  return kExitOk;
}

int cmd_flux_check(long samples, unsigned long long seed) {
  char* raw = nullptr;
  int passed = 0;
  const msw_status s = msw_flux_check(samples, seed, &raw, &passed);
  OwnedString report(raw);
  if (s != MSW_OK) return report_error(s);
  print(report);
  return passed ? kExitOk : kExitOther;
}

int cmd_compare(const std::string& path, std::optional<double> friction, bool bl) {
  ScenarioPtr sc;
  if (msw_status s = load(path, friction, sc); s != MSW_OK) return report_error(s);
  char* raw = nullptr;
  const msw_status s = bl ? msw_bl_compare(sc.get(), &raw) : msw_siu_compare(sc.get(), &raw);
  OwnedString report(raw);
  if (s != MSW_OK) return report_error(s);
  print(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-segmented geothermal well simulator"};
  app.set_version_flag("--version", std::string(msw_version()));
  app.require_subcommand(1);

  std::string cfg;
  std::string output;
  std::optional<double> friction;
  bool canonical = false;
  long samples = 100000;
  unsigned long long seed = 20260101;

  auto* run = app.add_subcommand("run", "Run a scenario and write its output files");
  run->add_option("config", cfg, "Scenario file")->required();
  run->add_option("-o,--output", output, "Output directory (default: the scenario's)");
  run->add_option("--friction", friction, "Override the wall friction coefficient");

  auto* validate = app.add_subcommand("validate", "Parse and check a scenario");
  validate->add_option("config", cfg, "Scenario file")->required();
  validate->add_flag("--canonical", canonical, "Print the canonical SI form instead of a summary");

  auto* flux = app.add_subcommand("flux-check", "Randomized property checks of the two-point gas flux");
  flux->add_option("--samples", samples, "Number of random samples")->check(CLI::NonNegativeNumber);
  flux->add_option("--seed", seed, "Random seed");

  auto* bl = app.add_subcommand("bl-compare", "Compare a column run with the scalar transport oracle");
  bl->add_option("config", cfg, "Scenario file")->required();

  auto* siu = app.add_subcommand("siu-compare", "Compare with the single implicit unknown well model");
  siu->add_option("config", cfg, "Scenario file")->required();
  siu->add_option("--friction", friction, "Override the wall friction coefficient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (*run) return cmd_run(cfg, output, friction);
  if (*validate) return cmd_validate(cfg, canonical);
  if (*flux) return cmd_flux_check(samples, seed);
  if (*bl) return cmd_compare(cfg, friction, true);
  return cmd_compare(cfg, friction, false);
}
