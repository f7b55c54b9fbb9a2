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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mswell/c_api.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string scenario(const char* name) { return std::string(MSWELL_SCENARIO_DIR) + "/" + name; }

/// Takes ownership of a returned string.
std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  msw_string_free(s);
  return out;
}

const char* kTiny = R"(name: tiny
well:
  root: [0 m, 0 m, 0 m]
  radius: 0.05 m
  branches:
    - name: column
      from: [0 m, 0 m, 0 m]
      to: [0 m, 0 m, -50 m]
      segments: 5
fluid:
  model: water
feed_zones:
  - branch: column
    pressure: 1.5e6 Pa
    temperature: 400 K
    darcy_index: 1e-12 m
    fourier_index: 10 W/K
monitoring:
  min_head_pressure: 2e5 Pa
  max_mass_rate: 1 kg/s
initial:
  temperature: 300 K
  head_pressure: 2e5 Pa
time:
  initial_step: 1 s
  max_step: 10 s
  final_time: 20 s
)";

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(msw_version()).size() > 0);
  CHECK(std::string(msw_status_name(MSW_OK)) != std::string(msw_status_name(MSW_ERROR_CONFIG)));
  CHECK(std::string(msw_status_name(static_cast<msw_status>(99))).size() > 0);
  msw_string_free(nullptr);
}

TEST_CASE("null arguments are rejected") {
  msw_scenario* sc = nullptr;
  CHECK(msw_scenario_load(nullptr, &sc) == MSW_ERROR_ARGUMENT);
  CHECK(msw_scenario_parse(kTiny, nullptr) == MSW_ERROR_ARGUMENT);
  char* text = nullptr;
  CHECK(msw_scenario_to_text(nullptr, &text) == MSW_ERROR_ARGUMENT);
  CHECK(text == nullptr);
  CHECK(std::string(msw_last_error()).size() > 0);
  msw_scenario_free(nullptr);
}

TEST_CASE("configuration errors carry the parser's problems") {
  msw_scenario* sc = nullptr;
  CHECK(msw_scenario_parse("", &sc) == MSW_ERROR_CONFIG);
  CHECK(sc == nullptr);
  const std::string err = msw_last_error();
  CHECK(err.find("missing required block 'well'") != std::string::npos);
  CHECK(msw_scenario_load("/nonexistent/x.cfg", &sc) == MSW_ERROR_CONFIG);
}

TEST_CASE("scenario text and info") {
  msw_scenario* sc = nullptr;
  REQUIRE(msw_scenario_load(scenario("chair.cfg").c_str(), &sc) == MSW_OK);
  char* raw = nullptr;
  REQUIRE(msw_scenario_info(sc, &raw) == MSW_OK);
  const auto info = json::parse(take(raw));
  CHECK(info["name"] == "chair");
  CHECK(info["nodes"].get<int>() == 181);
  CHECK(info["edges"].get<int>() == 180);
  CHECK(info["leaves"].size() == 2);

  REQUIRE(msw_scenario_to_text(sc, &raw) == MSW_OK);
  const std::string text = take(raw);
  msw_scenario* again = nullptr;
  REQUIRE(msw_scenario_parse(text.c_str(), &again) == MSW_OK);
  REQUIRE(msw_scenario_to_text(again, &raw) == MSW_OK);
  CHECK(take(raw) == text);

  CHECK(msw_scenario_set_friction(sc, -1.0) != MSW_OK);
  CHECK(msw_scenario_set_friction(sc, 0.001) == MSW_OK);
  REQUIRE(msw_scenario_to_text(sc, &raw) == MSW_OK);
  CHECK(take(raw).find("friction_factor: 0.001") != std::string::npos);
  msw_scenario_free(again);
  msw_scenario_free(sc);
}

TEST_CASE("run writes outputs and a summary") {
  msw_scenario* sc = nullptr;
  REQUIRE(msw_scenario_parse(kTiny, &sc) == MSW_OK);
  const fs::path dir = fs::temp_directory_path() / "mswell_test_c_api_run";
  fs::remove_all(dir);
  char* raw = nullptr;
  REQUIRE(msw_run(sc, dir.c_str(), &raw) == MSW_OK);
  const auto summary = json::parse(take(raw));
  CHECK(summary["completed"] == true);
  CHECK(summary["time_s"].get<double>() == doctest::Approx(20.0));
  for (const char* f : {"history.csv", "profile_final.csv", "edges_final.csv", "summary.json"})
    CHECK(fs::exists(dir / f));
  fs::remove_all(dir);

  CHECK(msw_run(sc, "/proc/forbidden/dir", &raw) == MSW_ERROR_IO);
  msw_scenario_free(sc);
}

TEST_CASE("flux check reports its samples") {
  char* raw = nullptr;
  int passed = 0;
  REQUIRE(msw_flux_check(2000, 5, &raw, &passed) == MSW_OK);
  const auto report = json::parse(take(raw));
  CHECK(passed == 1);
  CHECK(report["samples"].get<long>() == 2000);
  CHECK(msw_flux_check(-1, 5, &raw, &passed) == MSW_ERROR_ARGUMENT);
}

TEST_CASE("comparisons reject unsuitable scenarios") {
  msw_scenario* sc = nullptr;
  REQUIRE(msw_scenario_load(scenario("chair.cfg").c_str(), &sc) == MSW_OK);
  char* raw = nullptr;
  CHECK(msw_bl_compare(sc, &raw) != MSW_OK);
  CHECK(raw == nullptr);
  CHECK(msw_siu_compare(sc, &raw) == MSW_ERROR_MODEL);
  msw_scenario_free(sc);
}
