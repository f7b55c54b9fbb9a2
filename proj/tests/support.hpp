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

#ifndef MSWELL_TESTS_SUPPORT_HPP
#define MSWELL_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mswell/assembly.hpp"
#include "mswell/fluid.hpp"
#include "mswell/well_graph.hpp"

namespace testing {

/// Seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b, double floor = 0.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor, 1e-300});
}

inline std::string scenario_path(const std::string& name) { return std::string(MSWELL_SCENARIO_DIR) + "/" + name; }

/// A water state at node pressure p: liquid below saturation, gas above,
/// two-phase at T_sat(p) with the given gas saturation.
inline mswell::NodeState water_state(const mswell::FluidModel& fluid, mswell::PhaseSet q, double p, double T,
                                     double s_gas) {
  using namespace mswell;
  NodeState st;
  st.phases = q;
  st.p = p;
  if (q.is_both()) {
    st.T = saturation_temperature(fluid, p);
    st.s = {1.0 - s_gas, s_gas};
  } else if (q.contains(Phase::gas)) {
    st.T = T;
    st.s = {0.0, 1.0};
  } else {
    st.T = T;
    st.s = {1.0, 0.0};
  }
  set_pure_phase_fractions(st, fluid);
  return st;
}

/// A 100 m vertical water producer fed at the bottom, fast to run.
inline std::string small_producer_text() {
  return R"(name: small
well:
  root: [0 m, 0 m, 0 m]
  radius: 0.05 m
  branches:
    - name: column
      from: [0 m, 0 m, 0 m]
      to: [0 m, 0 m, -100 m]
      segments: 10
fluid:
  model: water
  saturation_law: quartic
feed_zones:
  - branch: column
    pressure: 3e6 Pa
    temperature: 480 K
    darcy_index: 1e-12 m
    fourier_index: 10 W/K
monitoring:
  min_head_pressure: 2e5 Pa
  max_mass_rate: 3 kg/s
  initial: pressure
initial:
  temperature: 300 K
  head_pressure: 2e5 Pa
  phase: liquid
time:
  initial_step: 1 s
  max_step: 50 s
  final_time: 600 s
output:
  directory: small_output
)";
}

}  // namespace testing

#endif  // MSWELL_TESTS_SUPPORT_HPP
