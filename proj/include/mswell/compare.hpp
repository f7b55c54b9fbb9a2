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

#ifndef MSWELL_COMPARE_HPP
#define MSWELL_COMPARE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mswell/bl_oracle.hpp"
#include "mswell/scenario.hpp"
#include "mswell/siu.hpp"

namespace mswell {

/// Randomized checks of the two-point gas flux and its closure laws.
struct FluxCheckReport {
  long samples = 0;
  double consistency_max_error = 0.0;  // |F(s,s) - f(s)| on the grid and on samples
  long monotonicity_violations = 0;
  double monotonicity_worst = 0.0;
  std::array<long, 4> sign_violations{};  // F(0,v) <= 0, F(u,0) >= 0, um - F(1,v) <= 0, um - F(u,1) >= 0
  long profile_violations = 0;            // s C0 outside [0, 1] or decreasing
  long closure_monotonicity_violations = 0;  // G increasing or K-tilde decreasing
  double seconds = 0.0;

  bool passed() const;
};

FluxCheckReport flux_property_check(long samples, std::uint64_t seed, const DfmParams& params = {});

/// Compositional run against the scalar oracle on the same column.
struct BlComparison {
  ProfileDifference difference;
  double cell_size = 0.0;
  double front_cells = 0.0;  // |front difference| / cell size
  int steps = 0;
  double model_seconds = 0.0;
  double oracle_seconds = 0.0;
  std::vector<double> z_model, s_model, z_oracle, s_oracle;
};

/// Oracle problem matching a single-column immiscible scenario with an
/// inlet, fixed step and no feed zones.
BlProblem bl_problem_for(const Scenario& scenario);
BlComparison bl_compare(const Scenario& scenario);

struct SiuComparison {
  TransientResult mswell;
  SiuResult siu_dfm;
  SiuResult siu_no_slip;
  double head_pressure_difference = 0.0;  // |p_MS - p_SIU-DFM| / p_MS
  double rate_difference = 0.0;
  double no_slip_head_pressure_difference = 0.0;
  double max_pressure_difference = 0.0;  // over nodes, relative
  double max_temperature_difference = 0.0;  // K
  double max_saturation_difference = 0.0;
  double seconds = 0.0;
};

SiuComparison siu_compare(const Scenario& scenario);

}  // namespace mswell

#endif  // MSWELL_COMPARE_HPP
