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

#ifndef MSWELL_BL_ORACLE_HPP
#define MSWELL_BL_ORACLE_HPP

#include <vector>

#include "mswell/dfm.hpp"

namespace mswell {

/// Scalar transport of the gas saturation at fixed mixture velocity on a
/// vertical column, z = 0 at the inlet (bottom).
struct BlProblem {
  double length = 100.0;  // m
  int cells = 200;
  double dt = 0.25;       // s
  int steps = 200;
  double um = 0.5;                   // m/s
  double inlet_gas_velocity = 0.55;  // m/s
  double inlet_liquid_velocity = -0.05;
  std::vector<double> initial;       // per cell; empty means liquid-filled
  double rho_liquid = 1000.0;
  double rho_gas = 4.0;
  double sigma = 71.97e-3;
  DfmParams dfm;
};

struct BlSolution {
  std::vector<double> z;  // cell centers
  std::vector<double> s;  // gas saturation
  double time = 0.0;
  int newton_iterations = 0;
  double inflow_volume = 0.0;   // per unit section, m
  double outflow_volume = 0.0;
};

/// Implicit Euler, cell-centered finite volumes with the two-point gas flux;
/// prescribed inlet flux, upwind outflow at the top.
BlSolution bl_solve(const BlProblem& problem);

/// Gas flux F(s_below, s_above) through an interface, with partials.
struct BlFlux {
  double value, d_below, d_above;
};
BlFlux bl_interface_flux(double s_below, double s_above, const BlProblem& problem);

/// Highest position where s reaches half of its maximum.
double front_position(const std::vector<double>& z, const std::vector<double>& s);

struct ProfileDifference {
  double l1 = 0.0;    // (1/H) integral of |s_a - s_b|
  double linf = 0.0;
  double front_a = 0.0;
  double front_b = 0.0;
};

/// Compares two piecewise-linear profiles over [0, length].
ProfileDifference compare_profiles(const std::vector<double>& za, const std::vector<double>& sa,
                                   const std::vector<double>& zb, const std::vector<double>& sb, double length);

}  // namespace mswell

#endif  // MSWELL_BL_ORACLE_HPP
