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

#include "mswell/bl_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mswell/errors.hpp"

namespace mswell {

BlFlux bl_interface_flux(double s_below, double s_above, const BlProblem& p) {
  EdgeHydroInput in;
  in.s_child = s_below;
  in.s_parent = s_above;
  in.rho_liquid = p.rho_liquid;
  in.rho_gas = p.rho_gas;
  in.sigma = p.sigma;
  in.um = p.um;
  in.orientation = 1.0;
  const GasFlux f = gas_flux(in, p.dfm);
  return {f.value, f.d[0], f.d[1]};
}

BlSolution bl_solve(const BlProblem& p) {
  if (p.cells < 1 || p.steps < 0 || !(p.dt > 0.0) || !(p.length > 0.0))
    throw DomainError("Buckley-Leverett problem: cells, steps, dt and length must be positive");
  if (std::abs(p.inlet_gas_velocity + p.inlet_liquid_velocity - p.um) > 1e-12 * std::max(1.0, std::abs(p.um)))
    throw DomainError("Buckley-Leverett problem: inlet phase velocities must add up to the mixture velocity");
  const auto n = static_cast<std::size_t>(p.cells);
  const double dz = p.length / p.cells;
  BlSolution out;
  out.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.z[i] = (static_cast<double>(i) + 0.5) * dz;
  out.s = p.initial.empty() ? std::vector<double>(n, 0.0) : p.initial;
  if (out.s.size() != n) throw DomainError("Buckley-Leverett problem: initial profile size differs from cell count");

  std::vector<double> a(n), b(n), c(n), r(n), x(n);
  for (int step = 0; step < p.steps; ++step) {
    const std::vector<double> old = out.s;
    std::vector<double>& s = out.s;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      // Residual (s - old) dz / dt + F_top - F_bottom per cell.
      double rmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = c[i] = 0.0;
        b[i] = dz / p.dt;
        r[i] = (s[i] - old[i]) * dz / p.dt;
        if (i == 0) {
          r[i] -= p.inlet_gas_velocity;
        } else {
          const BlFlux f = bl_interface_flux(s[i - 1], s[i], p);
          r[i] -= f.value;
          a[i] -= f.d_below;
          b[i] -= f.d_above;
        }
        if (i + 1 == n) {
          const BlFlux f = bl_interface_flux(s[i], s[i], p);
          r[i] += f.value;
          b[i] += f.d_below + f.d_above;
        } else {
          const BlFlux f = bl_interface_flux(s[i], s[i + 1], p);
          r[i] += f.value;
          b[i] += f.d_below;
          c[i] += f.d_above;
        }
        rmax = std::max(rmax, std::abs(r[i]));
      }
      if (rmax <= 1e-14 * std::max(1.0, std::abs(p.inlet_gas_velocity))) {
        converged = true;
        break;
      }
      ++out.newton_iterations;
      // Thomas algorithm on a x_{i-1} + b x_i + c x_{i+1} = -r.
      std::vector<double> cp(n), dp(n);
      cp[0] = c[0] / b[0];
      dp[0] = -r[0] / b[0];
      for (std::size_t i = 1; i < n; ++i) {
        const double m = b[i] - a[i] * cp[i - 1];
        if (m == 0.0) throw NumericalError("Buckley-Leverett oracle: singular tridiagonal system");
        cp[i] = c[i] / m;
        dp[i] = (-r[i] - a[i] * dp[i - 1]) / m;
      }
      x[n - 1] = dp[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
      double dmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::clamp(s[i] + x[i], 0.0, 1.0);
        dmax = std::max(dmax, std::abs(x[i]));
      }
      if (dmax <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalError("Buckley-Leverett oracle: Newton did not converge at step " + std::to_string(step));
    out.inflow_volume += p.dt * p.inlet_gas_velocity;
    out.outflow_volume += p.dt * bl_interface_flux(s[n - 1], s[n - 1], p).value;
    out.time += p.dt;
  }
  return out;
}

double front_position(const std::vector<double>& z, const std::vector<double>& s) {
  if (s.empty()) return 0.0;
  const double half = 0.5 * *std::max_element(s.begin(), s.end());
  double front = z.front();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] >= half && s[i] > 0.0) front = std::max(front, z[i]);
  return front;
}

namespace {

double interpolate(const std::vector<double>& z, const std::vector<double>& s, double x) {
  if (x <= z.front()) return s.front();
  if (x >= z.back()) return s.back();
  const auto it = std::upper_bound(z.begin(), z.end(), x);
  const auto k = static_cast<std::size_t>(it - z.begin());
  const double w = (x - z[k - 1]) / (z[k] - z[k - 1]);
  return (1.0 - w) * s[k - 1] + w * s[k];
}

}  // namespace

ProfileDifference compare_profiles(const std::vector<double>& za, const std::vector<double>& sa,
                                   const std::vector<double>& zb, const std::vector<double>& sb, double length) {
  std::vector<double> pts = za;
  pts.insert(pts.end(), zb.begin(), zb.end());
  pts.push_back(0.0);
  pts.push_back(length);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  ProfileDifference d;
  // Both profiles are linear between consecutive breakpoints; integrate
  // |difference| exactly, splitting at sign changes.
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double x0 = pts[k], x1 = pts[k + 1];
    const double e0 = interpolate(za, sa, x0) - interpolate(zb, sb, x0);
    const double e1 = interpolate(za, sa, x1) - interpolate(zb, sb, x1);
    const double h = x1 - x0;
    if (e0 * e1 >= 0.0) d.l1 += 0.5 * h * (std::abs(e0) + std::abs(e1));
    else d.l1 += 0.5 * h * (e0 * e0 + e1 * e1) / (std::abs(e0) + std::abs(e1));
    d.linf = std::max({d.linf, std::abs(e0), std::abs(e1)});
  }
  d.l1 /= length;
  d.front_a = front_position(za, sa);
  d.front_b = front_position(zb, sb);
  return d;
}

}  // namespace mswell
