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

#include "mswell/dfm.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mswell {

void DfmParams::validate() const {
  std::vector<std::string> problems;
  if (!(B < (2.0 - A) / A)) problems.push_back("dfm: B must be below (2 - A) / A");
  if (!(A > 0.0)) problems.push_back("dfm: A must be positive");
  if (!(B < 1.0)) problems.push_back("dfm: B must be below 1");
  if (!(a1 > 0.0 && a1 < a2 && a2 < 1.0)) problems.push_back("dfm: need 0 < a1 < a2 < 1");
  if (!(Ku >= 0.0 && Ku <= 3.5)) problems.push_back("dfm: Ku must lie in [0, 3.5]");
  if (!(Fv >= 0.0)) problems.push_back("dfm: F_v must be non-negative");
  if (!(sigma > 0.0)) problems.push_back("dfm: surface tension must be positive");
  if (!problems.empty()) throw ConfigError(problems);
}

double characteristic_velocity(double rho_liquid, double rho_gas, double sigma) {
  if (!(rho_liquid > rho_gas)) throw DomainError("characteristic velocity: degenerate densities (rho_liquid <= rho_gas)");
  return characteristic_velocity_t(rho_liquid, rho_gas, sigma);
}

namespace {

using D5 = Dual<5>;

ValueGrad2 unpack(const D5& x) { return {x.v, x.d[0], x.d[1], x.d[2], x.d[3], x.d[4]}; }

}  // namespace

ValueGrad2 profile_parameter(double s, double um, double rho_liquid, double rho_gas, const DfmParams& params) {
  const D5 r = profile_parameter_t(D5::variable(s, 0), D5::variable(um, 1), D5::variable(rho_liquid, 2),
                                   D5::variable(rho_gas, 3), D5::variable(params.sigma, 4), params);
  return unpack(r);
}

ValueGrad2 drift_term(double s, double um, double rho_liquid, double rho_gas, double sigma, const DfmParams& params) {
  const D5 r = drift_term_t(D5::variable(s, 0), D5::variable(um, 1), D5::variable(rho_liquid, 2),
                            D5::variable(rho_gas, 3), D5::variable(sigma, 4), params);
  return unpack(r);
}

GasFlux gas_flux(double u, double v, const EdgeHydroInput& in, const DfmParams& params) {
  using D6 = Dual<6>;
  const D6 f = gas_flux_t(D6::variable(u, 0), D6::variable(v, 1), D6::variable(in.rho_liquid, 2),
                          D6::variable(in.rho_gas, 3), D6::variable(in.sigma, 4), D6::variable(in.um, 5),
                          in.orientation, params);
  return {f.v, f.d};
}

double wall_friction(double um, double rho_m, double mu_m, double radius, double fq) {
  return wall_friction_t(um, rho_m, mu_m, radius, fq);
}

MixtureVelocity mixture_velocity(double dphi, double rho_m, double mu_m, double length, double radius, double fq) {
  if (fq == 0.0 && mu_m == 0.0)
    throw NumericalError("mixture velocity: frictionless momentum (f_q = 0 and mu = 0) has no finite solution");
  const double da_drho = length * fq / (4.0 * radius);
  const double db_dmu = 8.0 * length / (radius * radius);
  const double alpha_a = da_drho * rho_m;
  const double alpha_b = db_dmu * mu_m;
  const double alpha_c = std::sqrt(alpha_b * alpha_b + 4.0 * std::abs(dphi) * alpha_a);
  MixtureVelocity m;
  const double denom = alpha_b + alpha_c;
  m.value = denom > 0.0 ? -2.0 * dphi / denom : 0.0;
  // Implicit differentiation of dphi + (alpha_b + alpha_a |u|) u = 0.
  const double u = m.value;
  const double dr_du = std::max(alpha_b + 2.0 * alpha_a * std::abs(u), std::numeric_limits<double>::min());
  m.d_dphi = -1.0 / dr_du;
  m.d_rho = -(da_drho * std::abs(u) * u) / dr_du;
  m.d_mu = -(db_dmu * u) / dr_du;
  return m;
}

SuperficialVelocities edge_superficial_velocities(PhaseSet q_parent, PhaseSet q_child, const EdgeHydroInput& in,
                                                  const DfmParams& params) {
  const PhaseSet q = q_parent | q_child;
  if (!q.is_both()) {
    if (q.contains(Phase::gas)) return {in.um, 0.0};
    return {0.0, in.um};
  }
  const double ug = gas_flux(in, params).value;
  return {ug, in.um - ug};
}

}  // namespace mswell
