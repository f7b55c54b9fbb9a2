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

#ifndef MSWELL_DFM_HPP
#define MSWELL_DFM_HPP

#include <array>
#include <string>

#include "mswell/dual.hpp"
#include "mswell/errors.hpp"
#include "mswell/fluid.hpp"

namespace mswell {

/// Slip-law constants of the drift-flux closure.
struct DfmParams {
  double A = 1.2;
  double B = 0.3;
  double a1 = 0.2;
  double a2 = 0.4;
  double Ku = 1.5;
  double Fv = 1.0;
  double sigma = 71.97e-3;  // N/m

  /// Throws Error listing every violated parameter bound.
  void validate() const;
  bool operator==(const DfmParams&) const = default;
};

struct FrictionParams {
  double fq = 0.06;
  bool operator==(const FrictionParams&) const = default;
};

/// Thermodynamic inputs of the two-point gas flux on one edge.
struct EdgeHydroInput {
  double s_child = 0.0;   // gas saturation at v' (away from the root)
  double s_parent = 0.0;  // gas saturation at v
  double rho_liquid = 1000.0;
  double rho_gas = 1.0;
  double sigma = 71.97e-3;
  double um = 0.0;
  double orientation = 1.0;
};

// Closure laws, templated on the scalar type so the same code yields values
// (double) and exact first derivatives (Dual<N>).

template <class S>
S characteristic_velocity_t(const S& rl, const S& rg, const S& sigma) {
  if (!(value_of(rl) > value_of(rg)) || !(value_of(rg) > 0.0))
    throw DomainError("characteristic velocity needs rho_liquid > rho_gas > 0");
  const S base = sigma * kGravity * (rl - rg) / (rl * rl);
  return pow(base, 0.25);
}

template <class S>
S profile_parameter_t(const S& s, const S& um, const S& rl, const S& rg, const S& sigma, const DfmParams& p) {
  const S uc = characteristic_velocity_t(rl, rg, sigma);
  const S vsgf = p.Ku * sqrt(rl / rg) * uc;
  S beta = s;
  if (value_of(vsgf) > 0.0) {
    beta = max(s, p.Fv * s * abs(um) / vsgf);
  } else if (value_of(um) != 0.0 && value_of(s) > 0.0) {
    beta = S(1.0);
  }
  const S gamma = project_unit((beta - p.B) / (1.0 - p.B));
  // A / (1 + (A-1) gamma^2) written so that gamma = 1 gives exactly 1.
  return p.A / (p.A + (p.A - 1.0) * (gamma * gamma - 1.0));
}

/// G(s) = (1 - s C0) / (s C0 sqrt(rho_g / rho_l) + 1 - s C0).
template <class S>
S drift_profile_t(const S& s, const S& c0, const S& rl, const S& rg) {
  const S sc = s * c0;
  return (1.0 - sc) / (sc * sqrt(rg / rl) + 1.0 - sc);
}

/// Three-piece K-tilde law.
template <class S>
S kutateladze_t(const S& s, const S& um, const S& rl, const S& rg, const S& sigma, const DfmParams& p) {
  if (value_of(s) <= p.a1) return 1.53 * s;
  if (value_of(s) >= p.a2) return p.Ku * profile_parameter_t(s, um, rl, rg, sigma, p) * s;
  const S c0a2 = profile_parameter_t(S(p.a2), um, rl, rg, sigma, p);
  const S upper = p.Ku * c0a2 * p.a2;
  return 1.53 * p.a1 * (s - p.a2) / (p.a1 - p.a2) + upper * (s - p.a1) / (p.a2 - p.a1);
}

/// s U_d = G(s) K(s) U_c.
template <class S>
S drift_term_t(const S& s, const S& um, const S& rl, const S& rg, const S& sigma, const DfmParams& p) {
  const S c0 = profile_parameter_t(s, um, rl, rg, sigma, p);
  return drift_profile_t(s, c0, rl, rg) * kutateladze_t(s, um, rl, rg, sigma, p) *
         characteristic_velocity_t(rl, rg, sigma);
}

/// Throws MonotonicityError unless 1.53 a1 <= a2 Ku C0(a2) at the given state.
template <class S>
void check_monotonicity_t(const S& um, const S& rl, const S& rg, const S& sigma, const DfmParams& p) {
  const double c0a2 = value_of(profile_parameter_t(S(p.a2), um, rl, rg, sigma, p));
  if (1.53 * p.a1 > p.a2 * p.Ku * c0a2) {
    throw MonotonicityError("two-point gas flux is not monotone: 1.53 a1 = " + std::to_string(1.53 * p.a1) +
                            " exceeds a2 Ku C0(a2) = " + std::to_string(p.a2 * p.Ku * c0a2) + " (a1 = " +
                            std::to_string(p.a1) + ", a2 = " + std::to_string(p.a2) + ", Ku = " + std::to_string(p.Ku) +
                            ")");
  }
}

/// Monotone two-point gas superficial velocity F(u, v) with u the saturation
/// at v' and v the saturation at v.
template <class S>
S gas_flux_t(const S& u, const S& v, const S& rl, const S& rg, const S& sigma, const S& um, double o,
             const DfmParams& p) {
  check_monotonicity_t(um, rl, rg, sigma, p);
  const S uc = characteristic_velocity_t(rl, rg, sigma);
  const S c0u = profile_parameter_t(u, um, rl, rg, sigma, p);
  const S c0v = profile_parameter_t(v, um, rl, rg, sigma, p);
  const S ku = kutateladze_t(u, um, rl, rg, sigma, p);
  const S kv = kutateladze_t(v, um, rl, rg, sigma, p);
  const S gu = drift_profile_t(u, c0u, rl, rg);
  const S gv = drift_profile_t(v, c0v, rl, rg);
  const S drift = uc * o;
  return u * c0u * positive_part(um) + v * c0v * negative_part(um) + gv * ku * positive_part(drift) +
         gu * kv * negative_part(drift);
}

/// Wall friction per unit length, T = -(8 mu / r^2 + fq rho |u| / (4 r)) u.
template <class S>
S wall_friction_t(const S& um, const S& rho, const S& mu, double r, double fq) {
  return -(8.0 * mu / (r * r) + fq * rho * abs(um) / (4.0 * r)) * um;
}

// Scalar API with explicit partials.

struct ValueGrad2 {
  double value = 0.0;
  double d_s = 0.0;
  double d_um = 0.0;
  double d_rho_liquid = 0.0;
  double d_rho_gas = 0.0;
  double d_sigma = 0.0;
};

double characteristic_velocity(double rho_liquid, double rho_gas, double sigma);
ValueGrad2 profile_parameter(double s, double um, double rho_liquid, double rho_gas, const DfmParams& params);
ValueGrad2 drift_term(double s, double um, double rho_liquid, double rho_gas, double sigma, const DfmParams& params);

/// Flux value and partials, ordered (u, v, rho_l, rho_g, sigma, um).
struct GasFlux {
  double value = 0.0;
  std::array<double, 6> d{};
};
GasFlux gas_flux(double u, double v, const EdgeHydroInput& in, const DfmParams& params);
inline GasFlux gas_flux(const EdgeHydroInput& in, const DfmParams& params) {
  return gas_flux(in.s_child, in.s_parent, in, params);
}

double wall_friction(double um, double rho_m, double mu_m, double radius, double fq);

struct MixtureVelocity {
  double value = 0.0;
  double d_dphi = 0.0;
  double d_rho = 0.0;
  double d_mu = 0.0;
};

/// Closed-form solution of dphi + (alpha_b + alpha_a |u|) u = 0.
MixtureVelocity mixture_velocity(double dphi, double rho_m, double mu_m, double length, double radius, double fq);

/// Dual-valued mixture velocity chained through the scalar partials.
template <int N>
Dual<N> mixture_velocity_t(const Dual<N>& dphi, const Dual<N>& rho, const Dual<N>& mu, double length, double radius,
                           double fq) {
  const MixtureVelocity m = mixture_velocity(dphi.v, rho.v, mu.v, length, radius, fq);
  Dual<N> r(m.value);
  for (int k = 0; k < N; ++k) r.d[k] = m.d_dphi * dphi.d[k] + m.d_rho * rho.d[k] + m.d_mu * mu.d[k];
  return r;
}

struct SuperficialVelocities {
  double gas = 0.0;
  double liquid = 0.0;
};

/// u^g = F(s_{v'}, s_v), u^l = u^m - u^g; a single-phase edge carries u^m
/// in its only phase.
SuperficialVelocities edge_superficial_velocities(PhaseSet q_parent, PhaseSet q_child, const EdgeHydroInput& in,
                                                  const DfmParams& params);

}  // namespace mswell

#endif  // MSWELL_DFM_HPP
