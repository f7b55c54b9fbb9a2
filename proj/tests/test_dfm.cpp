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

#include <cmath>
#include <numbers>

#include "mswell/compare.hpp"
#include "mswell/dfm.hpp"
#include "mswell/errors.hpp"
#include "mswell/well_graph.hpp"
#include "oracles/derived_values.hpp"
#include "support.hpp"

using namespace mswell;
using testing::Gen;

namespace {

EdgeHydroInput bl_input(double um, double o = 1.0) {
  EdgeHydroInput in;
  in.rho_liquid = 1000.0;
  in.rho_gas = 4.0;
  in.sigma = 71.97e-3;
  in.um = um;
  in.orientation = o;
  return in;
}

struct Sample {
  double u, v;
  EdgeHydroInput in;
};

Sample random_sample(Gen& g) {
  Sample x;
  x.u = g.uniform(0.0, 1.0);
  x.v = g.uniform(0.0, 1.0);
  x.in.rho_liquid = g.uniform(300.0, 1100.0);
  x.in.rho_gas = g.uniform(0.05, 0.5) * x.in.rho_liquid;
  x.in.sigma = g.uniform(0.01, 0.1);
  x.in.um = g.uniform(-5.0, 5.0);
  x.in.orientation = edge_orientation(g.uniform(0.0, std::numbers::pi / 2), g.coin() ? 1.0 : -1.0);
  return x;
}

/// Distance (relative) to the nearest kink of the flux in its arguments.
bool near_kink(const Sample& x, const DfmParams& p, double band) {
  const double uc = characteristic_velocity(x.in.rho_liquid, x.in.rho_gas, x.in.sigma);
  const double vsgf = p.Ku * std::sqrt(x.in.rho_liquid / x.in.rho_gas) * uc;
  if (std::abs(std::abs(x.in.um) * p.Fv - vsgf) <= band * vsgf) return true;
  if (std::abs(x.in.um) <= band) return true;
  for (double s : {x.u, x.v}) {
    if (std::abs(s - p.a1) <= band || std::abs(s - p.a2) <= band) return true;
  }
  for (double s : {x.u, x.v, p.a2}) {
    const double beta = std::max(s, p.Fv * s * std::abs(x.in.um) / vsgf);
    if (std::abs(beta - p.B) <= band || std::abs(beta - 1.0) <= band) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("closure values") {
  const DfmParams p;
  CHECK(characteristic_velocity(1000.0, 4.0, 71.97e-3) == doctest::Approx(derived::kUcBl).epsilon(1e-14));
  CHECK(profile_parameter(0.5, 0.0, 1000.0, 4.0, p).value == doctest::Approx(derived::kC0Half).epsilon(1e-14));
  const double c01 = profile_parameter(0.1, 0.0, 1000.0, 4.0, p).value;
  CHECK(c01 == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(drift_profile_t(0.1, c01, 1000.0, 4.0) == doctest::Approx(derived::kGTenth).epsilon(1e-14));
  CHECK(drift_term(0.1, 0.0, 1000.0, 4.0, 71.97e-3, p).value == doctest::Approx(derived::kDriftTenth).epsilon(1e-13));
  CHECK(kutateladze_t(0.5, 0.5, 1000.0, 4.0, 71.97e-3, p) == doctest::Approx(derived::kKTildeHalf).epsilon(1e-14));
  CHECK(drift_term(0.5, 0.5, 1000.0, 4.0, 71.97e-3, p).value == doctest::Approx(derived::kDriftHalf).epsilon(1e-13));
  CHECK(gas_flux(0.5, 0.5, bl_input(0.5), p).value == doctest::Approx(derived::kFluxHalf).epsilon(1e-13));

  EdgeHydroInput a = bl_input(-0.8, edge_orientation(0.3, 1.0));
  CHECK(gas_flux(0.3, 0.7, a, p).value == doctest::Approx(derived::kFluxOffDiagA).epsilon(1e-13));
  EdgeHydroInput b;
  b.rho_liquid = 800.0;
  b.rho_gas = 20.0;
  b.sigma = 0.05;
  b.um = 1.7;
  b.orientation = edge_orientation(1.1, -1.0);
  CHECK(gas_flux(0.9, 0.15, b, p).value == doctest::Approx(derived::kFluxOffDiagB).epsilon(1e-13));
}

TEST_CASE("wall friction and mixture velocity") {
  CHECK(wall_friction(1.0, 1000.0, 0.0, 0.05, 0.06) == doctest::Approx(derived::kWallFrictionUnit).epsilon(1e-15));
  CHECK(wall_friction(-1.0, 1000.0, 0.0, 0.05, 0.06) == doctest::Approx(-derived::kWallFrictionUnit));
  CHECK(mixture_velocity(-3000.0, 1000.0, 0.0, 10.0, 0.05, 0.06).value ==
        doctest::Approx(derived::kMixtureVelocityUnit).epsilon(1e-14));
  CHECK(mixture_velocity(3000.0, 1000.0, 0.0, 10.0, 0.05, 0.06).value ==
        doctest::Approx(-derived::kMixtureVelocityUnit).epsilon(1e-14));
  CHECK(mixture_velocity(-250.0, 900.0, 2e-4, 10.0, 0.05, 0.06).value ==
        doctest::Approx(derived::kMixtureVelocityViscous).epsilon(1e-13));
  CHECK(mixture_velocity(0.0, 900.0, 2e-4, 10.0, 0.05, 0.06).value == 0.0);
  CHECK_THROWS_AS(mixture_velocity(1.0, 900.0, 0.0, 10.0, 0.05, 0.0), NumericalError);
}

TEST_CASE("mixture velocity solves the momentum balance and its partials match differences") {
  Gen g(31);
  for (int k = 0; k < 5000; ++k) {
    const double dphi = g.uniform(-1e5, 1e5);
    const double rho = g.uniform(1.0, 1100.0), mu = g.coin(0.2) ? 0.0 : g.log_uniform(1e-6, 1e-2);
    const double len = g.uniform(0.5, 50.0), r = g.uniform(0.02, 0.3), fq = g.uniform(1e-4, 0.1);
    const auto m = mixture_velocity(dphi, rho, mu, len, r, fq);
    const double res = dphi - wall_friction(m.value, rho, mu, r, fq) * len;
    CHECK(std::abs(res) <= 1e-10 * std::abs(dphi));
    auto fd = [&](int which) {
      const double x0 = which == 0 ? dphi : (which == 1 ? rho : mu);
      const double h = (which == 2 ? 1e-4 : 1e-6) * std::max(std::abs(x0), 1e-6);
      auto at = [&](double x) {
        return mixture_velocity(which == 0 ? x : dphi, which == 1 ? x : rho, which == 2 ? x : mu, len, r, fq).value;
      };
      return (at(x0 + h) - at(x0 - h)) / (2 * h);
    };
    if (std::abs(dphi) < 1.0) continue;  // kink of |u| at the origin
    CHECK(testing::rel_diff(m.d_dphi, fd(0)) < 1e-5);
    CHECK(testing::rel_diff(m.d_rho, fd(1)) < 1e-5);
    if (mu > 1e-5) CHECK(testing::rel_diff(m.d_mu, fd(2)) < 1e-5);
  }
}

TEST_CASE("gas flux partials match finite differences away from kinks") {
  const DfmParams p;
  Gen g(32);
  int compared = 0;
  for (int k = 0; k < 20000; ++k) {
    const Sample x = random_sample(g);
    if (near_kink(x, p, 1e-6)) continue;
    const auto f = gas_flux(x.u, x.v, x.in, p);
    const double fscale = std::max(std::abs(f.value), 1e-3);
    for (int j = 0; j < 6; ++j) {
      auto at = [&](double d) {
        Sample y = x;
        switch (j) {
          case 0: y.u += d; break;
          case 1: y.v += d; break;
          case 2: y.in.rho_liquid += d; break;
          case 3: y.in.rho_gas += d; break;
          case 4: y.in.sigma += d; break;
          default: y.in.um += d; break;
        }
        return gas_flux(y.u, y.v, y.in, p).value;
      };
      const double base = j == 0 ? x.u : j == 1 ? x.v : j == 2 ? x.in.rho_liquid : j == 3 ? x.in.rho_gas
                          : j == 4 ? x.in.sigma : x.in.um;
      const double h = 1e-6 * std::max(std::abs(base), 1e-3);
      const double fd = (at(h) - at(-h)) / (2 * h);
      // absolute floor: flux scale over argument scale
      CHECK(std::abs(f.d[static_cast<std::size_t>(j)] - fd) <=
            1e-5 * std::max(std::abs(fd), fscale / std::max(std::abs(base), 1e-3) * 1e-3));
      ++compared;
    }
  }
  CHECK(compared > 6 * 19000);
}

TEST_CASE("superficial velocities add up to the mixture velocity") {
  const DfmParams p;
  Gen g(33);
  for (int k = 0; k < 2000; ++k) {
    const Sample x = random_sample(g);
    EdgeHydroInput in = x.in;
    in.s_child = x.u;
    in.s_parent = x.v;
    const auto both = edge_superficial_velocities(PhaseSet::both(), PhaseSet::both(), in, p);
    CHECK(both.gas + both.liquid == doctest::Approx(in.um).epsilon(1e-12));
    const auto liq = edge_superficial_velocities(PhaseSet::liquid(), PhaseSet::liquid(), in, p);
    CHECK(liq.gas == 0.0);
    CHECK(liq.liquid == in.um);
    const auto gas = edge_superficial_velocities(PhaseSet::gas(), PhaseSet::gas(), in, p);
    CHECK(gas.liquid == 0.0);
    CHECK(gas.gas == in.um);
  }
}

TEST_CASE("flux property sampler") {
  const auto report = flux_property_check(20000, 7);
  CHECK(report.samples == 20000);
  CHECK(report.consistency_max_error <= 1e-12);
  CHECK(report.monotonicity_violations == 0);
  for (long v : report.sign_violations) CHECK(v == 0);
  CHECK(report.profile_violations == 0);
  CHECK(report.closure_monotonicity_violations == 0);
  CHECK(report.passed());
}

TEST_CASE("non-monotone parameters are rejected") {
  DfmParams p;
  p.a1 = 0.35;
  p.a2 = 0.36;
  p.Ku = 0.5;
  CHECK_THROWS_AS(gas_flux(0.3, 0.3, bl_input(0.5), p), MonotonicityError);
  DfmParams bad;
  bad.B = 0.9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(DfmParams{}.validate());
  CHECK_THROWS_AS(characteristic_velocity(4.0, 1000.0, 0.07), DomainError);
}
