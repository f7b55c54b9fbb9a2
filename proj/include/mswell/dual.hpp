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

#ifndef MSWELL_DUAL_HPP
#define MSWELL_DUAL_HPP

#include <array>
#include <cmath>

namespace mswell {

/// Forward-mode first-order dual number with a fixed number of derivative
/// slots. Used to carry exact derivatives of closure laws with respect to
/// local unknowns.
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit on purpose

  static Dual variable(double value, int slot) {
    Dual r(value);
    r.d[slot] = 1.0;
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int k = 0; k < N; ++k) d[k] += o.d[k];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int k = 0; k < N; ++k) d[k] -= o.d[k];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int k = 0; k < N; ++k) d[k] = d[k] * o.v + v * o.d[k];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (int k = 0; k < N; ++k) d[k] = (d[k] - v * inv * o.d[k]) * inv;
    v *= inv;
    return *this;
  }
};

template <int N> inline Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N> inline Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N> inline Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N> inline Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }
template <int N> inline Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N> inline Dual<N> operator+(double b, Dual<N> a) { a.v += b; return a; }
template <int N> inline Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N> inline Dual<N> operator-(double b, const Dual<N>& a) {
  Dual<N> r;
  r.v = b - a.v;
  for (int k = 0; k < N; ++k) r.d[k] = -a.d[k];
  return r;
}
template <int N> inline Dual<N> operator-(const Dual<N>& a) { return 0.0 - a; }
template <int N> inline Dual<N> operator*(Dual<N> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <int N> inline Dual<N> operator*(double b, Dual<N> a) { return a * b; }
template <int N> inline Dual<N> operator/(Dual<N> a, double b) { return a * (1.0 / b); }
template <int N> inline Dual<N> operator/(double b, const Dual<N>& a) { return Dual<N>(b) / a; }

/// Apply a scalar function given its value and derivative at a.v.
template <int N>
inline Dual<N> chain(const Dual<N>& a, double value, double slope) {
  Dual<N> r(value);
  for (int k = 0; k < N; ++k) r.d[k] = slope * a.d[k];
  return r;
}

template <int N> inline Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, s > 0.0 ? 0.5 / s : 0.0);
}
template <int N> inline Dual<N> exp(const Dual<N>& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e);
}
template <int N> inline Dual<N> log(const Dual<N>& a) { return chain(a, std::log(a.v), 1.0 / a.v); }
template <int N> inline Dual<N> pow(const Dual<N>& a, double p) {
  const double r = std::pow(a.v, p);
  return chain(a, r, a.v != 0.0 ? p * r / a.v : 0.0);
}
/// |a| with the derivative of the non-negative branch at zero.
template <int N> inline Dual<N> abs(const Dual<N>& a) { return a.v >= 0.0 ? a : -a; }

/// max(a, b); ties resolve to the first argument.
template <int N> inline Dual<N> max(const Dual<N>& a, const Dual<N>& b) { return a.v >= b.v ? a : b; }

/// Positive part a^+ = max(a, 0).
template <int N> inline Dual<N> positive_part(const Dual<N>& a) { return a.v > 0.0 ? a : Dual<N>(0.0); }
/// Negative part a^- = min(a, 0).
template <int N> inline Dual<N> negative_part(const Dual<N>& a) { return a.v < 0.0 ? a : Dual<N>(0.0); }

inline double positive_part(double a) { return a > 0.0 ? a : 0.0; }
inline double negative_part(double a) { return a < 0.0 ? a : 0.0; }
inline double max(double a, double b) { return a >= b ? a : b; }
inline double abs(double a) { return a >= 0.0 ? a : -a; }
inline double sqrt(double a) { return std::sqrt(a); }
inline double pow(double a, double p) { return std::pow(a, p); }
inline double project_unit(double a) { return a <= 0.0 ? 0.0 : (a >= 1.0 ? 1.0 : a); }
inline double value_of(double a) { return a; }
template <int N> inline double value_of(const Dual<N>& a) { return a.v; }

/// Projection onto [0, 1]. The interior branch is taken only on the open
/// interval, matching the kink convention used by the slip closures.
template <int N> inline Dual<N> project_unit(const Dual<N>& a) {
  if (a.v <= 0.0) return Dual<N>(0.0);
  if (a.v >= 1.0) return Dual<N>(1.0);
  return a;
}

/// Copy the derivative block of `a` (slots [0, n)) into slots [offset, offset+n)
/// of a wider dual.
template <int M, int N>
inline Dual<M> lift(const Dual<N>& a, int n, int offset) {
  Dual<M> r(a.v);
  for (int k = 0; k < n; ++k) r.d[offset + k] = a.d[k];
  return r;
}

}  // namespace mswell

#endif  // MSWELL_DUAL_HPP
