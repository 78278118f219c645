#pragma once

// Integer-order Bessel and Hankel functions of real argument.
//
// Evaluation regimes for orders 0 and 1:
//   x < 3          power series
//   3 <= x < 25    Miller downward recurrence, Y from Neumann series in J_n
//   x >= 25        Hankel asymptotic expansion (truncated at its smallest term)

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavesense {

using ComplexValue = std::complex<double>;

namespace special {

/// J0, J1, Y0, Y1 at a common argument.
struct Bessel01 {
  double j0 = 0.0;
  double j1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  ComplexValue h0() const { return {j0, y0}; }
  ComplexValue h1() const { return {j1, y1}; }
};

/// J_0..J_{n_max} and Y_0..Y_{n_max}.
struct BesselSequence {
  std::vector<double> j;
  std::vector<double> y;
};

namespace detail {

inline constexpr double kEuler = std::numbers::egamma;
inline constexpr double kSeriesLimit = 3.0;
inline constexpr double kAsymptoticLimit = 25.0;

inline void check_order(int order) {
  if (order != 0 && order != 1) {
    throw std::invalid_argument("bessel: order must be 0 or 1, got " + std::to_string(order));
  }
}

inline Bessel01 series01(double x) {
  const double q = 0.25 * x * x;
  double j0 = 0.0, j1 = 0.0, s0 = 0.0, s1 = 0.0;
  // t0 = (-q)^k/(k!)^2, t1 = (-q)^k/(k!(k+1)!)
  double t0 = 1.0, t1 = 1.0, harmonic = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      t0 *= -q / (double(k) * k);
      t1 *= -q / (double(k) * (k + 1));
      harmonic += 1.0 / k;
    }
    j0 += t0;
    j1 += t1;
    if (k > 0) s0 -= harmonic * t0;
    // psi(k+1) + psi(k+2) = -2*gamma + 2*H_k + 1/(k+1)
    s1 += (-2.0 * kEuler + 2.0 * harmonic + 1.0 / (k + 1)) * t1;
    if (std::abs(t0) < 1e-18 * std::abs(j0) && std::abs(t1) < 1e-18 * std::abs(j1)) break;
  }
  j1 *= 0.5 * x;
  Bessel01 b;
  b.j0 = j0;
  b.j1 = j1;
  if (x > 0.0) {
    const double lg = std::log(0.5 * x);
    b.y0 = (2.0 / std::numbers::pi) * ((lg + kEuler) * j0 + s0);
    b.y1 = -2.0 / (std::numbers::pi * x) + (2.0 / std::numbers::pi) * lg * j1 -
           (0.5 * x / std::numbers::pi) * s1;
  }
  return b;
}

// Miller recurrence started at an even order well above x; Neumann sums give Y0, Y1.
inline Bessel01 miller01(double x) {
  const int start = 2 * ((static_cast<int>(x) + 61) / 2);
  double fp1 = 0.0;
  double f = 1e-30;
  double norm = 0.0, ys0 = 0.0, ys1 = 0.0, j1 = 0.0;
  for (int n = start; n >= 1; --n) {
    if (n % 2 == 0) {
      const int k = n / 2;
      norm += 2.0 * f;
      ys0 += ((k % 2 == 0) ? 1.0 : -1.0) * f / k;
    } else if (n >= 3) {
      const int k = (n - 1) / 2;
      ys1 += ((k % 2 == 0) ? 1.0 : -1.0) * (2.0 * k + 1.0) * f / (double(k) * (k + 1));
    } else {
      j1 = f;
    }
    const double fm1 = (2.0 * n / x) * f - fp1;
    fp1 = f;
    f = fm1;
    if (std::abs(f) > 1e250) {
      constexpr double s = 1e-250;
      f *= s;
      fp1 *= s;
      norm *= s;
      ys0 *= s;
      ys1 *= s;
      j1 *= s;
    }
  }
  norm += f;
  Bessel01 b;
  b.j0 = f / norm;
  b.j1 = j1 / norm;
  const double lg = std::log(0.5 * x);
  b.y0 = (2.0 / std::numbers::pi) * (lg + kEuler) * b.j0 - (4.0 / std::numbers::pi) * ys0 / norm;
  b.y1 = (2.0 / std::numbers::pi) * (-b.j0 / x + (lg - 1.0 + kEuler) * b.j1 - ys1 / norm);
  return b;
}

// P and Q of the Hankel expansion for order nu.
inline void hankel_pq(int nu, double x, double& p, double& q) {
  const double mu = 4.0 * nu * nu;
  p = 1.0;
  q = 0.0;
  double term = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > prev) break;  // asymptotic series started diverging
    // P = t0 - t2 + t4 - ..., Q = t1 - t3 + t5 - ...
    const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
    if (k % 2 == 0) {
      p += signed_term;
    } else {
      q += signed_term;
    }
    if (mag < 1e-17) break;
    prev = mag;
  }
}

inline Bessel01 asymptotic01(double x) {
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  const double c = std::cos(x);
  const double s = std::sin(x);
  constexpr double r2 = 0.70710678118654752440;
  double p0, q0, p1, q1;
  hankel_pq(0, x, p0, q0);
  hankel_pq(1, x, p1, q1);
  // phases x - pi/4 and x - 3pi/4, expanded to avoid reducing x - const
  const double c0 = (c + s) * r2, s0 = (s - c) * r2;
  const double c1 = (s - c) * r2, s1 = -(s + c) * r2;
  Bessel01 b;
  b.j0 = amp * (p0 * c0 - q0 * s0);
  b.y0 = amp * (p0 * s0 + q0 * c0);
  b.j1 = amp * (p1 * c1 - q1 * s1);
  b.y1 = amp * (p1 * s1 + q1 * c1);
  return b;
}

}  // namespace detail

/// All four order-0/1 functions at x > 0 (x = 0 gives J only; Y entries are left at 0).
inline Bessel01 bessel01(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::invalid_argument("bessel: argument must be finite and non-negative");
  }
  if (x < detail::kSeriesLimit) return detail::series01(x);
  if (x < detail::kAsymptoticLimit) return detail::miller01(x);
  return detail::asymptotic01(x);
}

inline double bessel_j(int order, double x) {
  detail::check_order(order);
  const Bessel01 b = bessel01(x);
  return order == 0 ? b.j0 : b.j1;
}

inline double bessel_y(int order, double x) {
  detail::check_order(order);
  if (std::isnan(x)) throw std::invalid_argument("bessel_y: NaN argument");
  if (!(x > 0.0) || std::isinf(x)) {
    throw std::domain_error("bessel_y: argument must be positive and finite");
  }
  const Bessel01 b = bessel01(x);
  return order == 0 ? b.y0 : b.y1;
}

/// Hankel function of the first kind, H = J + iY.
inline ComplexValue hankel1(int order, double x) {
  detail::check_order(order);
  if (std::isnan(x)) throw std::invalid_argument("hankel1: NaN argument");
  if (!(x > 0.0) || std::isinf(x)) {
    throw std::domain_error("hankel1: argument must be positive and finite");
  }
  const Bessel01 b = bessel01(x);
  return order == 0 ? b.h0() : b.h1();
}

/// J_0..J_{n_max} by normalized downward recurrence, Y_0..Y_{n_max} by upward recurrence.
inline BesselSequence bessel_sequence(int n_max, double x) {
  if (n_max < 1) throw std::invalid_argument("bessel_sequence: n_max must be >= 1");
  if (std::isnan(x)) throw std::invalid_argument("bessel_sequence: NaN argument");
  if (!(x > 0.0) || std::isinf(x)) {
    throw std::domain_error("bessel_sequence: argument must be positive and finite");
  }
  const auto top = static_cast<int>(std::max<double>(n_max, x));
  const int start = 2 * ((top + 40 + static_cast<int>(std::sqrt(40.0 * top))) / 2 + 1);

  BesselSequence out;
  out.j.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  double fp1 = 0.0;
  double f = 1e-30;
  double norm = 0.0;
  for (int n = start; n >= 1; --n) {
    if (n <= n_max) out.j[static_cast<std::size_t>(n)] = f;
    if (n % 2 == 0) norm += 2.0 * f;
    const double fm1 = (2.0 * n / x) * f - fp1;
    fp1 = f;
    f = fm1;
    if (std::abs(f) > 1e250) {
      constexpr double s = 1e-250;
      f *= s;
      fp1 *= s;
      norm *= s;
      for (int m = n; m <= n_max; ++m) out.j[static_cast<std::size_t>(m)] *= s;
    }
  }
  out.j[0] = f;
  norm += f;
  for (double& v : out.j) v /= norm;

  const Bessel01 b = bessel01(x);
  out.y.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  out.y[0] = b.y0;
  out.y[1] = b.y1;
  for (int n = 1; n < n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.y[i + 1] = (2.0 * n / x) * out.y[i] - out.y[i - 1];
  }
  return out;
}

}  // namespace special
}  // namespace wavesense
