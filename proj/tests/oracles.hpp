#pragma once

// Reference evaluations used only by the tests. They share no code with the
// library: tanh-sinh and trapezoid/Simpson rules instead of Gauss-Kronrod,
// ascending series and integral representations instead of the production
// special-function algorithms.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using Complex = std::complex<double>;

// Tanh-sinh rule on [a, b]; tolerates integrable endpoint singularities.
// `level` halves the step each time (h = 2^-level).
template <class F>
auto tanh_sinh(F f, double a, double b, int level = 7) -> decltype(f(a)) {
  using R = decltype(f(a));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double h = std::ldexp(1.0, -level);
  R sum{};
  for (int k = -static_cast<int>(4.0 / h); k <= static_cast<int>(4.0 / h); ++k) {
    const double t = k * h;
    const double s = 0.5 * std::numbers::pi * std::sinh(t);
    const double u = std::tanh(s);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) / (std::cosh(s) * std::cosh(s));
    // Distance to the nearer endpoint, computed without cancellation.
    const double gap = half / (std::exp(std::abs(s)) * std::cosh(s));
    if (gap <= 0.0 || w == 0.0) continue;
    const double x = u < 0 ? a + gap : b - gap;
    sum += f(x) * (w * half);
  }
  return sum * h;
}

// Composite tanh-sinh over n equal panels, for oscillatory integrands.
template <class F>
auto tanh_sinh_panels(F f, double a, double b, int n, int level = 6) -> decltype(f(a)) {
  decltype(f(a)) sum{};
  for (int i = 0; i < n; ++i) sum += tanh_sinh(f, a + (b - a) * i / n, a + (b - a) * (i + 1) / n, level);
  return sum;
}

template <class F>
auto trapezoid(F f, double a, double b, long n) -> decltype(f(a)) {
  const double h = (b - a) / static_cast<double>(n);
  decltype(f(a)) sum = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

// J0 by its ascending series in long double; fine for x up to ~20.
inline double j0_series(double x) {
  long double term = 1.0L, sum = 1.0L;
  const long double q = -0.25L * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Y0(x) = (4/pi^2) int_0^{pi/2} cos(x cos t) (gamma + ln(2 x sin^2 t)) dt.
inline double y0_integral(double x) {
  constexpr double gamma = 0.57721566490153286061;
  const auto f = [x](double t) {
    const double s = std::sin(t);
    return std::cos(x * std::cos(t)) * (gamma + std::log(2.0 * x * s * s));
  };
  return 4.0 / (std::numbers::pi * std::numbers::pi) * tanh_sinh(f, 0.0, 0.5 * std::numbers::pi, 8);
}

// K0(z) = int_0^inf exp(-z cosh t) dt, Re z > 0.
inline Complex k0_integral(Complex z) {
  const double tmax = std::acosh(std::max(1.0, 60.0 / z.real()));
  const auto f = [z](double t) { return std::exp(-z * std::cosh(t)); };
  const int panels = 1 + static_cast<int>(std::abs(z.imag()) * std::cosh(tmax) / 2.0);
  return tanh_sinh_panels(f, 0.0, tmax, panels);
}

// erfc(z) = (2/sqrt(pi)) int_0^inf exp(-(z + s)^2) ds along the horizontal ray.
inline Complex erfc_ray(Complex z) {
  const double smax = std::max(0.0, -z.real()) + 10.0;
  const auto f = [z](double s) { return std::exp(-(z + s) * (z + s)); };
  const int panels = 4 + static_cast<int>(std::abs(z.imag()) * smax);
  return 2.0 / std::sqrt(std::numbers::pi) * tanh_sinh_panels(f, 0.0, smax, panels);
}

// E_{1/2}(z) = int_1^inf exp(-z t) t^{-1/2} dt, Re z > 0.
inline Complex e_half_integral(Complex z) {
  const double tmax = 1.0 + 45.0 / z.real();
  const auto f = [z](double t) { return std::exp(-z * t) / std::sqrt(t); };
  const int panels = 4 + static_cast<int>(std::abs(z.imag()) * (tmax - 1.0));
  return tanh_sinh_panels(f, 1.0, tmax, panels);
}

inline double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel_err(Complex a, Complex b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
