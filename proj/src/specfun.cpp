#include "udw/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "udw/errors.hpp"

namespace udw::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) throw DomainError(std::string(fn) + ": non-finite argument");
}

void require_finite(Complex z, const char* fn) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string(fn) + ": non-finite argument");
}

struct J0Y0 {
  double j0;
  double y0;
};

// Ascending series, x <= 8. The Y0 series is
//   (2/pi)(ln(x/2) + gamma) J0 + (2/pi) sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2.
J0Y0 j0y0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double j0 = 1.0;
  double tail = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    j0 += term;
    tail -= harmonic * term;
    if (std::abs(term) * (1.0 + harmonic) < 1e-17 * std::abs(j0) && k > 2) break;
  }
  const double y0 = (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * j0 + tail);
  return {j0, y0};
}

// Miller backward recurrence normalized by J0 + 2 sum J_2k = 1, with the
// Neumann series Y0 = (2/pi)(ln(x/2)+gamma) J0 - (4/pi) sum (-1)^k J_2k / k.
J0Y0 j0y0_miller(double x) {
  const int start = 2 * static_cast<int>(std::ceil(0.5 * (x + 40.0)));
  double f_next = 0.0;
  double f = 1e-30;
  double even_sum = 0.0;
  double neumann = 0.0;
  for (int k = start; k >= 1; --k) {
    const double f_prev = (2.0 * k / x) * f - f_next;
    f_next = f;
    f = f_prev;
    const int order = k - 1;
    if (order > 0 && order % 2 == 0) {
      even_sum += f;
      const int half = order / 2;
      neumann += ((half % 2 == 0) ? 1.0 : -1.0) * f / half;
    }
  }
  const double norm = f + 2.0 * even_sum;
  const double j0 = f / norm;
  const double y0 = (2.0 / kPi) * (std::log(0.5 * x) + kEulerGamma) * j0 - (4.0 / kPi) * neumann / norm;
  return {j0, y0};
}

// Hankel asymptotic expansion, x > 25.
J0Y0 j0y0_asymptotic(double x) {
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -static_cast<double>((2 * k - 1) * (2 * k - 1)) / (8.0 * k * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (last < 1e-17) break;
  }
  // cos(x - pi/4) and sin(x - pi/4) without subtracting in the argument.
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double cos_chi = (c + s) / std::sqrt(2.0);
  const double sin_chi = (s - c) / std::sqrt(2.0);
  const double amp = std::sqrt(2.0 / (kPi * x));
  return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)};
}

J0Y0 j0y0(double x) {
  if (x <= 8.0) return j0y0_series(x);
  if (x <= 25.0) return j0y0_miller(x);
  return j0y0_asymptotic(x);
}

// K0 ascending series, |z| <= 2.
Complex k0_series(Complex z) {
  const Complex q = 0.25 * z * z;
  Complex term = 1.0;
  Complex i0 = 1.0;
  Complex tail = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 100; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail += harmonic * term;
    if (std::abs(term) * harmonic < 1e-17 * std::abs(i0)) break;
  }
  return -(std::log(0.5 * z) + kEulerGamma) * i0 + tail;
}

// Steed's continued fraction CF2 with Temme's normalization sum, order 0.
// Converges for |z| >= 2 on the closed right half-plane.
Complex k0_steed(Complex z) {
  Complex b = 2.0 * (1.0 + z);
  Complex d = 1.0 / b;
  Complex h = d;
  Complex delh = d;
  Complex q1 = 0.0;
  Complex q2 = 1.0;
  const double a1 = 0.25;
  Complex q = a1;
  double c = a1;
  double a = -a1;
  Complex s = 1.0 + q * delh;
  for (int i = 1; i < 20000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const Complex qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const Complex dels = q * delh;
    s += dels;
    if (std::abs(dels) < 0.5 * kEps * std::abs(s)) break;
  }
  return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
}

// Large-|z| expansion sqrt(pi/2z) e^{-z} sum_k a_k(0) / z^k.
Complex k0_asymptotic(Complex z) {
  Complex sum = 1.0;
  Complex term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -static_cast<double>((2 * k - 1) * (2 * k - 1)) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > last) break;
    sum += term;
    last = mag;
    if (mag < 1e-17) break;
  }
  return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

}  // namespace

double bessel_j0(double x) {
  require_finite(x, "bessel_j0");
  if (x < 0.0) throw DomainError("bessel_j0: argument must be non-negative");
  if (x == 0.0) return 1.0;
  return j0y0(x).j0;
}

double bessel_y0(double x) {
  require_finite(x, "bessel_y0");
  if (x <= 0.0) throw DomainError("bessel_y0: argument must be positive");
  return j0y0(x).y0;
}

Complex bessel_k0_complex(Complex z) {
  require_finite(z, "bessel_k0_complex");
  if (z.real() < 0.0) throw DomainError("bessel_k0_complex: Re z must be non-negative");
  if (z == Complex(0.0, 0.0)) throw DomainError("bessel_k0_complex: logarithmic singularity at z = 0");
  const double r = std::abs(z);
  if (r <= 2.0) return k0_series(z);
  if (r <= 20.0) return k0_steed(z);
  return k0_asymptotic(z);
}

// Algorithm of Poppe and Wijers (Gautschi's method): power series near the
// origin, Taylor expansion with continued-fraction derivatives in the
// intermediate disc, Laplace continued fraction outside. Other quadrants
// follow from w(-z) = 2 exp(-z^2) - w(z) and w(conj(-z)) = conj(w(z)).
Complex faddeeva(Complex z) {
  require_finite(z, "faddeeva");
  constexpr double factor = 1.12837916709551257388;  // 2/sqrt(pi)
  constexpr double max_exp = 708.503061461606;
  constexpr double max_trig = 3.53711887601422e15;

  const double xi = z.real();
  const double yi = z.imag();
  const double xabs = std::abs(xi);
  const double yabs = std::abs(yi);
  const double xs = xabs / 6.3;
  const double ys = yabs / 4.4;

  if (xabs > 0.5e154 || yabs > 0.5e154) throw OverflowError("faddeeva: argument too large");

  double qrho = xs * xs + ys * ys;
  double xquad = xabs * xabs - yabs * yabs;
  const double yquad = 2.0 * xabs * yabs;

  double u = 0.0;
  double v = 0.0;
  double u2 = 0.0;
  double v2 = 0.0;
  const bool near_origin = qrho < 0.085264;

  if (near_origin) {
    qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
    const double v1 = factor * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    u2 = daux * std::cos(yquad);
    v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    double h = 0.0;
    double h2 = 0.0;
    int kapn = 0;
    int nu = 0;
    if (qrho > 1.0) {
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
      qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
      h = 1.88 * qrho;
      h2 = 2.0 * h;
      kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
      nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool taylor = h > 0.0;
    double qlambda = taylor ? std::pow(h2, kapn) : 0.0;

    double rx = 0.0;
    double ry = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (int n = nu; n >= 0; --n) {
      const double np1 = n + 1.0;
      double tx = yabs + h + np1 * rx;
      const double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (taylor && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    if (taylor) {
      u = factor * sx;
      v = factor * sy;
    } else {
      u = factor * rx;
      v = factor * ry;
    }
    if (yabs == 0.0) u = std::exp(-xabs * xabs);
  }

  if (yi < 0.0) {
    if (near_origin) {
      u2 *= 2.0;
      v2 *= 2.0;
    } else {
      xquad = -xquad;
      if (yquad > max_trig || xquad > max_exp) throw OverflowError("faddeeva: exp(-z^2) overflows");
      const double w1 = 2.0 * std::exp(xquad);
      u2 = w1 * std::cos(yquad);
      v2 = -w1 * std::sin(yquad);
    }
    u = u2 - u;
    v = v2 - v;
    if (xi > 0.0) v = -v;
  } else if (xi < 0.0) {
    v = -v;
  }
  return {u, v};
}

Complex erfcx_complex(Complex z) {
  require_finite(z, "erfcx_complex");
  return faddeeva(Complex(-z.imag(), z.real()));
}

Complex erfc_complex(Complex z) {
  require_finite(z, "erfc_complex");
  if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
  // erfc(z) = exp(-z^2) w(iz); Im(iz) = Re z >= 0 keeps w bounded.
  const double x = z.real();
  const double y = z.imag();
  const double log_mag = y * y - x * x;
  if (log_mag > 709.0) throw OverflowError("erfc_complex: exp(-z^2) exceeds double range");
  const Complex w = faddeeva(Complex(-y, x));
  if (log_mag < -745.0) return 0.0;
  return std::exp(Complex(-(x - y) * (x + y), -2.0 * x * y)) * w;
}

Complex exp_integral_half(Complex z) {
  require_finite(z, "exp_integral_half");
  if (z == Complex(0.0, 0.0)) throw DomainError("exp_integral_half: E_{1/2} diverges at z = 0");
  const Complex root = std::sqrt(z);
  return (kSqrtPi / root) * erfc_complex(root);
}

Complex exp_integral_half_scaled(Complex z) {
  require_finite(z, "exp_integral_half_scaled");
  if (z == Complex(0.0, 0.0)) throw DomainError("exp_integral_half_scaled: E_{1/2} diverges at z = 0");
  const Complex root = std::sqrt(z);
  // e^z erfc(sqrt z) = w(i sqrt z); Re sqrt z >= 0 puts the argument in the
  // upper half-plane.
  return (kSqrtPi / root) * faddeeva(Complex(-root.imag(), root.real()));
}

}  // namespace udw::specfun
