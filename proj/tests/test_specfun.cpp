#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "udw/errors.hpp"
#include "udw/specfun.hpp"

using namespace udw;
using namespace udw::specfun;
using oracle::rel_err;

TEST_CASE("J0 against its ascending series") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::abs(bessel_j0(1.0) - 0.7651976866) < 1e-10);
  CHECK(std::abs(bessel_j0(2.4048255577)) < 1e-9);
  // Cancellation in the long-double series limits the oracle to moderate x.
  for (double x = 0.05; x < 14.0; x += 0.37) {
    CAPTURE(x);
    CHECK(std::abs(bessel_j0(x) - oracle::j0_series(x)) < 1e-13);
  }
}

TEST_CASE("J0 and Y0 at large argument") {
  // Frozen reference values, 30-digit evaluations.
  CHECK(rel_err(bessel_j0(12.5), 0.146884054700421102) < 1e-12);
  CHECK(rel_err(bessel_y0(12.5), -0.171214306844669287) < 1e-12);
  CHECK(rel_err(bessel_j0(40.0), 0.00736689058423728955) < 1e-10);
  CHECK(rel_err(bessel_y0(40.0), 0.125936417058260929) < 1e-12);
}

TEST_CASE("Y0 against its integral representation") {
  CHECK(std::abs(bessel_y0(1.0) - 0.0882569642) < 1e-10);
  CHECK(std::abs(bessel_y0(0.8935769663)) < 1e-8);
  for (double x : {0.1, 0.5, 1.0, 3.0, 7.9, 8.1, 15.0}) {
    CAPTURE(x);
    CHECK(std::abs(bessel_y0(x) - oracle::y0_integral(x)) < 1e-12);
  }
}

TEST_CASE("Y0 small-argument behaviour") {
  const double x = 1e-6;
  const double leading = 2.0 / kPi * (std::log(x / 2.0) + kEulerGamma) * bessel_j0(x);
  CHECK(std::abs(bessel_y0(x) - leading) < 1e-10);
}

TEST_CASE("J0 and Y0 domain") {
  CHECK_THROWS_AS(bessel_j0(-1.0), DomainError);
  CHECK_THROWS_AS(bessel_y0(0.0), DomainError);
  CHECK_THROWS_AS(bessel_y0(-2.0), DomainError);
  CHECK_THROWS_AS(bessel_j0(std::nan("")), DomainError);
}

TEST_CASE("K0 against the integral representation") {
  CHECK(std::abs(bessel_k0_complex(Complex(1.0, 0.0)) - 0.4210244382) < 1e-10);
  for (Complex z : {Complex(1.0, 0.0), Complex(0.3, 0.2), Complex(3.0, 4.0), Complex(0.5, 7.0), Complex(2.5, -1.5),
                    Complex(12.0, 30.0), Complex(25.0, -3.0)}) {
    CAPTURE(z);
    CHECK(rel_err(bessel_k0_complex(z), oracle::k0_integral(z)) < 1e-11);
  }
}

TEST_CASE("K0 on the imaginary axis matches -(pi/2)(Y0 + i J0)") {
  for (double x : {0.5, 1.0, 2.0, 9.0, 30.0}) {
    CAPTURE(x);
    const Complex expect = -0.5 * kPi * Complex(bessel_y0(x), bessel_j0(x));
    CHECK(rel_err(bessel_k0_complex(Complex(0.0, x)), expect) < 1e-9);
  }
}

TEST_CASE("K0 near the origin") {
  const Complex z = 1e-4 * Complex(1.0, 1.0) / std::sqrt(2.0);
  const Complex expansion = -std::log(z / 2.0) - kEulerGamma;
  CHECK(std::abs(bessel_k0_complex(z) - expansion) < 1e-7);
  CHECK_THROWS_AS(bessel_k0_complex(Complex(0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(bessel_k0_complex(Complex(-1.0, 0.5)), DomainError);
}

TEST_CASE("erfc against the ray integral") {
  CHECK(erfc_complex(Complex(0.0, 0.0)) == Complex(1.0, 0.0));
  CHECK(std::abs(erfc_complex(Complex(1.0, 0.0)) - 0.1572992071) < 1e-10);
  for (Complex z : {Complex(1.0, 0.0), Complex(1.0, 2.0), Complex(-2.0, 0.5), Complex(0.1, 6.0), Complex(3.0, -1.0),
                    Complex(-0.7, -2.2)}) {
    CAPTURE(z);
    CHECK(rel_err(erfc_complex(z), oracle::erfc_ray(z)) < 1e-11);
  }
}

TEST_CASE("erfc reflection and real-axis agreement") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Complex z(d(rng), d(rng));
    CAPTURE(z);
    CHECK(std::abs(erfc_complex(z) + erfc_complex(-z) - 2.0) < 1e-12 * std::max(1.0, std::abs(erfc_complex(z))));
  }
  for (double x = -5.0; x <= 5.0; x += 0.25) CHECK(rel_err(erfc_complex(Complex(x, 0.0)).real(), std::erfc(x)) < 1e-14);
}

TEST_CASE("erfc overflow is reported") {
  CHECK_THROWS_AS(erfc_complex(Complex(0.0, 40.0)), OverflowError);
}

TEST_CASE("Faddeeva function basics") {
  CHECK(std::abs(faddeeva(Complex(0.0, 0.0)) - 1.0) < 1e-15);
  // w(iy) = e^{y^2} erfc(y) for real y.
  for (double y : {0.1, 1.0, 5.0, 30.0}) {
    CAPTURE(y);
    const double expect = y < 20 ? std::exp(y * y) * std::erfc(y) : 1.0 / (std::sqrt(kPi) * y) * (1 - 0.5 / (y * y) + 0.75 / std::pow(y, 4));
    CHECK(rel_err(faddeeva(Complex(0.0, y)).real(), expect) < 1e-7);
  }
}

TEST_CASE("E_1/2 examples") {
  CHECK(std::abs(exp_integral_half(Complex(1.0, 0.0)) - 0.2788055853) < 1e-10);
  CHECK(rel_err(exp_integral_half(Complex(1.0, 0.0)), Complex(kSqrtPi * std::erfc(1.0), 0.0)) < 1e-13);

  const double z50 = 50.0;
  CHECK(rel_err(exp_integral_half(Complex(z50, 0.0)).real(), std::exp(-z50) / z50) < 0.02);

  const Complex ref = oracle::e_half_integral(Complex(1.0, 10.0));
  CHECK(rel_err(ref, Complex(0.0150514320973036892, 0.0329583031204616194)) < 1e-12);
  CHECK(rel_err(exp_integral_half(Complex(1.0, 10.0)), ref) < 1e-8);

  for (Complex z : {Complex(0.2, 0.1), Complex(3.0, -4.0), Complex(10.0, 25.0), Complex(0.05, 2.0)}) {
    CAPTURE(z);
    CHECK(rel_err(exp_integral_half(z), oracle::e_half_integral(z)) < 1e-10);
  }
}

TEST_CASE("E_1/2 large-argument limit") {
  // z e^z E_1/2(z) -> 1 along the positive real axis.
  const double z = 100.0;
  CHECK(std::abs(z * std::exp(z) * exp_integral_half(Complex(z, 0.0)).real() - 1.0) < 0.01);
  const Complex scaled = exp_integral_half_scaled(Complex(z, 0.0));
  CHECK(rel_err(scaled.real(), std::exp(z) * exp_integral_half(Complex(z, 0.0)).real()) < 1e-13);
}

TEST_CASE("scaled E_1/2 stays finite where the plain one underflows") {
  const Complex z(2000.0, 40.0);
  const Complex s = exp_integral_half_scaled(z);
  CHECK(std::isfinite(s.real()));
  CHECK(rel_err(s, 1.0 / z * (1.0 - 0.5 / z)) < 1e-6);
  CHECK_THROWS_AS(exp_integral_half(Complex(0.0, 0.0)), DomainError);
}

TEST_CASE("special functions are pure") {
  const Complex z(1.7, -0.3);
  CHECK(bessel_k0_complex(z) == bessel_k0_complex(z));
  CHECK(exp_integral_half(z) == exp_integral_half(z));
  CHECK(bessel_y0(13.1) == bessel_y0(13.1));
}
