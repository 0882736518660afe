#pragma once

// Special functions needed by the detector-response formulas.
//
// Everything here is pure and reentrant. Complex arguments use the principal
// branch; non-finite inputs are rejected with udw::DomainError.

#include <complex>

namespace udw {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrtPi = 1.772453850905516027298167483341145183;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

namespace specfun {

/// Bessel function of the first kind, order zero, for x >= 0.
double bessel_j0(double x);

/// Bessel function of the second kind, order zero, for x > 0.
double bessel_y0(double x);

/// Modified Bessel function of the second kind K0(z) on the closed right
/// half-plane (Re z >= 0, z != 0).
Complex bessel_k0_complex(Complex z);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), valid on the whole plane.
/// Bounded and well conditioned for Im z >= 0.
Complex faddeeva(Complex z);

/// Complementary error function. Throws OverflowError when exp(-z^2)
/// leaves the double range rather than returning a saturated value.
Complex erfc_complex(Complex z);

/// exp(z^2) erfc(z). Never overflows for Re z >= 0.
Complex erfcx_complex(Complex z);

/// E_{1/2}(z) = integral_1^inf exp(-z t) t^{-1/2} dt = sqrt(pi/z) erfc(sqrt z).
///
/// Principal branch of sqrt z. On the negative real axis the sign of the
/// imaginary zero picks the side of the cut, so (x, -0.0) continues the
/// lower half-plane and (x, +0.0) the upper one.
Complex exp_integral_half(Complex z);

/// exp(z) E_{1/2}(z), same branch convention. Bounded for large |z|, which
/// keeps exp(m(m+Omega)/sigma^2)-type prefactors out of the arithmetic.
Complex exp_integral_half_scaled(Complex z);

}  // namespace specfun
}  // namespace udw
