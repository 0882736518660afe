#pragma once

// Field-state kernels on the worldline x_D(tau) = (tau, 0) of a detector at
// rest at the origin.
//
// All quantities are in units of the wave-packet width sigma: mass and
// momenta in sigma, times and positions in 1/sigma. sigma is kept as a field
// so the closed forms read the same as with dimensions restored; the CLI and
// sweeps always use sigma = 1.

#include <string>
#include <vector>

#include "udw/specfun.hpp"

namespace udw {

/// Gaussian one-particle state of the massive field: centred at x0 with mean
/// momentum k0 and momentum width sigma.
struct ParticleState {
  double mass = 1.0;
  double x0 = 0.0;
  double k0 = 0.0;
  double sigma = 1.0;

  /// Throws DomainError unless mass > 0, sigma > 0 and all fields finite.
  void validate() const;

  /// sigma/m <= 0.1 and |k0|/m <= 0.1.
  bool nonrelativistic() const;

  /// Human-readable descriptions of violated non-relativistic conditions.
  std::vector<std::string> validity_warnings() const;
};

inline constexpr double kNonRelativisticThreshold = 0.1;

/// <phi^2(t, x)> of the particle state with the vacuum piece dropped:
/// (1/m) sqrt(sigma^2 / (pi (1 + (sigma^2 t/m)^2)))
///   * exp(-sigma^2 (x - x0 - k0 t/m)^2 / (1 + (sigma^2 t/m)^2)).
double phi_squared_matter(const ParticleState& state, double t, double x);

/// Free Schroedinger wave packet with the same (x0, k0, sigma, m).
Complex qm_wavefunction(const ParticleState& state, double t, double x);

/// |qm_wavefunction|^2 in closed form.
double qm_density(const ParticleState& state, double t, double x);

/// Vacuum Wightman function on the worldline, (1/2pi) K0(m (eps + i (tau - tau'))).
/// eps > 0 is the regulator; the eps -> 0+ limit is left to the caller.
Complex wightman_vacuum(double mass, double tau, double tau_p, double eps);

/// Matter part of the two-point function in the particle state (both the
/// printed term and its tau <-> tau' partner). Requires tau, tau' >= 0.
Complex wightman_matter(const ParticleState& state, double tau, double tau_p);

/// A(tau) in the factorization  first_term(tau, tau') = C A(tau) conj(A(tau')):
///   A(tau) = e^{-i m tau} exp[(k0/s^2 - i x0)^2 / (2 (1/s^2 + i tau/m))]
///            / sqrt(1/s^2 + i tau/m)        (s = sigma)
Complex matter_amplitude_factor(const ParticleState& state, double tau);

/// C = exp(-k0^2/sigma^2) / (2 sqrt(pi) m sigma).
double matter_prefactor(const ParticleState& state);

}  // namespace udw
