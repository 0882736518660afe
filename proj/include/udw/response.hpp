#pragma once

// Leading-order (lambda^2) excitation probability of an inertial detector with
// sharp switching on [tau_i, tau_f], split into the vacuum part P_v and the
// matter part P_m of the one-particle state.
//
// P_m is computed through the separable reduction of the matter two-point
// function: with W_m = C A(tau) conj(A(tau')) + (tau <-> tau'),
//   P_m = lambda^2 C (|F(Omega)|^2 + |F(-Omega)|^2),
//   F(Omega) = integral_{tau_i}^{tau_f} e^{-i Omega tau} A(tau) dtau,
// so P_m >= 0 and P_m(Omega) = P_m(-Omega) hold by construction. The double
// integral is kept only as an oracle (p_matter_quad2d).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "udw/kernels.hpp"
#include "udw/quadrature.hpp"

namespace udw {

struct DetectorConfig {
  double omega = 0.0;   // energy gap; negative values describe de-excitation
  double lambda = 1.0;  // coupling
  double tau_i = 0.0;   // switch-on
  double tau_f = 0.0;   // switch-off

  double duration() const { return tau_f - tau_i; }

  /// Throws DomainError unless tau_f >= tau_i >= 0 and all fields finite.
  void validate() const;
};

enum class Method { analytic, quad1d, quad2d };

std::string_view to_string(Method method);

/// A probability with its numerical error estimate and provenance.
struct Estimate {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  Method method = Method::quad1d;
};

/// Constants of the closed-form coincidence result.
///
/// I(tau, Omega) = exp(exponent_factor * m (m + Omega) / sigma^2)
///                 * sqrt(1 + i tau sigma^2 / m)
///                 * E_{1/2}(m (m + Omega) / sigma^2 + i (m + Omega) tau),
/// and at resonance the divergent term is replaced by
/// resonant_coefficient * |sqrt(1 - i tau_f sigma^2/m) - sqrt(1 - i tau_i sigma^2/m)|^2.
/// The defaults are the values that reproduce quadrature of the matter
/// two-point function.
struct AnalyticConstants {
  double exponent_factor = 1.0;
  double resonant_coefficient = 4.0;
};

/// |m -+ Omega| * (tau_f - tau_i) below this routes away from the closed form.
inline constexpr double kResonanceWindow = 1e-3;

/// P_p above this marks the first-order result as untrustworthy.
inline constexpr double kPerturbativityThreshold = 0.1;

struct ResponseResult {
  double p_v = 0.0;
  double p_m = 0.0;
  double p_p = 0.0;  // p_v + p_m
  double p_v_error = 0.0;
  double p_m_error = 0.0;
  Method method = Method::quad1d;  // path used for p_m
  double error_estimate = 0.0;
  bool resonance_flag = false;
  bool perturbativity_flag = false;
  bool converged = true;
};

/// Vacuum contribution
///   -lambda^2/(2 m^2) int_0^{m dtau} (m dtau - u) [J0(u) sin(mu u) + Y0(u) cos(mu u)] du,
/// mu = Omega/m. Depends on the switching only through dtau.
Estimate p_vacuum(double mass, const DetectorConfig& det, const QuadratureSpec& spec);

/// Brute-force vacuum contribution: double integral of e^{-i Omega (tau-tau')}
/// W_v over the switching square at regulator eps, Richardson-extrapolated
/// to eps -> 0+. Slow; used for cross-checks.
Estimate p_vacuum_oracle(double mass, const DetectorConfig& det, const QuadratureSpec& spec);

/// F(Omega) = int e^{-i Omega tau} A(tau) dtau over the switching window.
IntegralResult matter_amplitude_integral(const ParticleState& state, double omega, double tau_i,
                                         double tau_f, const QuadratureSpec& spec);

/// Matter contribution through the separable one-dimensional reduction.
Estimate p_matter_quad(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec);

/// Matter contribution as the full double integral of e^{-i Omega (tau-tau')} W_m.
Estimate p_matter_quad2d(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec);

/// I(tau, Omega) of the coincidence case (x0 = k0 = 0). Evaluated with the
/// exponential prefactor folded into a scaled E_{1/2}, so it does not
/// overflow for large m (m + Omega).
Complex coincidence_amplitude(double mass, double sigma, double omega, double tau,
                              const AnalyticConstants& constants = {});

/// Closed-form P_m for x0 = k0 = 0. Throws ResonanceProximityError when
/// |m -+ Omega| dtau < kResonanceWindow (and dtau > 0).
Estimate p_matter_analytic(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec,
                           const AnalyticConstants& constants = {});

/// Closed-form P_m exactly at Omega = +m or Omega = -m with x0 = k0 = 0.
Estimate p_matter_resonance(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec,
                            const AnalyticConstants& constants = {});

/// True once the default AnalyticConstants have been checked against the
/// quadrature path (computed on first call, then cached).
bool analytic_path_enabled();

/// P_v + P_m with P_m routed to the closed form (coincidence case off
/// resonance), the resonance formula (Omega = +-m exactly) or quadrature.
ResponseResult p_total(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec);

/// Time-averaged density at the detector,
/// (m / dtau) int_{tau_i}^{tau_f} <phi^2(tau, 0)> dtau. For dtau = 0 the
/// pointwise value m <phi^2(tau_i, 0)> is returned.
Estimate p_avg(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec);

/// [P_avg/P_m](x0, k0) / [P_avg/P_m](0, 0) for each state in the grid. The
/// grid must contain a state with x0 = k0 = 0. Points whose P_m underflows
/// come back empty.
std::vector<std::optional<double>> ratio_normalized(std::span<const ParticleState> grid, const DetectorConfig& det,
                                                    const QuadratureSpec& spec);

}  // namespace udw
