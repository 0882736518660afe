#include "udw/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "udw/errors.hpp"
#include "udw/specfun.hpp"

namespace udw {

void DetectorConfig::validate() const {
  if (!std::isfinite(omega) || !std::isfinite(lambda) || !std::isfinite(tau_i) || !std::isfinite(tau_f))
    throw DomainError("detector: non-finite parameter");
  if (tau_i < 0.0) throw DomainError("detector: switch-on time tau_i must be >= 0");
  if (tau_f < tau_i) throw DomainError("detector: tau_f must be >= tau_i (interaction duration is negative)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::analytic:
      return "analytic";
    case Method::quad1d:
      return "quad1d";
    case Method::quad2d:
      return "quad2d";
  }
  return "unknown";
}

namespace {

// Relative accuracy assumed for a single special-function evaluation.
constexpr double kSpecfunRelError = 1e-13;

bool coincident(const ParticleState& state) { return state.x0 == 0.0 && state.k0 == 0.0; }

double lambda_sq(const DetectorConfig& det) { return det.lambda * det.lambda; }

// Upper bound on the angular frequency of e^{-i Omega tau} A(tau): the
// carrier m + Omega plus the drift of the Gaussian and square-root phases.
double amplitude_frequency(const ParticleState& st, double omega) {
  const double s2 = st.sigma * st.sigma;
  const double source_sq = st.k0 * st.k0 / (s2 * s2) + st.x0 * st.x0;
  return std::abs(st.mass + omega) + (source_sq * s2 * s2 + s2) / (2.0 * st.mass);
}

double coincidence_prefactor(const ParticleState& st, const DetectorConfig& det) {
  return lambda_sq(det) * st.mass / (2.0 * kSqrtPi * st.sigma * st.sigma * st.sigma);
}

}  // namespace

Estimate p_vacuum(double mass, const DetectorConfig& det, const QuadratureSpec& spec) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("p_vacuum: mass must be positive");
  det.validate();
  spec.validate();
  Estimate out;
  out.method = Method::quad1d;
  const double span = mass * det.duration();
  if (span == 0.0) return out;

  const double mu = det.omega / mass;
  auto integrand = [&](double u) {
    return (span - u) * (specfun::bessel_j0(u) * std::sin(mu * u) + specfun::bessel_y0(u) * std::cos(mu * u));
  };
  const IntegralResult r =
      integrate_1d(integrand, 0.0, span, spec, {EndpointSingularity::left, 1.0 + std::abs(mu)});
  const double scale = lambda_sq(det) / (2.0 * mass * mass);
  out.value = -scale * r.value.real();
  out.error_estimate = scale * r.error_estimate;
  out.converged = r.converged;
  return out;
}

Estimate p_vacuum_oracle(double mass, const DetectorConfig& det, const QuadratureSpec& spec) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("p_vacuum_oracle: mass must be positive");
  det.validate();
  spec.validate();
  Estimate out;
  out.method = Method::quad2d;
  if (det.duration() == 0.0) return out;

  bool all_converged = true;
  double worst_quad_error = 0.0;
  auto regulated = [&](double eps) -> Complex {
    auto integrand = [&](double tau, double tau_p) {
      return std::exp(Complex(0.0, -det.omega * (tau - tau_p))) * wightman_vacuum(mass, tau, tau_p, eps);
    };
    const IntegralResult r = integrate_2d(integrand, det.tau_i, det.tau_f, det.tau_i, det.tau_f, spec,
                                          {true, mass + std::abs(det.omega)});
    all_converged = all_converged && r.converged;
    worst_quad_error = std::max(worst_quad_error, r.error_estimate);
    return r.value;
  };
  const ExtrapolationResult e = extrapolate_eps(regulated, spec, 1.0 / mass);
  out.value = lambda_sq(det) * e.value.real();
  out.error_estimate = lambda_sq(det) * (e.error_estimate + worst_quad_error);
  // Once the diagonal differences reach the quadrature noise (amplified by the
  // Richardson weights) they stop shrinking; that is not divergence.
  out.converged = all_converged && (e.converged || e.error_estimate <= 10.0 * worst_quad_error);
  return out;
}

IntegralResult matter_amplitude_integral(const ParticleState& state, double omega, double tau_i, double tau_f,
                                         const QuadratureSpec& spec) {
  state.validate();
  auto integrand = [&](double tau) {
    return std::exp(Complex(0.0, -omega * tau)) * matter_amplitude_factor(state, tau);
  };
  return integrate_1d(integrand, tau_i, tau_f, spec, {EndpointSingularity::none, amplitude_frequency(state, omega)});
}

Estimate p_matter_quad(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec) {
  state.validate();
  det.validate();
  spec.validate();
  Estimate out;
  out.method = Method::quad1d;
  if (det.duration() == 0.0) return out;

  const IntegralResult plus = matter_amplitude_integral(state, det.omega, det.tau_i, det.tau_f, spec);
  const IntegralResult minus = matter_amplitude_integral(state, -det.omega, det.tau_i, det.tau_f, spec);
  const double c = lambda_sq(det) * matter_prefactor(state);
  out.value = c * (std::norm(plus.value) + std::norm(minus.value));
  out.error_estimate = c * (2.0 * std::abs(plus.value) * plus.error_estimate + plus.error_estimate * plus.error_estimate +
                            2.0 * std::abs(minus.value) * minus.error_estimate +
                            minus.error_estimate * minus.error_estimate);
  out.converged = plus.converged && minus.converged;
  return out;
}

Estimate p_matter_quad2d(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec) {
  state.validate();
  det.validate();
  spec.validate();
  Estimate out;
  out.method = Method::quad2d;
  if (det.duration() == 0.0) return out;

  auto integrand = [&](double tau, double tau_p) {
    return std::exp(Complex(0.0, -det.omega * (tau - tau_p))) * wightman_matter(state, tau, tau_p);
  };
  const double freq = std::max(amplitude_frequency(state, det.omega), amplitude_frequency(state, -det.omega));
  const IntegralResult r =
      integrate_2d(integrand, det.tau_i, det.tau_f, det.tau_i, det.tau_f, spec, {false, freq});
  out.value = lambda_sq(det) * r.value.real();
  out.error_estimate = lambda_sq(det) * r.error_estimate;
  out.converged = r.converged;
  return out;
}

Complex coincidence_amplitude(double mass, double sigma, double omega, double tau,
                              const AnalyticConstants& constants) {
  const double s2 = sigma * sigma;
  const double carrier = mass + omega;
  const double a = mass * carrier / s2;
  // z = a (1 + i tau sigma^2/m). For carrier < 0 and tau = 0 the product
  // carrier * tau is -0.0, which keeps z on the lower side of the cut, the
  // same side the path tau > 0 runs along.
  const Complex z(a, carrier * tau);
  const Complex root_s = std::sqrt(Complex(1.0, tau * s2 / mass));
  // exp(a) E(z) = exp(a - z) * [exp(z) E(z)] and a - z = -i carrier tau.
  Complex value = root_s * std::exp(Complex(0.0, -carrier * tau)) * specfun::exp_integral_half_scaled(z);
  if (constants.exponent_factor != 1.0) value *= std::exp((constants.exponent_factor - 1.0) * a);
  return value;
}

Estimate p_matter_analytic(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec,
                           const AnalyticConstants& constants) {
  state.validate();
  det.validate();
  spec.validate();
  if (!coincident(state)) throw DomainError("p_matter_analytic: requires x0 = 0 and k0 = 0");
  Estimate out;
  out.method = Method::analytic;
  const double dtau = det.duration();
  if (dtau == 0.0) return out;

  double sum = 0.0;
  double err = 0.0;
  for (const double omega : {det.omega, -det.omega}) {
    if (std::abs(state.mass + omega) * dtau < kResonanceWindow)
      throw ResonanceProximityError("p_matter_analytic: |m -+ Omega| dtau is inside the resonance window");
    const Complex fi = coincidence_amplitude(state.mass, state.sigma, omega, det.tau_i, constants);
    const Complex ff = coincidence_amplitude(state.mass, state.sigma, omega, det.tau_f, constants);
    const Complex diff = ff - fi;
    sum += std::norm(diff);
    err += 2.0 * std::abs(diff) * kSpecfunRelError * (std::abs(ff) + std::abs(fi));
  }
  const double pref = coincidence_prefactor(state, det);
  out.value = pref * sum;
  out.error_estimate = pref * err;
  return out;
}

Estimate p_matter_resonance(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec,
                            const AnalyticConstants& constants) {
  state.validate();
  det.validate();
  spec.validate();
  if (!coincident(state)) throw DomainError("p_matter_resonance: requires x0 = 0 and k0 = 0");
  const bool resonant_minus = state.mass - det.omega == 0.0;
  const bool resonant_plus = state.mass + det.omega == 0.0;
  if (!resonant_minus && !resonant_plus) throw DomainError("p_matter_resonance: requires Omega = +m or Omega = -m");
  Estimate out;
  out.method = Method::analytic;
  if (det.duration() == 0.0) return out;

  // The non-resonant partner of the resonant term.
  const double other = resonant_minus ? det.omega : -det.omega;
  const Complex fi = coincidence_amplitude(state.mass, state.sigma, other, det.tau_i, constants);
  const Complex ff = coincidence_amplitude(state.mass, state.sigma, other, det.tau_f, constants);
  const Complex diff = ff - fi;

  const double s2 = state.sigma * state.sigma;
  const Complex root_f = std::sqrt(Complex(1.0, -det.tau_f * s2 / state.mass));
  const Complex root_i = std::sqrt(Complex(1.0, -det.tau_i * s2 / state.mass));
  const double resonant = constants.resonant_coefficient * std::norm(root_f - root_i);

  const double pref = coincidence_prefactor(state, det);
  out.value = pref * (std::norm(diff) + resonant);
  out.error_estimate =
      pref * (2.0 * std::abs(diff) * kSpecfunRelError * (std::abs(ff) + std::abs(fi)) + 4.0 * 1e-16 * resonant);
  return out;
}

bool analytic_path_enabled() {
  static const bool enabled = [] {
    const QuadratureSpec spec;
    const ParticleState state{10.0, 0.0, 0.0, 1.0};
    const DetectorConfig probes[] = {{5.0, 1.0, 0.0, 2.0}, {-15.0, 1.0, 1.0, 3.0}};
    for (const auto& det : probes) {
      const double quad = p_matter_quad(state, det, spec).value;
      const double closed = p_matter_analytic(state, det, spec).value;
      if (!(std::abs(closed - quad) <= 1e-6 * std::abs(quad))) return false;
    }
    DetectorConfig res{10.0, 1.0, 0.0, 3.0};
    const double quad = p_matter_quad(state, res, spec).value;
    const double closed = p_matter_resonance(state, res, spec).value;
    return std::abs(closed - quad) <= 1e-6 * std::abs(quad);
  }();
  return enabled;
}

ResponseResult p_total(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec) {
  state.validate();
  det.validate();
  spec.validate();
  ResponseResult out;

  const Estimate vac = p_vacuum(state.mass, det, spec);
  const double dtau = det.duration();
  const double detuning = std::min(std::abs(state.mass - det.omega), std::abs(state.mass + det.omega));
  const bool exact_resonance = detuning == 0.0;
  const bool near_resonance = dtau > 0.0 && detuning * dtau < kResonanceWindow;

  Estimate mat;
  if (coincident(state) && analytic_path_enabled()) {
    if (exact_resonance) {
      mat = p_matter_resonance(state, det, spec);
    } else if (near_resonance) {
      mat = p_matter_quad(state, det, spec);
    } else {
      mat = p_matter_analytic(state, det, spec);
    }
  } else {
    mat = p_matter_quad(state, det, spec);
  }

  out.p_v = vac.value;
  out.p_m = mat.value;
  out.p_p = out.p_v + out.p_m;
  out.p_v_error = vac.error_estimate;
  out.p_m_error = mat.error_estimate;
  out.method = mat.method;
  out.error_estimate = vac.error_estimate + mat.error_estimate;
  out.resonance_flag = dtau > 0.0 && (exact_resonance || near_resonance);
  out.perturbativity_flag = out.p_p > kPerturbativityThreshold;
  out.converged = vac.converged && mat.converged;
  return out;
}

Estimate p_avg(const ParticleState& state, const DetectorConfig& det, const QuadratureSpec& spec) {
  state.validate();
  det.validate();
  spec.validate();
  Estimate out;
  out.method = Method::quad1d;
  const double dtau = det.duration();
  if (dtau == 0.0) {
    out.method = Method::analytic;
    out.value = state.mass * phi_squared_matter(state, det.tau_i, 0.0);
    return out;
  }
  auto density = [&](double tau) { return phi_squared_matter(state, tau, 0.0); };
  const IntegralResult r = integrate_1d(density, det.tau_i, det.tau_f, spec);
  out.value = state.mass * r.value.real() / dtau;
  out.error_estimate = state.mass * r.error_estimate / dtau;
  out.converged = r.converged;
  return out;
}

std::vector<std::optional<double>> ratio_normalized(std::span<const ParticleState> grid, const DetectorConfig& det,
                                                    const QuadratureSpec& spec) {
  const auto ref = std::find_if(grid.begin(), grid.end(), [](const ParticleState& s) { return coincident(s); });
  if (ref == grid.end()) throw DomainError("ratio_normalized: grid must contain the x0 = 0, k0 = 0 reference point");

  auto raw_ratio = [&](const ParticleState& s) -> std::optional<double> {
    const double pm = p_matter_quad(s, det, spec).value;
    if (!(pm > std::numeric_limits<double>::min())) return std::nullopt;
    return p_avg(s, det, spec).value / pm;
  };

  const std::optional<double> reference = raw_ratio(*ref);
  if (!reference || !(*reference > 0.0))
    throw DomainError("ratio_normalized: P_m underflows at the reference point");

  std::vector<std::optional<double>> out;
  out.reserve(grid.size());
  for (const auto& s : grid) {
    const std::optional<double> r = raw_ratio(s);
    out.push_back(r ? std::optional<double>(*r / *reference) : std::nullopt);
  }
  return out;
}

}  // namespace udw
