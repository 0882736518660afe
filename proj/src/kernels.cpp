#include "udw/kernels.hpp"

#include <cmath>
#include <sstream>

#include "udw/errors.hpp"

namespace udw {

void ParticleState::validate() const {
  if (!std::isfinite(mass) || !std::isfinite(x0) || !std::isfinite(k0) || !std::isfinite(sigma))
    throw DomainError("particle state: non-finite parameter");
  if (!(mass > 0.0)) throw DomainError("particle state: mass must be positive");
  if (!(sigma > 0.0)) throw DomainError("particle state: sigma must be positive");
}

bool ParticleState::nonrelativistic() const {
  return sigma / mass <= kNonRelativisticThreshold && std::abs(k0) / mass <= kNonRelativisticThreshold;
}

std::vector<std::string> ParticleState::validity_warnings() const {
  std::vector<std::string> out;
  if (sigma / mass > kNonRelativisticThreshold) {
    std::ostringstream os;
    os << "sigma/m = " << sigma / mass << " exceeds " << kNonRelativisticThreshold
       << "; non-relativistic approximation is doubtful";
    out.push_back(os.str());
  }
  if (std::abs(k0) / mass > kNonRelativisticThreshold) {
    std::ostringstream os;
    os << "|k0|/m = " << std::abs(k0) / mass << " exceeds " << kNonRelativisticThreshold
       << "; non-relativistic approximation is doubtful";
    out.push_back(os.str());
  }
  return out;
}

double phi_squared_matter(const ParticleState& state, double t, double x) {
  state.validate();
  const double s2 = state.sigma * state.sigma;
  const double spread = 1.0 + (s2 * t / state.mass) * (s2 * t / state.mass);
  const double offset = x - state.x0 - state.k0 * t / state.mass;
  return std::sqrt(s2 / (kPi * spread)) * std::exp(-s2 * offset * offset / spread) / state.mass;
}

Complex qm_wavefunction(const ParticleState& state, double t, double x) {
  state.validate();
  const double s2 = state.sigma * state.sigma;
  const Complex spread(1.0, s2 * t / state.mass);
  const double offset = x - state.x0 - state.k0 * t / state.mass;
  const Complex phase = -0.5 * s2 * offset * offset / spread +
                        Complex(0.0, state.k0 * (x - state.x0) - state.k0 * state.k0 * t / (2.0 * state.mass));
  return std::sqrt(state.sigma / kSqrtPi) / std::sqrt(spread) * std::exp(phase);
}

double qm_density(const ParticleState& state, double t, double x) {
  state.validate();
  const double s2 = state.sigma * state.sigma;
  const double spread = 1.0 + (s2 * t / state.mass) * (s2 * t / state.mass);
  const double offset = x - state.x0 - state.k0 * t / state.mass;
  return std::sqrt(s2 / (kPi * spread)) * std::exp(-s2 * offset * offset / spread);
}

Complex wightman_vacuum(double mass, double tau, double tau_p, double eps) {
  if (!(mass > 0.0)) throw DomainError("wightman_vacuum: mass must be positive");
  if (!(eps > 0.0)) throw DomainError("wightman_vacuum: regulator eps must be positive");
  return specfun::bessel_k0_complex(mass * Complex(eps, tau - tau_p)) / (2.0 * kPi);
}

namespace {

// One ordered term of W_m as printed: the swap partner is obtained by
// exchanging the two times.
Complex matter_term(const ParticleState& st, double tau, double tau_p) {
  const double inv_s2 = 1.0 / (st.sigma * st.sigma);
  const Complex d(inv_s2, tau / st.mass);
  const Complex dp(inv_s2, -tau_p / st.mass);
  const Complex source(st.k0 * inv_s2, -st.x0);
  const Complex exponent =
      Complex(0.0, -st.mass * (tau - tau_p)) - st.k0 * st.k0 * inv_s2 +
      source * source / (2.0 * d) + std::conj(source) * std::conj(source) / (2.0 * dp);
  return std::exp(exponent) / std::sqrt(d * dp) / (2.0 * kSqrtPi * st.mass * st.sigma);
}

}  // namespace

Complex wightman_matter(const ParticleState& state, double tau, double tau_p) {
  state.validate();
  if (!(tau >= 0.0) || !(tau_p >= 0.0)) throw DomainError("wightman_matter: requires tau, tau' >= 0");
  return matter_term(state, tau, tau_p) + matter_term(state, tau_p, tau);
}

Complex matter_amplitude_factor(const ParticleState& state, double tau) {
  state.validate();
  const double inv_s2 = 1.0 / (state.sigma * state.sigma);
  const Complex d(inv_s2, tau / state.mass);
  const Complex source(state.k0 * inv_s2, -state.x0);
  return std::exp(Complex(0.0, -state.mass * tau) + source * source / (2.0 * d)) / std::sqrt(d);
}

double matter_prefactor(const ParticleState& state) {
  state.validate();
  return std::exp(-state.k0 * state.k0 / (state.sigma * state.sigma)) /
         (2.0 * kSqrtPi * state.mass * state.sigma);
}

}  // namespace udw
