#include "udw/validation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <sstream>

#include "json.hpp"
#include "udw/kernels.hpp"
#include "udw/response.hpp"
#include "udw/specfun.hpp"

namespace udw {
namespace {

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double rel_diff(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Runs `body`, which returns the worst discrepancy, and turns exceptions into
// failed checks. With `must_exceed` the check passes only when the measured
// discrepancy is above the tolerance.
ValidationCheck run_check(std::string name, double tolerance, const std::function<double(std::string&)>& body,
                          bool must_exceed = false) {
  ValidationCheck c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  try {
    c.measured = body(c.detail);
    c.passed = std::isfinite(c.measured) && (must_exceed ? c.measured > tolerance : c.measured <= tolerance);
  } catch (const std::exception& e) {
    c.measured = std::nan("");
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  return c;
}

DetectorConfig window(double omega, double tau_i, double dtau) {
  DetectorConfig det;
  det.omega = omega;
  det.tau_i = tau_i;
  det.tau_f = tau_i + dtau;
  return det;
}

// Worst relative mismatch between the closed form (with the given constants)
// and quadrature over the coincidence grid.
double coincidence_grid_mismatch(const QuadratureSpec& spec, const AnalyticConstants& constants, std::string& where) {
  double worst = 0.0;
  for (double m : {5.0, 10.0, 20.0}) {
    for (double omega : {0.0, m / 2, -m / 2, 2 * m, -2 * m}) {
      for (double dtau : {0.5, 2.0, 8.0}) {
        for (double tau_i : {0.0, 2.0}) {
          const ParticleState st{m, 0.0, 0.0, 1.0};
          const DetectorConfig det = window(omega, tau_i, dtau);
          const double d = rel_diff(p_matter_analytic(st, det, spec, constants).value, p_matter_quad(st, det, spec).value);
          if (d > worst) {
            worst = d;
            std::ostringstream os;
            os << "worst at m=" << m << " omega=" << omega << " delta_tau=" << dtau << " tau_i=" << tau_i;
            where = os.str();
          }
        }
      }
    }
  }
  return worst;
}

double resonance_mismatch(const QuadratureSpec& spec, const AnalyticConstants& constants) {
  double worst = 0.0;
  for (double m : {5.0, 10.0}) {
    for (double omega : {m, -m}) {
      for (double dtau : {0.5, 2.0, 8.0}) {
        for (double tau_i : {0.0, 2.0}) {
          const ParticleState st{m, 0.0, 0.0, 1.0};
          const DetectorConfig det = window(omega, tau_i, dtau);
          worst = std::max(worst, rel_diff(p_matter_resonance(st, det, spec, constants).value,
                                           p_matter_quad(st, det, spec).value));
        }
      }
    }
  }
  return worst;
}

}  // namespace

bool ValidationReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
  nlohmann::json doc;
  doc["passed"] = passed();
  doc["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["measured"] = std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json(nullptr);
    j["tolerance"] = c.tolerance;
    j["detail"] = c.detail;
    doc["checks"].push_back(j);
  }
  return doc.dump(2);
}

ValidationReport run_validation(const QuadratureSpec& spec) {
  ValidationReport report;
  auto& out = report.checks;

  out.push_back(run_check("density_identity", 1e-12, [](std::string& detail) {
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> t_dist(0.0, 20.0), x_dist(-6.0, 6.0);
    const ParticleState st{10.0, 0.7, 0.3, 1.0};
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = t_dist(rng), x = x_dist(rng);
      worst = std::max(worst, rel_diff(st.mass * phi_squared_matter(st, t, x), qm_density(st, t, x)));
    }
    detail = "m * <phi^2> vs |psi|^2 on 1000 random (t, x)";
    return worst;
  }));

  out.push_back(run_check("wightman_coincidence", 1e-10, [](std::string& detail) {
    double worst = 0.0;
    for (const ParticleState st : {ParticleState{10.0, 0.0, 0.0, 1.0}, ParticleState{10.0, 1.0, 0.5, 1.0}}) {
      for (int i = 0; i <= 200; ++i) {
        const double tau = 0.1 * i;
        const Complex w = wightman_matter(st, tau, tau);
        worst = std::max(worst, rel_diff(w, Complex(phi_squared_matter(st, tau, 0.0), 0.0)));
      }
    }
    detail = "W_m(tau, tau) vs <phi^2(tau, 0)> for tau in [0, 20]";
    return worst;
  }));

  out.push_back(run_check("analytic_vs_quad", 1e-6, [&](std::string& detail) {
    return coincidence_grid_mismatch(spec, AnalyticConstants{}, detail);
  }));

  // The calibration has to be able to tell the constants apart: the
  // alternatives must disagree with quadrature.
  out.push_back(run_check("exponent_factor_2_rejected", 1e-6, [&](std::string& detail) {
    const double d = coincidence_grid_mismatch(spec, AnalyticConstants{2.0, 4.0}, detail);
    detail = "must exceed tolerance; " + detail;
    return d;
  }, true));
  out.push_back(run_check("resonance_vs_quad", 1e-6, [&](std::string& detail) {
    detail = "Omega = +-m, m in {5, 10}, delta_tau in {0.5, 2, 8}, tau_i in {0, 2}";
    return resonance_mismatch(spec, AnalyticConstants{});
  }));
  out.push_back(run_check("resonant_coefficient_1_rejected", 1e-6, [&](std::string& detail) {
    detail = "must exceed tolerance";
    return resonance_mismatch(spec, AnalyticConstants{1.0, 1.0});
  }, true));
  out.push_back(run_check("analytic_path_enabled", 0.0, [](std::string& detail) {
    detail = "start-up calibration of the closed form against quadrature";
    return analytic_path_enabled() ? 0.0 : 1.0;
  }));

  out.push_back(run_check("reduction_1d_vs_2d", 1e-6, [&](std::string& detail) {
    const ParticleState st{10.0, 1.0, 0.5, 1.0};
    const DetectorConfig det = window(8.0, 0.0, 4.0);
    detail = "m=10 omega=8 x0=1 k0=0.5 tau in [0, 4]";
    return rel_diff(p_matter_quad(st, det, spec).value, p_matter_quad2d(st, det, spec).value);
  }));

  out.push_back(run_check("vacuum_vs_eps_oracle", 1e-3, [&](std::string& detail) {
    const DetectorConfig det = window(5.0, 0.0, 3.0);
    const Estimate a = p_vacuum(10.0, det, spec);
    const Estimate b = p_vacuum_oracle(10.0, det, spec);
    std::ostringstream os;
    os.precision(12);
    os << "single integral " << a.value << ", extrapolated double integral " << b.value;
    detail = os.str();
    return rel_diff(a.value, b.value);
  }));

  out.push_back(run_check("k0_imaginary_axis", 1e-9, [](std::string& detail) {
    double worst = 0.0;
    for (double x : {0.5, 1.0, 2.0, 10.0, 30.0}) {
      const Complex expect = -0.5 * kPi * Complex(specfun::bessel_y0(x), specfun::bessel_j0(x));
      worst = std::max(worst, rel_diff(specfun::bessel_k0_complex(Complex(0.0, x)), expect));
    }
    detail = "K0(ix) = -(pi/2)(Y0(x) + i J0(x))";
    return worst;
  }));

  out.push_back(run_check("erfc_reflection", 1e-12, [](std::string& detail) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Complex z(d(rng), d(rng));
      worst = std::max(worst, std::abs(specfun::erfc_complex(z) + specfun::erfc_complex(-z) - 2.0));
    }
    detail = "|erfc(z) + erfc(-z) - 2| on 200 points of [-3, 3]^2";
    return worst;
  }));

  out.push_back(run_check("exp_integral_half", 1e-12, [](std::string& detail) {
    double worst = rel_diff(specfun::exp_integral_half(Complex(1.0, 0.0)),
                            Complex(kSqrtPi * std::erfc(1.0), 0.0));
    for (double x : {0.3, 2.0, 7.5}) {
      worst = std::max(worst, rel_diff(specfun::exp_integral_half(Complex(x, 0.0)),
                                       Complex(kSqrtPi * std::erfc(std::sqrt(x)) / std::sqrt(x), 0.0)));
    }
    detail = "E_1/2(x) = sqrt(pi/x) erfc(sqrt(x)) on the real axis";
    return worst;
  }));

  return report;
}

}  // namespace udw
