#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "udw/errors.hpp"
#include "udw/response.hpp"

using namespace udw;
using oracle::rel_err;

namespace {

DetectorConfig window(double omega, double tau_i, double dtau, double lambda = 1.0) {
  return DetectorConfig{omega, lambda, tau_i, tau_i + dtau};
}

const QuadratureSpec kSpec{};

}  // namespace

TEST_CASE("detector config validation") {
  CHECK_NOTHROW(window(1.0, 0.0, 0.0).validate());
  CHECK_THROWS_AS(DetectorConfig({1.0, 1.0, 2.0, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS(DetectorConfig({1.0, 1.0, -1.0, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS(DetectorConfig({NAN, 1.0, 0.0, 1.0}).validate(), DomainError);
}

TEST_CASE("vacuum part: reference values") {
  // Frozen from 25-digit evaluations of the single integral.
  CHECK(rel_err(p_vacuum(10.0, window(5.0, 0.0, 3.0), kSpec).value, 0.001744272086098143962) < 1e-8);
  CHECK(rel_err(p_vacuum(10.0, window(-10.0, 0.0, 4.0), kSpec).value, 0.9436312447931271004) < 1e-8);
}

TEST_CASE("vacuum part: independent tanh-sinh evaluation") {
  const double m = 10.0, omega = 3.0, dtau = 2.5;
  const double mu = omega / m, len = m * dtau;
  const auto f = [&](double u) {
    return (len - u) * (specfun::bessel_j0(u) * std::sin(mu * u) + specfun::bessel_y0(u) * std::cos(mu * u));
  };
  const double ref = -oracle::tanh_sinh_panels(f, 0.0, len, 50) / (2.0 * m * m);
  CHECK(rel_err(p_vacuum(m, window(omega, 0.0, dtau), kSpec).value, ref) < 1e-9);
}

TEST_CASE("vacuum part: trivial cases and translation invariance") {
  CHECK(p_vacuum(10.0, window(5.0, 3.0, 0.0), kSpec).value == 0.0);
  const double a = p_vacuum(10.0, window(7.0, 0.0, 3.0), kSpec).value;
  const double b = p_vacuum(10.0, window(7.0, 5.0, 3.0), kSpec).value;
  CHECK(a == b);
  CHECK(p_vacuum(10.0, window(7.0, 0.0, 3.0, 2.0), kSpec).value == doctest::Approx(4.0 * a).epsilon(1e-14));
  CHECK_THROWS_AS(p_vacuum(0.0, window(7.0, 0.0, 3.0), kSpec), DomainError);
}

TEST_CASE("vacuum part against the regulated double integral") {
  const auto det = window(5.0, 0.0, 3.0);
  const Estimate oracle2d = p_vacuum_oracle(10.0, det, kSpec);
  CHECK(oracle2d.converged);
  CHECK(rel_err(p_vacuum(10.0, det, kSpec).value, oracle2d.value) < 1e-3);
}

TEST_CASE("matter part: reference values") {
  const ParticleState centred{10.0, 0.0, 0.0, 1.0};
  CHECK(rel_err(p_matter_quad(centred, window(5.0, 0.0, 2.0), kSpec).value, 0.004092939409912454899) < 1e-8);
  CHECK(rel_err(p_matter_analytic(centred, window(5.0, 0.0, 2.0), kSpec).value, 0.004092939409912454899) < 1e-8);
  CHECK(rel_err(p_matter_resonance(centred, window(10.0, 0.0, 3.0), kSpec).value, 0.2500295775711831308) < 1e-8);
  const ParticleState c20{20.0, 0.0, 0.0, 1.0};
  CHECK(rel_err(p_matter_analytic(c20, window(-40.0, 2.0, 8.0), kSpec).value, 1.420432623955909510e-4) < 1e-8);
  const ParticleState moving{10.0, 1.0, 0.5, 1.0};
  CHECK(rel_err(p_matter_quad(moving, window(8.0, 0.0, 4.0), kSpec).value, 0.005222873643769721578) < 1e-8);
}

TEST_CASE("matter part: 1D reduction against the full double integral") {
  const ParticleState st{10.0, 1.0, 0.5, 1.0};
  const auto det = window(8.0, 0.0, 4.0);
  CHECK(rel_err(p_matter_quad(st, det, kSpec).value, p_matter_quad2d(st, det, kSpec).value) < 1e-6);
}

TEST_CASE("matter part: trivial and symmetry properties") {
  const ParticleState st{10.0, 1.2, -0.4, 1.0};
  CHECK(p_matter_quad(st, window(4.0, 1.0, 0.0), kSpec).value == 0.0);
  CHECK(p_matter_analytic(ParticleState{10.0, 0.0, 0.0, 1.0}, window(4.0, 1.0, 0.0), kSpec).value == 0.0);
  CHECK(p_matter_resonance(ParticleState{10.0, 0.0, 0.0, 1.0}, window(10.0, 1.0, 0.0), kSpec).value == 0.0);
  for (double omega : {0.0, 3.0, 10.0, 17.0}) {
    const double plus = p_matter_quad(st, window(omega, 0.5, 3.0), kSpec).value;
    const double minus = p_matter_quad(st, window(-omega, 0.5, 3.0), kSpec).value;
    CHECK(plus >= 0.0);
    CHECK(rel_err(plus, minus) < 1e-10);
    const ParticleState mirrored{st.mass, -st.x0, -st.k0, st.sigma};
    CHECK(rel_err(plus, p_matter_quad(mirrored, window(omega, 0.5, 3.0), kSpec).value) < 1e-10);
  }
}

TEST_CASE("closed form agrees with quadrature, including across the branch cut") {
  for (double m : {5.0, 10.0, 20.0}) {
    for (double omega : {0.0, 0.5 * m, -0.5 * m, 2.0 * m, -2.0 * m, 1.3 * m}) {
      for (double tau_i : {0.0, 2.0}) {
        const ParticleState st{m, 0.0, 0.0, 1.0};
        const auto det = window(omega, tau_i, 2.0);
        CAPTURE(m);
        CAPTURE(omega);
        CAPTURE(tau_i);
        CHECK(rel_err(p_matter_analytic(st, det, kSpec).value, p_matter_quad(st, det, kSpec).value) < 1e-6);
      }
    }
  }
}

TEST_CASE("printed-form constants are distinguishable from the calibrated ones") {
  const ParticleState st{10.0, 0.0, 0.0, 1.0};
  const auto det = window(5.0, 0.0, 2.0);
  const double quad = p_matter_quad(st, det, kSpec).value;
  CHECK(rel_err(p_matter_analytic(st, det, kSpec, {2.0, 4.0}).value, quad) > 1e-3);
  const auto res = window(10.0, 0.0, 3.0);
  CHECK(rel_err(p_matter_resonance(st, res, kSpec, {1.0, 1.0}).value, p_matter_quad(st, res, kSpec).value) > 1e-3);
  CHECK(analytic_path_enabled());
}

TEST_CASE("closed form refuses the resonance window") {
  const ParticleState st{10.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(p_matter_analytic(st, window(10.0, 0.0, 2.0), kSpec), ResonanceProximityError);
  CHECK_THROWS_AS(p_matter_analytic(st, window(-10.0 + 1e-5, 0.0, 2.0), kSpec), ResonanceProximityError);
  CHECK_THROWS_AS(p_matter_resonance(st, window(9.0, 0.0, 2.0), kSpec), DomainError);
  CHECK_THROWS_AS(p_matter_analytic(ParticleState{10.0, 0.5, 0.0, 1.0}, window(3.0, 0.0, 2.0), kSpec), DomainError);
}

TEST_CASE("resonance: agreement with quadrature and growth") {
  const ParticleState st{10.0, 0.0, 0.0, 1.0};
  for (double omega : {10.0, -10.0}) {
    for (double dtau : {0.5, 8.0}) {
      const auto det = window(omega, 1.0, dtau);
      CHECK(rel_err(p_matter_resonance(st, det, kSpec).value, p_matter_quad(st, det, kSpec).value) < 1e-6);
    }
  }
  double previous = 0.0;
  for (double dtau = 10.0; dtau <= 100.0; dtau += 5.0) {
    const double p = p_matter_resonance(st, window(10.0, 0.0, dtau), kSpec).value;
    CHECK(p > previous);
    previous = p;
  }
  CHECK(previous > 1.0);
}

TEST_CASE("total response: dispatch and flags") {
  const ParticleState centred{10.0, 0.0, 0.0, 1.0};
  const auto generic = p_total(centred, window(5.0, 0.0, 2.0), kSpec);
  CHECK(generic.method == Method::analytic);
  CHECK(generic.p_p == generic.p_v + generic.p_m);
  CHECK_FALSE(generic.resonance_flag);

  const auto near = p_total(centred, window(10.0 + 1e-6, 0.0, 2.0), kSpec);
  CHECK(near.method == Method::quad1d);
  CHECK(near.resonance_flag);

  const auto long_resonant = p_total(centred, window(10.0, 0.0, 50.0), kSpec);
  CHECK(long_resonant.resonance_flag);
  CHECK(long_resonant.perturbativity_flag);

  const auto moving = p_total(ParticleState{10.0, 1.0, 0.5, 1.0}, window(5.0, 0.0, 2.0), kSpec);
  CHECK(moving.method == Method::quad1d);

  const auto silent = p_total(ParticleState{10.0, 1.0, 0.5, 1.0}, window(5.0, 0.0, 2.0, 0.0), kSpec);
  CHECK(silent.p_v == 0.0);
  CHECK(silent.p_m == 0.0);
  CHECK(silent.p_p == 0.0);

  const auto empty = p_total(centred, window(5.0, 0.0, 0.0), kSpec);
  CHECK(empty.p_v == 0.0);
  CHECK(empty.p_m == 0.0);
}

TEST_CASE("time-averaged density") {
  const ParticleState centred{10.0, 0.0, 0.0, 1.0};
  const auto point = p_avg(centred, window(0.0, 0.0, 0.0), kSpec);
  CHECK(rel_err(point.value, 1.0 / kSqrtPi) < 1e-15);

  const ParticleState st{10.0, 1.0, 0.5, 1.0};
  const auto det = window(0.0, 0.0, 4.0);
  const double trap =
      oracle::trapezoid([&](double t) { return phi_squared_matter(st, t, 0.0); }, 0.0, 4.0, 100000) * st.mass / 4.0;
  CHECK(rel_err(p_avg(st, det, kSpec).value, trap) < 1e-8);
  CHECK(rel_err(p_avg(st, det, kSpec).value, 0.1750726469330110985) < 1e-10);
}

TEST_CASE("normalised density-to-response ratio") {
  const auto det = window(10.0, 0.0, 4.0);
  const std::vector<ParticleState> grid{{10.0, 2.0, 0.0, 1.0}, {10.0, 0.0, 0.0, 1.0}, {10.0, 1.0, 0.5, 1.0}};
  const auto r = ratio_normalized(grid, det, kSpec);
  REQUIRE(r.size() == 3);
  CHECK(*r[1] == 1.0);
  CHECK(*r[0] > 1.0);
  const auto raw = [&](const ParticleState& s) { return p_avg(s, det, kSpec).value / p_matter_quad(s, det, kSpec).value; };
  CHECK(rel_err(*r[2], raw(grid[2]) / raw(grid[1])) < 1e-14);

  const std::vector<ParticleState> no_reference{{10.0, 2.0, 0.0, 1.0}};
  CHECK_THROWS_AS(ratio_normalized(no_reference, det, kSpec), DomainError);

  const std::vector<ParticleState> far{{10.0, 0.0, 0.0, 1.0}, {10.0, 60.0, 0.0, 1.0}};
  const auto rf = ratio_normalized(far, det, kSpec);
  CHECK_FALSE(rf[1].has_value());
}
