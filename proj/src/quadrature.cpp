#include "udw/quadrature.hpp"

#include <cmath>

#include "udw/errors.hpp"

namespace udw {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature: tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be at least 1");
  if (oscillation_panels_per_period < 1)
    throw DomainError("quadrature: oscillation_panels_per_period must be at least 1");
  if (!(eps_regulator > 0.0)) throw DomainError("quadrature: eps_regulator must be positive");
  if (eps_extrapolation_levels < 1) throw DomainError("quadrature: eps_extrapolation_levels must be at least 1");
}

namespace quad_detail {

std::vector<Segment> initial_segments(double a, double b, const QuadratureSpec& spec,
                                      const IntegrandHints& hints) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_1d: non-finite limits");
  if (a > b) throw DomainError("integrate_1d: requires a <= b");

  std::size_t count = 1;
  if (hints.frequency > 0.0) {
    const double max_width = 2.0 * kPi / hints.frequency / spec.oscillation_panels_per_period;
    count = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    count = std::clamp<std::size_t>(count, 1, 200000);
  }
  const bool left = hints.singular == EndpointSingularity::left || hints.singular == EndpointSingularity::both;
  const bool right = hints.singular == EndpointSingularity::right || hints.singular == EndpointSingularity::both;
  if (left && right) count = std::max<std::size_t>(count, 2);

  std::vector<Segment> segments;
  segments.reserve(count);
  const double width = (b - a) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = (i + 1 == count) ? b : a + width * static_cast<double>(i + 1);
    segments.push_back({lo, hi, PanelMap::linear});
  }
  if (left) segments.front().map = PanelMap::graded_left;
  if (right) segments.back().map = PanelMap::graded_right;
  return segments;
}

}  // namespace quad_detail
}  // namespace udw
