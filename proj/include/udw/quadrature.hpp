#pragma once

// Adaptive Gauss-Kronrod (7/15) integration of complex-valued integrands.
//
// Results are deterministic: the refinement order depends only on the
// integrand values, and the final sum is a pairwise sum over panels in
// left-to-right order. Integrating conj(f) gives exactly conj(I(f)).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

#include "udw/specfun.hpp"

namespace udw {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  int oscillation_panels_per_period = 8;
  double eps_regulator = 1e-6;  // in units of 1/m
  int eps_extrapolation_levels = 3;

  /// Throws DomainError on non-positive tolerances or limits.
  void validate() const;
};

struct IntegralResult {
  Complex value{};
  double error_estimate = 0.0;
  int subdivisions_used = 0;
  bool converged = true;
};

enum class EndpointSingularity { none, left, right, both };

struct IntegrandHints {
  // Integrable (e.g. logarithmic) singularity at the marked endpoint(s).
  EndpointSingularity singular = EndpointSingularity::none;
  // Largest angular frequency of the integrand; caps the initial panel width
  // at (2 pi / frequency) / oscillation_panels_per_period. Zero disables.
  double frequency = 0.0;
};

struct IntegrandHints2d {
  // Integrand may be log-singular on tau == tau'; the inner integral is split
  // there and the split points are treated as singular endpoints.
  bool diagonal_singular = false;
  double frequency = 0.0;
};

namespace quad_detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (0.949.., 0.741.., 0.405.., 0).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Maps the panel parameter u onto x. Quadratic maps cluster nodes toward a
// singular endpoint: x = lo + (hi-lo) u^2 (left) or hi - (hi-lo) u^2 (right),
// u in [0, 1].
enum class PanelMap { linear, graded_left, graded_right };

struct Segment {
  double lo;
  double hi;
  PanelMap map;
};

struct Panel {
  std::size_t segment;
  double u0;
  double u1;
  Complex value;
  double error;
};

template <class F>
Complex evaluate(F& f, double x) {
  using R = std::invoke_result_t<F&, double>;
  if constexpr (std::is_same_v<std::decay_t<R>, Complex>) {
    return f(x);
  } else {
    return Complex(static_cast<double>(f(x)), 0.0);
  }
}

template <class F>
Complex evaluate(F& f, double x, double y) {
  using R = std::invoke_result_t<F&, double, double>;
  if constexpr (std::is_same_v<std::decay_t<R>, Complex>) {
    return f(x, y);
  } else {
    return Complex(static_cast<double>(f(x, y)), 0.0);
  }
}

template <class F>
void gauss_kronrod(F& f, const Segment& seg, Panel& panel) {
  const double center = 0.5 * (panel.u0 + panel.u1);
  const double half = 0.5 * (panel.u1 - panel.u0);
  const double width = seg.hi - seg.lo;

  auto mapped = [&](double u) -> Complex {
    switch (seg.map) {
      case PanelMap::linear:
        return evaluate(f, seg.lo + width * u) * width;
      case PanelMap::graded_left:
        return evaluate(f, seg.lo + width * u * u) * (2.0 * width * u);
      case PanelMap::graded_right:
        return evaluate(f, seg.hi - width * u * u) * (2.0 * width * u);
    }
    return {};
  };

  const Complex f_center = mapped(center);
  Complex kronrod = f_center * kKronrodWeights[7];
  Complex gauss = f_center * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const Complex pair = mapped(center - dx) + mapped(center + dx);
    kronrod += pair * kKronrodWeights[j];
    if (j % 2 == 1) gauss += pair * kGaussWeights[j / 2];
  }
  panel.value = kronrod * half;
  panel.error = std::abs((kronrod - gauss) * half);
}

// Pairwise summation over a fixed order.
inline Complex pairwise_sum(std::span<const Complex> values) {
  if (values.empty()) return {};
  if (values.size() <= 8) {
    Complex s{};
    for (const auto& v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

std::vector<Segment> initial_segments(double a, double b, const QuadratureSpec& spec,
                                      const IntegrandHints& hints);

inline bool within_tolerance(double error, Complex value, const QuadratureSpec& spec) {
  return error <= std::max(spec.rel_tol * std::abs(value), spec.abs_tol);
}

}  // namespace quad_detail

/// Integrates f over [a, b]. f may return double or Complex.
///
/// Refines the panel with the largest |K15 - G7| until the total error
/// estimate meets max(rel_tol |I|, abs_tol) or max_subdivisions bisections
/// have been spent. The initial oscillation partition does not count against
/// max_subdivisions. On exhaustion the best value is returned with
/// converged = false.
template <class F>
IntegralResult integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec,
                            const IntegrandHints& hints = {}) {
  using namespace quad_detail;
  IntegralResult result;
  if (a == b) return result;

  const std::vector<Segment> segments = initial_segments(a, b, spec, hints);

  struct ByError {
    const std::vector<Panel>* panels;
    bool operator()(std::size_t lhs, std::size_t rhs) const {
      const double el = (*panels)[lhs].error;
      const double er = (*panels)[rhs].error;
      if (el != er) return el < er;
      return lhs > rhs;
    }
  };

  std::vector<Panel> panels;
  panels.reserve(segments.size() + static_cast<std::size_t>(spec.max_subdivisions) + 1);
  Complex total{};
  double total_error = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    Panel p{s, 0.0, 1.0, {}, 0.0};
    gauss_kronrod(f, segments[s], p);
    total += p.value;
    total_error += p.error;
    panels.push_back(p);
  }

  std::priority_queue<std::size_t, std::vector<std::size_t>, ByError> queue(ByError{&panels});
  for (std::size_t i = 0; i < panels.size(); ++i) queue.push(i);

  int bisections = 0;
  while (!within_tolerance(total_error, total, spec) && bisections < spec.max_subdivisions) {
    const std::size_t worst = queue.top();
    queue.pop();
    const Panel parent = panels[worst];
    const double mid = 0.5 * (parent.u0 + parent.u1);
    if (!(mid > parent.u0 && mid < parent.u1)) break;  // panel at resolution limit

    Panel left{parent.segment, parent.u0, mid, {}, 0.0};
    Panel right{parent.segment, mid, parent.u1, {}, 0.0};
    gauss_kronrod(f, segments[parent.segment], left);
    gauss_kronrod(f, segments[parent.segment], right);
    total += left.value + right.value - parent.value;
    total_error += left.error + right.error - parent.error;

    panels[worst] = left;
    panels.push_back(right);
    queue.push(worst);
    queue.push(panels.size() - 1);
    ++bisections;
  }

  std::vector<std::size_t> order(panels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    if (panels[l].segment != panels[r].segment) return panels[l].segment < panels[r].segment;
    return panels[l].u0 < panels[r].u0;
  });
  std::vector<Complex> values;
  values.reserve(order.size());
  double error = 0.0;
  for (std::size_t i : order) {
    values.push_back(panels[i].value);
    error += panels[i].error;
  }

  result.value = pairwise_sum(values);
  result.error_estimate = error;
  result.subdivisions_used = bisections;
  result.converged = within_tolerance(error, result.value, spec);
  return result;
}

/// Iterated integral of f(tau, tau') over [a, b] x [c, d]; tau is outer.
///
/// The error estimate is the outer estimate plus (b - a) times the largest
/// inner estimate seen. converged requires every inner integral and the
/// outer integral to converge.
template <class F>
IntegralResult integrate_2d(F&& f, double a, double b, double c, double d, const QuadratureSpec& spec,
                            const IntegrandHints2d& hints = {}) {
  IntegralResult result;
  if (a == b || c == d) return result;

  double worst_inner = 0.0;
  int inner_subdivisions = 0;
  bool inner_converged = true;

  auto accumulate = [&](const IntegralResult& r) {
    worst_inner = std::max(worst_inner, r.error_estimate);
    inner_subdivisions += r.subdivisions_used;
    inner_converged = inner_converged && r.converged;
  };

  auto outer = [&](double tau) -> Complex {
    auto row = [&](double tau_p) -> Complex { return quad_detail::evaluate(f, tau, tau_p); };
    if (hints.diagonal_singular && tau > c && tau < d) {
      const IntegralResult lo =
          integrate_1d(row, c, tau, spec, {EndpointSingularity::right, hints.frequency});
      const IntegralResult hi =
          integrate_1d(row, tau, d, spec, {EndpointSingularity::left, hints.frequency});
      accumulate(lo);
      accumulate(hi);
      return lo.value + hi.value;
    }
    EndpointSingularity sing = EndpointSingularity::none;
    if (hints.diagonal_singular) {
      if (tau == c) sing = EndpointSingularity::left;
      if (tau == d) sing = EndpointSingularity::right;
    }
    const IntegralResult r = integrate_1d(row, c, d, spec, {sing, hints.frequency});
    accumulate(r);
    return r.value;
  };

  const IntegralResult o = integrate_1d(outer, a, b, spec, {EndpointSingularity::none, hints.frequency});
  result.value = o.value;
  result.error_estimate = o.error_estimate + std::abs(b - a) * worst_inner;
  result.subdivisions_used = o.subdivisions_used + inner_subdivisions;
  result.converged = o.converged && inner_converged;
  return result;
}

struct ExtrapolationResult {
  Complex value{};
  double error_estimate = 0.0;
  bool converged = true;
};

/// Richardson extrapolation of g(eps) to eps -> 0+ from samples at
/// eps_regulator * 2^-k, k = 0..eps_extrapolation_levels, assuming a
/// polynomial in eps. The error estimate is the last diagonal difference;
/// converged is false when the diagonal differences grow.
template <class G>
ExtrapolationResult extrapolate_eps(G&& g, const QuadratureSpec& spec, double eps_scale = 1.0) {
  const int levels = std::max(spec.eps_extrapolation_levels, 1);
  std::vector<std::vector<Complex>> table(static_cast<std::size_t>(levels) + 1);
  double eps = spec.eps_regulator * eps_scale;
  for (int k = 0; k <= levels; ++k, eps *= 0.5) {
    auto& row = table[static_cast<std::size_t>(k)];
    row.push_back(Complex(g(eps)));
    double factor = 1.0;
    for (int j = 1; j <= k; ++j) {
      factor *= 2.0;
      const Complex prev = table[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
      row.push_back(row[static_cast<std::size_t>(j - 1)] +
                    (row[static_cast<std::size_t>(j - 1)] - prev) / (factor - 1.0));
    }
  }
  ExtrapolationResult result;
  const auto diag = [&](int k) { return table[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)]; };
  result.value = diag(levels);
  result.error_estimate = std::abs(diag(levels) - diag(levels - 1));
  if (levels >= 2) {
    const double previous = std::abs(diag(levels - 1) - diag(levels - 2));
    result.converged = result.error_estimate <= previous;
  }
  return result;
}

}  // namespace udw
