#pragma once

#include <stdexcept>
#include <string>

namespace udw {

// Argument outside the mathematical domain of an operation (negative Bessel
// argument, K0 at the origin, tau_f < tau_i, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// An intermediate quantity left the representable double range.
class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

// The closed-form matter path was asked to evaluate inside the resonance
// window; callers should use the resonance or quadrature path instead.
class ResonanceProximityError : public DomainError {
 public:
  explicit ResonanceProximityError(const std::string& what) : DomainError(what) {}
};

}  // namespace udw
