#pragma once

#include <stdexcept>
#include <string>

namespace expfunc {

// Argument outside the mathematical domain of an operation
// (invalid spec parameters, abscissa at/below the domain guard, drift
// present where a finite saddle point is required, ...).
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Malformed model configuration (unknown model name, unknown or missing
// keys, values of the wrong type or sign).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An adaptive quadrature failed to reach the requested tolerance within
// its subdivision budget.
struct NonconvergentQuadrature : std::runtime_error {
  NonconvergentQuadrature(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_error(achieved) {}
  double achieved_error;
};

// A root bracketing / refinement loop failed to converge.
struct NonconvergentRootFind : std::runtime_error {
  explicit NonconvergentRootFind(const std::string& what)
      : std::runtime_error(what) {}
};

// The contour truncation loop hit its cap without the tail contribution
// falling under tolerance and without a certified decay envelope.
struct TruncationUnbounded : std::runtime_error {
  explicit TruncationUnbounded(const std::string& what)
      : std::runtime_error(what) {}
};

// A diagnostic could not separate its hypothesis from its negation within
// the configured margin (e.g. positive increase with criterion values
// approaching 1).
struct InconclusiveDiagnostic : std::runtime_error {
  explicit InconclusiveDiagnostic(const std::string& what)
      : std::runtime_error(what) {}
};

// A computation exceeded its configured evaluation budget.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace expfunc
