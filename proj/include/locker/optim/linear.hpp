#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace locker::optim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct LinearTerm {
  int var;
  double coef;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Sense sense;
  double rhs;
  std::string name;
};

/// Raised when a solver cannot certify its answer (iteration cap, loss of
/// feasibility after pivoting). Never swallowed by the solvers themselves.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char* sense_symbol(Sense sense);

/// Sum of coef * values[var] over the terms.
template <typename Values>
double activity(const std::vector<LinearTerm>& terms, const Values& values) {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.coef * static_cast<double>(values[t.var]);
  return sum;
}

}  // namespace locker::optim
