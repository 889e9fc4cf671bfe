// Dense linear programs of the form
//
//   maximize  c . x   subject to  A x = b,  0 <= x_i <= 1
//
// solved with a two-phase primal simplex using Bland's rule. Intended for
// the small systems that arise in certification (a few dozen variables).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lgcert::lp {

inline constexpr double kPivotTolerance = 1e-10;
inline constexpr double kFeasibilityTolerance = 1e-9;

struct EqualityConstraint {
  std::vector<double> coefficients;
  double rhs = 0.0;
};

class LpProblem {
 public:
  explicit LpProblem(std::size_t n_vars);

  std::size_t n_vars() const noexcept { return n_vars_; }

  /// Throws std::invalid_argument on length mismatch or non-finite entries.
  void set_objective(std::vector<double> objective);
  void add_equality(std::vector<double> coefficients, double rhs);

  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<EqualityConstraint>& equalities() const noexcept { return equalities_; }

 private:
  std::size_t n_vars_;
  std::vector<double> objective_;
  std::vector<EqualityConstraint> equalities_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;          // meaningful iff Optimal
  std::vector<double> point;   // meaningful iff Optimal
};

LpSolution solve(const LpProblem& problem);

/// Largest violation of the equalities and box bounds at point.
double max_violation(const LpProblem& problem, std::span<const double> point);

}  // namespace lgcert::lp
