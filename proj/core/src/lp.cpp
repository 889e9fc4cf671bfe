#include "lgcert/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lgcert::lp {

LpProblem::LpProblem(std::size_t n_vars) : n_vars_(n_vars), objective_(n_vars, 0.0) {
  if (n_vars == 0) throw std::invalid_argument("LP needs at least one variable");
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " has a non-finite entry");
  }
}

}  // namespace

void LpProblem::set_objective(std::vector<double> objective) {
  if (objective.size() != n_vars_) throw std::invalid_argument("objective length differs from n_vars");
  check_finite(objective, "objective");
  objective_ = std::move(objective);
}

void LpProblem::add_equality(std::vector<double> coefficients, double rhs) {
  if (coefficients.size() != n_vars_) throw std::invalid_argument("constraint length differs from n_vars");
  check_finite(coefficients, "constraint");
  if (!std::isfinite(rhs)) throw std::invalid_argument("constraint rhs is not finite");
  equalities_.push_back({std::move(coefficients), rhs});
}

namespace {

// Column layout: [x_0..x_{n-1} | s_0..s_{n-1} | a_0..a_{m-1} | rhs], where
// s_i is the slack of x_i <= 1 and a_k the phase-one artificial of row k.
class Tableau {
 public:
  Tableau(const LpProblem& p) : n_(p.n_vars()), m_(p.equalities().size()) {
    cols_ = 2 * n_ + m_;
    rows_.assign(m_ + n_, std::vector<double>(cols_ + 1, 0.0));
    basis_.resize(m_ + n_);
    for (std::size_t k = 0; k < m_; ++k) {
      const auto& eq = p.equalities()[k];
      const double sign = eq.rhs < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) rows_[k][j] = sign * eq.coefficients[j];
      rows_[k][2 * n_ + k] = 1.0;
      rows_[k][cols_] = sign * eq.rhs;
      basis_[k] = 2 * n_ + k;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      auto& row = rows_[m_ + i];
      row[i] = 1.0;
      row[n_ + i] = 1.0;
      row[cols_] = 1.0;
      basis_[m_ + i] = n_ + i;
    }
  }

  bool is_artificial(std::size_t col) const noexcept { return col >= 2 * n_; }

  // Minimizes cost . (all columns). Returns false if unbounded.
  bool optimize(const std::vector<double>& cost, bool allow_artificial) {
    const std::size_t max_iterations = 1000 * (cols_ + rows_.size());
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      const std::size_t limit = allow_artificial ? cols_ : 2 * n_;
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (reduced_cost(cost, j) < -kFeasibilityTolerance) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return true;

      std::size_t leaving = rows_.size();
      double best = 0.0;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double a = rows_[i][entering];
        if (a <= kPivotTolerance) continue;
        const double ratio = rows_[i][cols_] / a;
        if (leaving == rows_.size() || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leaving])) {
          leaving = i;
          best = ratio;
        }
      }
      if (leaving == rows_.size()) return false;
      pivot(leaving, entering);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

  // After phase one: pivot zero-level artificials out of the basis and drop
  // rows that turn out to be linearly dependent.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (!is_artificial(basis_[i])) {
        ++i;
        continue;
      }
      std::size_t col = cols_;
      double best = kPivotTolerance;
      for (std::size_t j = 0; j < 2 * n_; ++j) {
        if (std::abs(rows_[i][j]) > best) {
          best = std::abs(rows_[i][j]);
          col = j;
        }
      }
      if (col == cols_) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        pivot(i, col);
        ++i;
      }
    }
  }

  double artificial_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (is_artificial(basis_[i])) s += rows_[i][cols_];
    }
    return s;
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_];
    }
    return x;
  }

  std::size_t n_cols() const noexcept { return cols_; }
  std::size_t n_vars() const noexcept { return n_; }

 private:
  double reduced_cost(const std::vector<double>& cost, std::size_t j) const {
    double r = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) r -= cost[basis_[i]] * rows_[i][j];
    return r;
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    const double inv = 1.0 / prow[c];
    for (double& v : prow) v *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      auto& row = rows_[i];
      const double factor = row[c];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        row[j] -= factor * prow[j];
        if (std::abs(row[j]) < 1e-15) row[j] = 0.0;
      }
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  std::size_t n_;
  std::size_t m_;
  std::size_t cols_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve(const LpProblem& problem) {
  Tableau tab(problem);
  const std::size_t n = problem.n_vars();

  std::vector<double> phase_one(tab.n_cols(), 0.0);
  for (std::size_t j = 2 * n; j < tab.n_cols(); ++j) phase_one[j] = 1.0;
  [[maybe_unused]] const bool bounded_one = tab.optimize(phase_one, true);
  assert(bounded_one);

  if (tab.artificial_sum() > kFeasibilityTolerance) return {LpStatus::Infeasible, 0.0, {}};
  tab.expel_artificials();

  std::vector<double> phase_two(tab.n_cols(), 0.0);
  for (std::size_t j = 0; j < n; ++j) phase_two[j] = -problem.objective()[j];
  if (!tab.optimize(phase_two, false)) {
    // Box bounds make the feasible set compact.
    assert(false && "bounded LP reported unbounded");
    return {LpStatus::Unbounded, 0.0, {}};
  }

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.point = tab.primal();
  for (double& x : sol.point) x = std::clamp(x, 0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) sol.value += problem.objective()[j] * sol.point[j];
  return sol;
}

double max_violation(const LpProblem& problem, std::span<const double> point) {
  if (point.size() != problem.n_vars()) throw std::invalid_argument("point length differs from n_vars");
  double worst = 0.0;
  for (double x : point) worst = std::max({worst, -x, x - 1.0});
  for (const auto& eq : problem.equalities()) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) lhs += eq.coefficients[j] * point[j];
    worst = std::max(worst, std::abs(lhs - eq.rhs));
  }
  return worst;
}

}  // namespace lgcert::lp
