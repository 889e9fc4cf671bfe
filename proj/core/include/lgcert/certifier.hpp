// Randomness certification from a Leggett-Garg violation.
//
// For a target context (t_a, t_b) and outcome pair (i, j) the certifier
// maximizes P_target(i, j) over all behaviors that
//   - are normalized and nonnegative in every context,
//   - reach the functional level f = mr_upper + epsilon,
//   - have matching marginals wherever a time index is shared by two
//     contexts (no signaling in time plus induction).
// The guessing probability is the largest of the four optima and the
// certified min-entropy is -log2 of it.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lgcert/lp.hpp"
#include "lgcert/scenario.hpp"

namespace lgcert {

struct CertificationOptions {
  /// Drop induction equalities (earlier-slot vs earlier-slot) and keep only
  /// the constraints that involve a later-slot marginal.
  bool nsit_only = false;
  /// Use f >= mr_upper + epsilon instead of equality.
  bool relaxed = false;
};

class InfeasibleEpsilon : public std::runtime_error {
 public:
  InfeasibleEpsilon(double epsilon, double nsit_epsilon_max);

  double epsilon() const noexcept { return epsilon_; }
  /// Largest epsilon admitted by the consistent polytope.
  double epsilon_max() const noexcept { return epsilon_max_; }

 private:
  double epsilon_;
  double epsilon_max_;
};

struct CertificationQuery {
  Delta delta = Delta::Four;
  double epsilon = 0.0;
  Context target{1, 2};
  CertificationOptions options{};
};

/// Variable index of p_context(a, b) inside build_lp's problems: contexts in
/// functional order, four entries each in the fixed outcome order.
std::size_t variable_index(std::size_t context_position, Outcome a, Outcome b) noexcept;

/// Row blocks of the problem built by build_lp, in order.
struct LpLayout {
  std::size_t normalization_rows = 0;
  std::size_t level_rows = 0;
  std::size_t consistency_rows = 0;
  std::size_t behavior_vars = 0;  // 4 per context; a relaxed problem has one slack after them
};

LpLayout lp_layout(Delta delta, const CertificationOptions& options = {});

/// Throws std::invalid_argument if the query is malformed (target outside
/// the functional, negative or non-finite epsilon).
lp::LpProblem build_lp(const CertificationQuery& q, Outcome i, Outcome j);

/// Same constraint system with an arbitrary objective over behavior variables.
lp::LpProblem build_constraint_system(Delta delta, double epsilon, const CertificationOptions& options);

struct CertificateResult {
  std::array<double, 4> per_outcome_optima{};  // fixed outcome order
  double guessing_probability = 1.0;
  double min_entropy_bits = 0.0;
  Behavior witness;
};

/// Throws InfeasibleEpsilon when no consistent behavior reaches the level.
CertificateResult guessing_probability(const CertificationQuery& q);

/// Max of the functional over the consistent polytope (4 for delta 4, 3 for delta 3).
double consistent_functional_maximum(Delta delta, const CertificationOptions& options = {});

struct ContextCertificate {
  Context context;
  double min_entropy_bits;
  double guessing_probability;
};

struct CurveRow {
  double epsilon;
  double functional_value;
  std::vector<ContextCertificate> per_context;
  double min_entropy_bits;      // minimum over per_context
  double guessing_probability;  // maximum over per_context
};

/// Certificates over a strictly increasing epsilon grid. Solves run
/// concurrently; rows come back in grid order. Throws InfeasibleEpsilon for
/// the first infeasible grid value and std::invalid_argument for a bad grid.
std::vector<CurveRow> sweep(Delta delta, std::span<const double> eps_grid, std::span<const Context> contexts,
                            const CertificationOptions& options = {});

/// `points` evenly spaced values in (0, eps_max]; eps_max is the quantum
/// optimum minus the bound (2*sqrt(2) - 2 or 1/2), or the consistent-polytope
/// maximum when full_range is set.
std::vector<double> default_epsilon_grid(Delta delta, bool full_range, std::size_t points = 20);

}  // namespace lgcert
