// Two-time measurement scenario: outcomes, contexts, joint distributions,
// Leggett-Garg functionals and the operational consistency checks (no
// signaling in time, induction, predictability).
//
// Outcome +1 always maps to array index 0 and -1 to index 1. Every table in
// this library, including the behavior file format, uses that order, so a
// joint distribution is stored as {p(+,+), p(+,-), p(-,+), p(-,-)}.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgcert {

inline constexpr double kNonNegativityTolerance = 1e-12;
inline constexpr double kNormalizationTolerance = 1e-9;

enum class Outcome : int { Plus = 0, Minus = 1 };

inline constexpr std::array<Outcome, 2> kOutcomes{Outcome::Plus, Outcome::Minus};

constexpr std::size_t index_of(Outcome o) noexcept { return static_cast<std::size_t>(o); }
constexpr int value_of(Outcome o) noexcept { return o == Outcome::Plus ? 1 : -1; }
constexpr Outcome outcome_at(std::size_t i) noexcept { return i == 0 ? Outcome::Plus : Outcome::Minus; }
constexpr Outcome flipped(Outcome o) noexcept { return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus; }

/// Number of measurement times in the functional: 3 (Wigner form) or 4 (CHSH form).
enum class Delta : int { Three = 3, Four = 4 };

constexpr int to_int(Delta d) noexcept { return static_cast<int>(d); }

/// Throws std::invalid_argument unless value is 3 or 4.
Delta delta_from_int(int value);

class DeltaMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidDistribution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered pair of 1-based time indices with earlier < later.
class Context {
 public:
  Context(int earlier, int later);

  int earlier() const noexcept { return earlier_; }
  int later() const noexcept { return later_; }
  bool contains(int time) const noexcept { return time == earlier_ || time == later_; }

  std::string label() const;  // "1-2"

  friend auto operator<=>(const Context&, const Context&) = default;

 private:
  int earlier_;
  int later_;
};

enum class Slot { Earlier, Later };

/// Joint distribution of the two outcomes of a context.
class JointDistribution {
 public:
  /// Probabilities in the fixed order (+,+), (+,-), (-,+), (-,-).
  /// Throws InvalidDistribution on negative entries or bad normalization.
  explicit JointDistribution(const std::array<double, 4>& p);

  static JointDistribution point_mass(Outcome a, Outcome b);
  static JointDistribution uniform();

  double operator()(Outcome a, Outcome b) const noexcept {
    return p_[2 * index_of(a) + index_of(b)];
  }
  const std::array<double, 4>& probabilities() const noexcept { return p_; }

  std::array<double, 2> marginal(Slot slot) const noexcept;

 private:
  std::array<double, 4> p_;
};

/// Sum over outcomes of a*b*p(a,b).
double correlator(const JointDistribution& j) noexcept;

struct SignedContext {
  Context context;
  int sign;
};

class Behavior;

class LgiFunctional {
 public:
  static const LgiFunctional& for_delta(Delta delta);

  Delta delta() const noexcept { return delta_; }
  std::span<const SignedContext> terms() const noexcept { return terms_; }
  std::vector<Context> contexts() const;
  double mr_lower() const noexcept { return mr_lower_; }
  double mr_upper() const noexcept { return mr_upper_; }

  /// Sum of sign * correlator over the functional's contexts.
  /// Throws DeltaMismatch when the behavior was built for the other delta.
  double evaluate(const Behavior& b) const;

  /// Position of a context in terms(), or -1.
  int position_of(const Context& c) const noexcept;

 private:
  LgiFunctional(Delta delta, std::vector<SignedContext> terms, double lower, double upper);

  Delta delta_;
  std::vector<SignedContext> terms_;
  double mr_lower_;
  double mr_upper_;
};

/// Table of joint distributions over exactly the contexts of the functional
/// for its delta. Entries are kept in the functional's term order.
class Behavior {
 public:
  /// Throws std::invalid_argument if the context set differs from the
  /// functional's (missing, extra or duplicate contexts).
  Behavior(Delta delta, std::vector<std::pair<Context, JointDistribution>> table);

  Delta delta() const noexcept { return delta_; }
  const std::vector<std::pair<Context, JointDistribution>>& table() const noexcept { return table_; }

  /// Throws std::out_of_range for an unknown context.
  const JointDistribution& at(const Context& c) const;

 private:
  Delta delta_;
  std::vector<std::pair<Context, JointDistribution>> table_;
};

double evaluate(const LgiFunctional& f, const Behavior& b);

/// Marginal-consistency residuals per time index (vector index = time - 1).
///
/// Induction compares earlier-slot marginals of a time with each other. NSIT
/// compares every later-slot marginal of a time with all other marginals of
/// that time. Distances are L-infinity over the two outcomes; a time with
/// fewer than two marginals of the relevant kind has residual 0.
struct ConsistencyReport {
  std::vector<double> nsit_residual;
  std::vector<double> induction_residual;
  double overall_max = 0.0;
};

ConsistencyReport consistency_report(const Behavior& b);

/// True iff every probability of every context is within tol of 0 or 1.
bool is_predictable(const Behavior& b, double tol);

/// Largest L-infinity gap between matching entries of two behaviors.
double max_distance(const Behavior& a, const Behavior& b);

/// Point-mass behavior induced by assigning one outcome to each time.
/// assignment[k] is the outcome at time k + 1.
Behavior deterministic_behavior(Delta delta, std::span<const Outcome> assignment);

/// All 2^delta global-assignment behaviors, in binary counting order with
/// time 1 as the most significant digit (Plus = 0).
std::vector<Behavior> deterministic_behaviors(Delta delta);

/// (min, max) of the functional over all deterministic behaviors.
std::pair<double, double> macrorealist_bounds(Delta delta);

}  // namespace lgcert
