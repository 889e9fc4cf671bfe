// Finite ontological models of a two-time measurement scenario.
//
// An ontic state lambda lives in {0, ..., n-1}. The model fixes
//   - the epistemic state mu at the preparation (t = 0),
//   - a response function xi(k | lambda, t) per measurement time,
//   - a measurement update rho(lambda' | t, k, lambda) per (time, outcome),
//   - free evolution maps between consecutive times, interval 0 being the
//     preparation to time 1.
// Joint probabilities follow
//   P(a, b) = sum mu_i(lambda) xi(a|lambda, t_i) rho(lambda'|t_i, a, lambda)
//             [F_i ... F_{j-1}](lambda'' | lambda') xi(b|lambda'', t_j),
// where mu_i is mu carried to t_i by the free evolution.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lgcert/scenario.hpp"

namespace lgcert::ontology {

inline constexpr double kStochasticTolerance = 1e-12;

/// Row-stochastic n x n matrix, entry (from, to).
class StochasticMatrix {
 public:
  /// Throws std::invalid_argument for non-square data, negative entries or
  /// rows not summing to 1 within 1e-12.
  explicit StochasticMatrix(std::vector<std::vector<double>> rows);

  static StochasticMatrix identity(std::size_t n);
  /// Permutation lambda -> image[lambda].
  static StochasticMatrix permutation(std::span<const std::size_t> image);

  std::size_t size() const noexcept { return rows_.size(); }
  double operator()(std::size_t from, std::size_t to) const { return rows_[from][to]; }

  /// Pushes a distribution forward: out[to] = sum_from in[from] * M(from, to).
  std::vector<double> apply(std::span<const double> distribution) const;
  StochasticMatrix then(const StochasticMatrix& next) const;

  bool is_deterministic() const noexcept;

 private:
  std::vector<std::vector<double>> rows_;
};

class EpistemicState {
 public:
  explicit EpistemicState(std::vector<double> mu);
  static EpistemicState point_mass(std::size_t n, std::size_t lambda);

  std::size_t size() const noexcept { return mu_.size(); }
  std::span<const double> probabilities() const noexcept { return mu_; }

 private:
  std::vector<double> mu_;
};

/// xi(+1 | lambda, t) for every measurement time; xi(-1 | .) is the complement.
class ResponseFunction {
 public:
  /// plus[time - 1][lambda]; throws unless every entry lies in [0, 1].
  explicit ResponseFunction(std::vector<std::vector<double>> plus);

  std::size_t n_times() const noexcept { return plus_.size(); }
  std::size_t n_ontic() const noexcept { return plus_.empty() ? 0 : plus_.front().size(); }
  double probability(Outcome k, std::size_t lambda, int time) const;
  bool is_deterministic() const noexcept;

 private:
  std::vector<std::vector<double>> plus_;
};

struct TransformationMap {
  /// measurement_update[time - 1][index_of(outcome)]
  std::vector<std::array<StochasticMatrix, 2>> measurement_update;
  /// free_evolution[k] carries time k to time k + 1 (time 0 = preparation).
  std::vector<StochasticMatrix> free_evolution;
};

class OntModel {
 public:
  /// Throws std::invalid_argument on inconsistent dimensions.
  OntModel(Delta delta, EpistemicState mu, ResponseFunction xi, TransformationMap maps);

  Delta delta() const noexcept { return delta_; }
  std::size_t n_ontic() const noexcept { return mu_.size(); }
  const EpistemicState& epistemic_state() const noexcept { return mu_; }
  const ResponseFunction& response() const noexcept { return xi_; }
  const TransformationMap& maps() const noexcept { return maps_; }

  /// Same model with a different preparation.
  OntModel with_epistemic_state(EpistemicState mu) const;

 private:
  Delta delta_;
  EpistemicState mu_;
  ResponseFunction xi_;
  TransformationMap maps_;
};

/// Throws std::out_of_range if the context exceeds the model's times.
JointDistribution predict_joint(const OntModel& m, const Context& c);

Behavior behavior_from_model(const OntModel& m);

/// True iff every context's joint equals the product of its own two
/// marginals within tol.
bool check_factorizability(const OntModel& m, double tol);

enum class SampleMode { Deterministic, Stochastic };

/// Reproducible pseudo-random models. Deterministic mode uses point-mass
/// mu, {0,1} responses and permutation maps; stochastic mode draws every
/// distribution uniformly at random. Each call owns its generator.
std::vector<OntModel> sample_models(std::uint64_t seed, std::size_t n, Delta delta, SampleMode mode,
                                    std::size_t count);

struct TheoremSuiteReport {
  std::size_t tested = 0;
  std::size_t passed_filter = 0;  // predictable and consistent within tolerance
  std::size_t lgi_violations = 0;
  std::size_t factorizability_failures = 0;
  double max_functional = 0.0;  // over filtered models
  double min_functional = 0.0;
};

/// Samples `runs` deterministic models, keeps the predictable ones whose
/// consistency residuals are <= filter_tol, and checks the macrorealist
/// bounds and factorizability (both within filter_tol) on each.
TheoremSuiteReport run_theorem_suite(std::uint64_t seed, std::size_t runs, std::size_t n, Delta delta,
                                     double filter_tol = 1e-9);

}  // namespace lgcert::ontology
