#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgcert/ontology.hpp"
#include "lgcert/quantum.hpp"

namespace lgcert::ontology {
namespace {

std::vector<std::array<StochasticMatrix, 2>> identity_updates(std::size_t n, std::size_t times) {
  std::vector<std::array<StochasticMatrix, 2>> u;
  for (std::size_t t = 0; t < times; ++t) u.push_back({StochasticMatrix::identity(n), StochasticMatrix::identity(n)});
  return u;
}

std::vector<StochasticMatrix> identity_evolution(std::size_t n, std::size_t times) {
  return std::vector<StochasticMatrix>(times, StochasticMatrix::identity(n));
}

// lambda = 0 reads +1, lambda = 1 reads -1, at every time.
ResponseFunction revealing(std::size_t times) { return ResponseFunction(std::vector<std::vector<double>>(times, {1.0, 0.0})); }

OntModel classical_coin(Delta delta) {
  const auto times = static_cast<std::size_t>(to_int(delta));
  return OntModel(delta, EpistemicState({0.5, 0.5}), revealing(times),
                  {identity_updates(2, times), identity_evolution(2, times)});
}

TEST(StochasticMatrix, Validation) {
  EXPECT_THROW(StochasticMatrix({{0.5, 0.4}, {0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(StochasticMatrix({{1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(StochasticMatrix({{1.5, -0.5}, {0.0, 1.0}}), std::invalid_argument);
  const std::vector<std::size_t> bad{0, 0};
  EXPECT_THROW(StochasticMatrix::permutation(bad), std::invalid_argument);
  const std::vector<std::size_t> swap{1, 0};
  const auto p = StochasticMatrix::permutation(swap);
  EXPECT_EQ(p.apply(std::vector<double>{0.3, 0.7}), (std::vector<double>{0.7, 0.3}));
  EXPECT_TRUE(p.then(p).is_deterministic());
  EXPECT_EQ(p.then(p)(0, 0), 1.0);
}

TEST(OntModel, DimensionChecks) {
  EXPECT_THROW(OntModel(Delta::Three, EpistemicState({1.0}), revealing(3), {identity_updates(1, 3), identity_evolution(1, 3)}),
               std::invalid_argument);
  EXPECT_THROW(OntModel(Delta::Three, EpistemicState({0.5, 0.5}), revealing(3), {identity_updates(2, 2), identity_evolution(2, 3)}),
               std::invalid_argument);
  EXPECT_THROW(OntModel(Delta::Three, EpistemicState({0.5, 0.5}), revealing(4), {identity_updates(2, 3), identity_evolution(2, 3)}),
               std::invalid_argument);
  EXPECT_THROW(EpistemicState({0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(ResponseFunction(std::vector<std::vector<double>>{{1.2}}), std::invalid_argument);
}

TEST(PredictJoint, SingleOnticState) {
  const OntModel m(Delta::Four, EpistemicState({1.0}), ResponseFunction(std::vector<std::vector<double>>(4, {1.0})),
                   {identity_updates(1, 4), identity_evolution(1, 4)});
  EXPECT_DOUBLE_EQ(predict_joint(m, Context(1, 3))(Outcome::Plus, Outcome::Plus), 1.0);
  EXPECT_THROW(predict_joint(OntModel(Delta::Three, EpistemicState({1.0}),
                                      ResponseFunction(std::vector<std::vector<double>>(3, {1.0})),
                                      {identity_updates(1, 3), identity_evolution(1, 3)}),
                             Context(1, 4)),
               std::out_of_range);
}

TEST(PredictJoint, ClassicalCoin) {
  const auto j = predict_joint(classical_coin(Delta::Four), Context(1, 2));
  EXPECT_DOUBLE_EQ(j(Outcome::Plus, Outcome::Plus), 0.5);
  EXPECT_DOUBLE_EQ(j(Outcome::Minus, Outcome::Minus), 0.5);
  EXPECT_DOUBLE_EQ(correlator(j), 1.0);
}

TEST(PredictJoint, OutcomeFlipAfterMeasurement) {
  // Hand computation: lambda starts uniform, is read, then flipped; the
  // later reading is always the opposite outcome.
  const std::vector<std::size_t> swap{1, 0};
  std::vector<std::array<StochasticMatrix, 2>> flips;
  for (int t = 0; t < 4; ++t) flips.push_back({StochasticMatrix::permutation(swap), StochasticMatrix::permutation(swap)});
  const OntModel m(Delta::Four, EpistemicState({0.5, 0.5}), revealing(4), {flips, identity_evolution(2, 4)});
  const auto j = predict_joint(m, Context(2, 3));
  EXPECT_DOUBLE_EQ(j(Outcome::Plus, Outcome::Minus), 0.5);
  EXPECT_DOUBLE_EQ(j(Outcome::Minus, Outcome::Plus), 0.5);
  EXPECT_DOUBLE_EQ(j(Outcome::Plus, Outcome::Plus), 0.0);
}

TEST(BehaviorFromModel, ClassicalCoinSaturatesBound) {
  const Behavior b = behavior_from_model(classical_coin(Delta::Four));
  EXPECT_DOUBLE_EQ(LgiFunctional::for_delta(Delta::Four).evaluate(b), 2.0);
  EXPECT_EQ(consistency_report(b).overall_max, 0.0);
}

TEST(Factorizability, Examples) {
  const OntModel point(Delta::Four, EpistemicState::point_mass(2, 1), revealing(4),
                       {identity_updates(2, 4), identity_evolution(2, 4)});
  EXPECT_TRUE(check_factorizability(point, 1e-12));
  EXPECT_FALSE(check_factorizability(classical_coin(Delta::Four), 1e-9));
}

TEST(SampleModels, Reproducible) {
  for (SampleMode mode : {SampleMode::Deterministic, SampleMode::Stochastic}) {
    const auto a = sample_models(17, 3, Delta::Four, mode, 20);
    const auto b = sample_models(17, 3, Delta::Four, mode, 20);
    ASSERT_EQ(a.size(), 20u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(max_distance(behavior_from_model(a[i]), behavior_from_model(b[i])), 0.0);
  }
  const auto c = sample_models(18, 3, Delta::Four, SampleMode::Stochastic, 1);
  const auto a = sample_models(17, 3, Delta::Four, SampleMode::Stochastic, 1);
  EXPECT_GT(max_distance(behavior_from_model(a[0]), behavior_from_model(c[0])), 0.0);
  EXPECT_THROW(sample_models(1, 3, Delta::Four, SampleMode::Stochastic, 0), std::invalid_argument);
}

TEST(SampleModels, DeterministicModeIsPredictable) {
  for (const auto& m : sample_models(5, 4, Delta::Four, SampleMode::Deterministic, 500)) {
    EXPECT_TRUE(m.response().is_deterministic());
    EXPECT_TRUE(is_predictable(behavior_from_model(m), 0.0));
  }
}

TEST(SampleModels, StochasticModelsAreValid) {
  const auto models = sample_models(6, 4, Delta::Four, SampleMode::Stochastic, 1000);
  for (const auto& m : models) {
    Behavior b = behavior_from_model(m);  // JointDistribution validates on construction
    double total = 0.0;
    for (double p : b.table()[0].second.probabilities()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Theorem, PredictableConsistentModelsObeyLgi) {
  for (Delta d : {Delta::Three, Delta::Four}) {
    for (std::size_t n : {2u, 4u, 8u}) {
      const auto r = run_theorem_suite(2024 + n, 3000, n, d);
      EXPECT_EQ(r.tested, 3000u);
      EXPECT_GT(r.passed_filter, 50u) << "n=" << n;
      EXPECT_EQ(r.lgi_violations, 0u);
      EXPECT_EQ(r.factorizability_failures, 0u);
    }
  }
}

TEST(Theorem, FilterIsNotVacuous) {
  // Without the consistency filter, deterministic models do break the bound.
  const auto& f = LgiFunctional::for_delta(Delta::Four);
  double worst = -10;
  for (const auto& m : sample_models(9, 4, Delta::Four, SampleMode::Deterministic, 5000)) {
    worst = std::max(worst, f.evaluate(behavior_from_model(m)));
  }
  EXPECT_GT(worst, f.mr_upper());
}

TEST(Convexity, MixingEpistemicStatesMixesBehaviors) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto base = sample_models(31, 4, Delta::Four, SampleMode::Stochastic, 3);
  for (int i = 0; i < 10; ++i) {
    const auto& m = base[static_cast<std::size_t>(i % 3)];
    const auto mu1 = sample_models(100 + i, 4, Delta::Four, SampleMode::Stochastic, 1)[0].epistemic_state();
    const auto mu2 = sample_models(200 + i, 4, Delta::Four, SampleMode::Stochastic, 1)[0].epistemic_state();
    const double alpha = u(rng);
    std::vector<double> mix(4);
    for (std::size_t k = 0; k < 4; ++k) mix[k] = alpha * mu1.probabilities()[k] + (1 - alpha) * mu2.probabilities()[k];
    double s = 0;
    for (double x : mix) s += x;
    for (double& x : mix) x /= s;
    const Behavior b1 = behavior_from_model(m.with_epistemic_state(mu1));
    const Behavior b2 = behavior_from_model(m.with_epistemic_state(mu2));
    const Behavior bm = behavior_from_model(m.with_epistemic_state(EpistemicState(mix)));
    for (std::size_t c = 0; c < bm.table().size(); ++c) {
      for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(bm.table()[c].second.probabilities()[k],
                    alpha * b1.table()[c].second.probabilities()[k] +
                        (1 - alpha) * b2.table()[c].second.probabilities()[k],
                    1e-12);
      }
    }
  }
}

// A stochastic model with a measurement-reset clock reproduces the mixed
// qubit exactly: after reading a the state is (a, 0), free evolution ticks
// the clock, and xi(+ | (a, k)) = (1 + a cos(k theta)) / 2. An extra state
// u with xi = 1/2 covers the unmeasured preparation.
OntModel clock_model(Delta delta, double theta) {
  const int times = to_int(delta);
  const int ticks = times;  // clock values 0..times-1
  const std::size_t n = 1 + 2 * static_cast<std::size_t>(ticks);
  auto state = [&](int a_index, int k) { return static_cast<std::size_t>(1 + a_index * ticks + k); };

  std::vector<double> plus_row(n);
  plus_row[0] = 0.5;
  for (int a = 0; a < 2; ++a) {
    for (int k = 0; k < ticks; ++k) plus_row[state(a, k)] = 0.5 * (1 + (a == 0 ? 1 : -1) * std::cos(k * theta));
  }

  std::vector<std::array<StochasticMatrix, 2>> updates;
  for (int t = 0; t < times; ++t) {
    std::array<std::vector<std::vector<double>>, 2> rows;
    for (int a = 0; a < 2; ++a) {
      rows[a].assign(n, std::vector<double>(n, 0.0));
      for (std::size_t l = 0; l < n; ++l) rows[a][l][state(a, 0)] = 1.0;
    }
    updates.push_back({StochasticMatrix(rows[0]), StochasticMatrix(rows[1])});
  }
  std::vector<std::vector<double>> tick(n, std::vector<double>(n, 0.0));
  tick[0][0] = 1.0;
  for (int a = 0; a < 2; ++a) {
    for (int k = 0; k < ticks; ++k) tick[state(a, k)][state(a, std::min(k + 1, ticks - 1))] = 1.0;
  }
  return OntModel(delta, EpistemicState::point_mass(n, 0),
                  ResponseFunction(std::vector<std::vector<double>>(static_cast<std::size_t>(times), plus_row)),
                  {updates, std::vector<StochasticMatrix>(static_cast<std::size_t>(times), StochasticMatrix(tick))});
}

TEST(Reproduction, StochasticModelMatchesMixedQubit) {
  const double theta = std::numbers::pi / 4;
  const auto target = quantum::behavior_from_quantum(quantum::QubitState::maximally_mixed(), quantum::Dynamics(1.0),
                                                     quantum::TimeGrid::equally_spaced(Delta::Four, theta));
  const OntModel m = clock_model(Delta::Four, theta);
  const Behavior reproduced = behavior_from_model(m);
  EXPECT_LE(max_distance(reproduced, target), 1e-9);
  EXPECT_FALSE(is_predictable(reproduced, 1e-9));
  EXPECT_NEAR(LgiFunctional::for_delta(Delta::Four).evaluate(reproduced), 2 * std::sqrt(2.0), 1e-9);

  // No predictable, consistent sampled model comes close.
  double closest = 1.0;
  std::size_t admitted = 0;
  for (std::size_t n : {2u, 4u, 9u}) {
    for (const auto& cand : sample_models(77 + n, n, Delta::Four, SampleMode::Deterministic, 3000)) {
      const Behavior b = behavior_from_model(cand);
      if (!is_predictable(b, 1e-9) || consistency_report(b).overall_max > 1e-9) continue;
      ++admitted;
      EXPECT_LE(LgiFunctional::for_delta(Delta::Four).evaluate(b), 2.0 + 1e-9);
      closest = std::min(closest, max_distance(b, target));
    }
  }
  EXPECT_GT(admitted, 0u);
  EXPECT_GT(closest, 0.1);
}

TEST(Reproduction, Delta3) {
  const double theta = std::numbers::pi / 3;
  const auto target = quantum::behavior_from_quantum(quantum::QubitState::maximally_mixed(), quantum::Dynamics(1.0),
                                                     quantum::TimeGrid::equally_spaced(Delta::Three, theta));
  EXPECT_LE(max_distance(behavior_from_model(clock_model(Delta::Three, theta)), target), 1e-9);
}

}  // namespace
}  // namespace lgcert::ontology
