#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lgcert/quantum.hpp"

namespace lgcert::quantum {
namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2cd to_eigen(const Matrix2& m) {
  Eigen::Matrix2cd e;
  e << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  return e;
}

// Series-based exp(-i H t) from Eigen, independent of the closed form.
Eigen::Matrix2cd oracle_unitary(const Dynamics& d, double t) {
  const Eigen::Matrix2cd h = to_eigen(d.generator());
  return (std::complex<double>(0, -t) * h).exp();
}

// Two-time distribution from the oracle unitary with explicit projectors.
std::array<double, 4> oracle_two_time(const Eigen::Matrix2cd& rho0, const Dynamics& d, double ta, double tb) {
  const Eigen::Matrix2cd ua = oracle_unitary(d, ta);
  const Eigen::Matrix2cd uab = oracle_unitary(d, tb - ta);
  const Eigen::Matrix2cd rho_a = ua * rho0 * ua.adjoint();
  std::array<Eigen::Matrix2cd, 2> proj;
  proj[0] << 1, 0, 0, 0;
  proj[1] << 0, 0, 0, 1;
  std::array<double, 4> p{};
  for (int a = 0; a < 2; ++a) {
    // unnormalized Lüders branch: probabilities come out as Tr[Pi_b U Pi_a rho Pi_a U^+]
    const Eigen::Matrix2cd branch = uab * proj[a] * rho_a * proj[a] * uab.adjoint();
    for (int b = 0; b < 2; ++b) p[2 * a + b] = (proj[b] * branch).trace().real();
  }
  return p;
}

TEST(QubitState, Validation) {
  EXPECT_NO_THROW(QubitState::maximally_mixed());
  EXPECT_NO_THROW(QubitState::pure(1.0, 2.0));
  Matrix2 bad_trace{{1.0, 0.0, 0.0, 0.5}};
  EXPECT_THROW(QubitState{bad_trace}, std::invalid_argument);
  Matrix2 not_hermitian{{0.5, 0.3, 0.0, 0.5}};
  EXPECT_THROW(QubitState{not_hermitian}, std::invalid_argument);
  Matrix2 negative{{1.2, 0.0, 0.0, -0.2}};
  EXPECT_THROW(QubitState{negative}, std::invalid_argument);
  Matrix2 big_coherence{{0.5, 0.6, 0.6, 0.5}};
  EXPECT_THROW(QubitState{big_coherence}, std::invalid_argument);
}

TEST(Dynamics, ProjectorAlgebra) {
  const Matrix2 pp = Dynamics::projector(Outcome::Plus);
  const Matrix2 pm = Dynamics::projector(Outcome::Minus);
  EXPECT_EQ(max_abs_diff(pp + pm, Matrix2::identity()), 0.0);
  EXPECT_EQ(max_abs_diff(pp * pp, pp), 0.0);
  EXPECT_EQ(max_abs_diff(pm * pm, pm), 0.0);
  EXPECT_EQ(max_abs_diff(Dynamics::observable(), Matrix2::pauli_z()), 0.0);
}

TEST(Propagator, MatchesMatrixExponential) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Dynamics d(u(rng));
    const double t = std::abs(u(rng));
    const Eigen::Matrix2cd expected = oracle_unitary(d, t);
    const Eigen::Matrix2cd got = to_eigen(d.unitary(t));
    EXPECT_LT((expected - got).cwiseAbs().maxCoeff(), 1e-13);
  }
  // general traceless generator
  const Matrix2 h = Complex(0.3, 0) * Matrix2::pauli_x() + Complex(-0.7, 0) * Matrix2::pauli_y() +
                    Complex(1.1, 0) * Matrix2::pauli_z();
  const Eigen::Matrix2cd expected = (std::complex<double>(0, -0.9) * to_eigen(h)).exp();
  EXPECT_LT((expected - to_eigen(propagator(h, 0.9))).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Evolve, Examples) {
  const Dynamics d(1.3);
  const QubitState s = QubitState::pure(0.4, 1.1);
  EXPECT_LT(max_abs_diff(evolve(s, d, 0.0).rho(), s.rho()), 1e-15);
  EXPECT_LT(max_abs_diff(evolve(QubitState::maximally_mixed(), d, 2.7).rho(), QubitState::maximally_mixed().rho()),
            1e-15);
  const QubitState flipped = evolve(QubitState::pure(0, 0), d, kPi / d.omega());
  EXPECT_LT(max_abs_diff(flipped.rho(), QubitState::pure(kPi, 0).rho()), 1e-12);
  EXPECT_THROW(evolve(s, d, -1.0), std::invalid_argument);
}

TEST(Evolve, ChapmanKolmogorov) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const Dynamics d(0.9);
  for (int i = 0; i < 100; ++i) {
    const QubitState s = QubitState::pure(u(rng), 2 * u(rng));
    const double t1 = u(rng);
    const double t2 = u(rng);
    EXPECT_LT(max_abs_diff(evolve(evolve(s, d, t1), d, t2).rho(), evolve(s, d, t1 + t2).rho()), 1e-12);
  }
}

TEST(TwoTime, MixedStateClosedForm) {
  // For I/2: P(a,b) = (1 + a b cos(theta)) / 4 with theta = omega (tB - tA).
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  const Dynamics d(1.7);
  for (int i = 0; i < 100; ++i) {
    const double ta = u(rng);
    const double dt = u(rng) + 1e-3;
    const auto j = two_time_distribution(QubitState::maximally_mixed(), d, ta, ta + dt);
    const double c = std::cos(d.omega() * dt);
    for (Outcome a : kOutcomes) {
      for (Outcome b : kOutcomes) EXPECT_NEAR(j(a, b), 0.25 * (1 + value_of(a) * value_of(b) * c), 1e-13);
    }
    EXPECT_NEAR(correlator(j), c, 1e-12);
  }
}

TEST(TwoTime, ImmediateRemeasurementRepeats) {
  const auto j = two_time_distribution(QubitState::maximally_mixed(), Dynamics(1.0), 0.3, 0.3 + 1e-9);
  EXPECT_NEAR(j(Outcome::Plus, Outcome::Plus), 0.5, 1e-15);
  EXPECT_NEAR(j(Outcome::Minus, Outcome::Minus), 0.5, 1e-15);
  EXPECT_NEAR(j(Outcome::Plus, Outcome::Minus), 0.0, 1e-15);
  EXPECT_NEAR(correlator(two_time_distribution(QubitState::maximally_mixed(), Dynamics(1.0), 0.0, kPi / 4)),
              std::sqrt(2.0) / 2, 1e-15);
}

TEST(TwoTime, MatchesOracleForPureStates) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const Dynamics d(0.5 + u(rng));
    const QubitState s = QubitState::pure(u(rng), 2 * u(rng));
    const double ta = u(rng);
    const double tb = ta + u(rng) + 1e-3;
    const auto expected = oracle_two_time(to_eigen(s.rho()), d, ta, tb);
    const auto got = two_time_distribution(s, d, ta, tb).probabilities();
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got[k], expected[k], 1e-12);
  }
}

TEST(TwoTime, FirstMarginalIsSingleTimeDistribution) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const Dynamics d(1.0);
  for (int i = 0; i < 100; ++i) {
    const QubitState s = QubitState::pure(u(rng), u(rng));
    const double ta = u(rng);
    const auto m = two_time_distribution(s, d, ta, ta + 0.5).marginal(Slot::Earlier);
    const auto single = single_time_distribution(s, d, ta);
    EXPECT_NEAR(m[0], single[0], 1e-14);
    EXPECT_NEAR(m[1], single[1], 1e-14);
  }
}

TEST(TwoTime, ImpossibleOutcomeRowIsZero) {
  // Q = +1 eigenstate measured at t = 0: the -1 row never occurs.
  const auto j = two_time_distribution(QubitState::pure(0, 0), Dynamics(1.0), 0.0, 1.0);
  EXPECT_EQ(j(Outcome::Minus, Outcome::Plus), 0.0);
  EXPECT_EQ(j(Outcome::Minus, Outcome::Minus), 0.0);
  EXPECT_NEAR(j(Outcome::Plus, Outcome::Plus), std::pow(std::cos(0.5), 2), 1e-15);
}

TEST(TwoTime, RejectsBadTimes) {
  EXPECT_THROW(two_time_distribution(QubitState::maximally_mixed(), Dynamics(1.0), 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(two_time_distribution(QubitState::maximally_mixed(), Dynamics(1.0), -1.0, 1.0), std::invalid_argument);
}

TEST(TimeGrid, Validation) {
  EXPECT_THROW(TimeGrid({1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(TimeGrid({1.0, 1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(TimeGrid({-1.0, 1.0, 2.0}), std::invalid_argument);
  const auto g = TimeGrid::equally_spaced(Delta::Four, 0.5);
  EXPECT_EQ(g.delta(), Delta::Four);
  EXPECT_DOUBLE_EQ(g.at(1), 0.5);
  EXPECT_DOUBLE_EQ(g.at(4), 2.0);
}

TEST(BehaviorFromQuantum, QuantumOptima) {
  const Dynamics d(2.0);
  const auto b4 = behavior_from_quantum(QubitState::maximally_mixed(), d,
                                        TimeGrid::equally_spaced(Delta::Four, kPi / 4 / d.omega()));
  EXPECT_NEAR(LgiFunctional::for_delta(Delta::Four).evaluate(b4), 2 * std::sqrt(2.0), 1e-12);
  const auto b3 = behavior_from_quantum(QubitState::maximally_mixed(), d,
                                        TimeGrid::equally_spaced(Delta::Three, kPi / 3 / d.omega()));
  EXPECT_NEAR(LgiFunctional::for_delta(Delta::Three).evaluate(b3), 1.5, 1e-12);
}

TEST(BehaviorFromQuantum, MixedStateIsConsistentOnAnyGrid) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  const Dynamics d(1.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> times{u(rng)};
    const int n = i % 2 ? 3 : 4;
    while (static_cast<int>(times.size()) < n) times.push_back(times.back() + u(rng));
    const auto b = behavior_from_quantum(QubitState::maximally_mixed(), d, TimeGrid(times));
    EXPECT_LE(consistency_report(b).overall_max, 1e-12);
  }
}

TEST(BehaviorFromQuantum, PureStateSignalsInTime) {
  // Oracle: with the t2 measurement the t3 statistics are 1/2 each; without it
  // P(+ at t3) = cos^2(3 pi / 8). The gap is 1/2 - cos^2(3 pi / 8) = sqrt(2)/4.
  const Dynamics d(1.0);
  const auto b = behavior_from_quantum(QubitState::pure(0, 0), d, TimeGrid::equally_spaced(Delta::Four, kPi / 4));
  const auto r = consistency_report(b);
  const double no_earlier = std::pow(std::cos(3 * kPi / 8), 2);
  const auto oracle = oracle_two_time(to_eigen(QubitState::pure(0, 0).rho()), d, 2 * kPi / 4, 3 * kPi / 4);
  const double with_earlier = oracle[0] + oracle[2];
  EXPECT_NEAR(with_earlier, 0.5, 1e-12);
  EXPECT_NEAR(r.nsit_residual[2], std::abs(with_earlier - no_earlier), 1e-12);
  EXPECT_NEAR(r.nsit_residual[2], std::sqrt(2.0) / 4, 1e-12);
  EXPECT_GT(r.nsit_residual[2], 0.1);
  // induction holds in quantum mechanics
  for (double x : r.induction_residual) EXPECT_LE(x, 1e-12);
}

TEST(BehaviorFromQuantum, EveryDistributionValid) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Dynamics d(0.1 + u(rng));
    const QubitState s = QubitState::pure(u(rng), 2 * u(rng));
    EXPECT_NO_THROW(behavior_from_quantum(s, d, TimeGrid::equally_spaced(i % 2 ? Delta::Three : Delta::Four, u(rng) + 0.01)));
  }
}

TEST(MaxViolation, ReproducesKnownOptima) {
  for (double omega : {1.0, 2.5}) {
    const Dynamics d(omega);
    const auto v4 = find_max_violation(Delta::Four, d);
    EXPECT_NEAR(v4.value, 2 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(omega * v4.spacing, kPi / 4, 1e-6);
    const auto v3 = find_max_violation(Delta::Three, d);
    EXPECT_NEAR(v3.value, 1.5, 1e-9);
    EXPECT_NEAR(omega * v3.spacing, kPi / 3, 1e-6);
  }
}

TEST(MaxViolation, ReducedObjectivesMatchSimulator) {
  // The equal-spacing objectives reduce to 3cos x - cos 3x and 2cos x - cos 2x.
  const Dynamics d(1.0);
  const auto& f4 = LgiFunctional::for_delta(Delta::Four);
  const auto& f3 = LgiFunctional::for_delta(Delta::Three);
  for (int k = 1; k < 60; ++k) {
    const double x = 2 * kPi * k / 60;
    const auto mixed = QubitState::maximally_mixed();
    EXPECT_NEAR(f4.evaluate(behavior_from_quantum(mixed, d, TimeGrid::equally_spaced(Delta::Four, x))),
                3 * std::cos(x) - std::cos(3 * x), 1e-12);
    EXPECT_NEAR(f3.evaluate(behavior_from_quantum(mixed, d, TimeGrid::equally_spaced(Delta::Three, x))),
                2 * std::cos(x) - std::cos(2 * x), 1e-12);
  }
  EXPECT_NEAR(f3.evaluate(behavior_from_quantum(QubitState::maximally_mixed(), d,
                                                TimeGrid::equally_spaced(Delta::Three, kPi))),
              -3.0, 1e-12);
}

}  // namespace
}  // namespace lgcert::quantum
