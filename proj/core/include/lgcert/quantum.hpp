// Two-level system with coherent oscillation between the Q = +1 and Q = -1
// states, measured projectively at two times (Lüders update in between).
//
// Conventions: Q = diag(+1, -1) in the computational basis and the generator
// is H = (omega / 2) X. Starting from the Q = +1 state the probability of
// still reading +1 after time t is cos^2(omega t / 2).

#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "lgcert/scenario.hpp"

namespace lgcert::quantum {

using Complex = std::complex<double>;

struct Matrix2 {
  std::array<Complex, 4> m{};  // row-major

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return m[2 * r + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return m[2 * r + c]; }

  static Matrix2 identity() noexcept;
  static Matrix2 pauli_x() noexcept;
  static Matrix2 pauli_y() noexcept;
  static Matrix2 pauli_z() noexcept;

  Matrix2 adjoint() const noexcept;
  Complex trace() const noexcept { return m[0] + m[3]; }

  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) noexcept;
  friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) noexcept;
  friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) noexcept;
  friend Matrix2 operator*(Complex s, const Matrix2& a) noexcept;
};

/// Largest absolute entry difference.
double max_abs_diff(const Matrix2& a, const Matrix2& b) noexcept;

/// exp(-i H t) for a traceless Hermitian H, in closed cos/sin form.
Matrix2 propagator(const Matrix2& traceless_hermitian, double t);

class QubitState {
 public:
  /// Throws std::invalid_argument unless rho is a density matrix (trace 1,
  /// Hermitian, eigenvalues >= -1e-12, all within 1e-12).
  explicit QubitState(const Matrix2& rho);

  static QubitState maximally_mixed();
  /// cos(theta/2)|+1> + e^{i phi} sin(theta/2)|-1>; (0, 0) is the Q = +1 eigenstate.
  static QubitState pure(double theta, double phi);

  const Matrix2& rho() const noexcept { return rho_; }

 private:
  Matrix2 rho_;
};

class Dynamics {
 public:
  /// Throws std::invalid_argument for a non-finite omega.
  explicit Dynamics(double omega = 1.0);

  double omega() const noexcept { return omega_; }
  const Matrix2& generator() const noexcept { return generator_; }
  Matrix2 unitary(double dt) const { return propagator(generator_, dt); }

  static Matrix2 projector(Outcome o) noexcept;
  static Matrix2 observable() noexcept;

 private:
  double omega_;
  Matrix2 generator_;
};

class TimeGrid {
 public:
  /// Throws std::invalid_argument unless times are strictly increasing,
  /// nonnegative and there are 3 or 4 of them.
  explicit TimeGrid(std::vector<double> times);

  /// t_k = k * spacing for k = 1..delta (preparation at t = 0).
  static TimeGrid equally_spaced(Delta delta, double spacing);

  Delta delta() const noexcept { return static_cast<Delta>(times_.size()); }
  std::span<const double> times() const noexcept { return times_; }
  double at(int time_index) const { return times_.at(static_cast<std::size_t>(time_index - 1)); }

 private:
  std::vector<double> times_;
};

/// U rho U^dagger with U = exp(-i H dt). Throws for dt < 0.
QubitState evolve(const QubitState& s, const Dynamics& d, double dt);

/// Tr[Pi_a rho(t)] from a preparation at t = 0.
std::array<double, 2> single_time_distribution(const QubitState& s0, const Dynamics& d, double t);

/// P(a, b) = Tr[Pi_a rho(tA)] Tr[Pi_b rho_a(tB)], rho_a the normalized
/// post-measurement state evolved to tB. Rows of impossible outcomes are zero.
JointDistribution two_time_distribution(const QubitState& s0, const Dynamics& d, double tA, double tB);

/// Every functional context filled from a fresh preparation at t = 0.
Behavior behavior_from_quantum(const QubitState& s0, const Dynamics& d, const TimeGrid& grid);

struct ViolationOptimum {
  double spacing;  // time units; omega * spacing is the phase per step
  double value;
};

/// Maximizes the functional of the maximally mixed, equally spaced behavior
/// over spacing in (0, 2 pi / omega). On ties the smallest spacing wins.
ViolationOptimum find_max_violation(Delta delta, const Dynamics& d);

}  // namespace lgcert::quantum
