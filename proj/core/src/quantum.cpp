#include "lgcert/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lgcert::quantum {

Matrix2 Matrix2::identity() noexcept { return {{1.0, 0.0, 0.0, 1.0}}; }
Matrix2 Matrix2::pauli_x() noexcept { return {{0.0, 1.0, 1.0, 0.0}}; }
Matrix2 Matrix2::pauli_y() noexcept { return {{0.0, Complex(0, -1), Complex(0, 1), 0.0}}; }
Matrix2 Matrix2::pauli_z() noexcept { return {{1.0, 0.0, 0.0, -1.0}}; }

Matrix2 Matrix2::adjoint() const noexcept {
  return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) noexcept {
  Matrix2 c;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t k = 0; k < 2; ++k) c(r, k) = a(r, 0) * b(0, k) + a(r, 1) * b(1, k);
  }
  return c;
}

Matrix2 operator+(const Matrix2& a, const Matrix2& b) noexcept {
  Matrix2 c;
  for (std::size_t i = 0; i < 4; ++i) c.m[i] = a.m[i] + b.m[i];
  return c;
}

Matrix2 operator-(const Matrix2& a, const Matrix2& b) noexcept {
  Matrix2 c;
  for (std::size_t i = 0; i < 4; ++i) c.m[i] = a.m[i] - b.m[i];
  return c;
}

Matrix2 operator*(Complex s, const Matrix2& a) noexcept {
  Matrix2 c;
  for (std::size_t i = 0; i < 4; ++i) c.m[i] = s * a.m[i];
  return c;
}

double max_abs_diff(const Matrix2& a, const Matrix2& b) noexcept {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

Matrix2 propagator(const Matrix2& h, double t) {
  // h = hx X + hy Y + hz Z, exp(-i h t) = cos(|h| t) I - i sin(|h| t) h / |h|.
  const double hx = h(0, 1).real();
  const double hy = -h(0, 1).imag();
  const double hz = h(0, 0).real();
  const double norm = std::sqrt(hx * hx + hy * hy + hz * hz);
  if (norm == 0.0) return Matrix2::identity();
  const double c = std::cos(norm * t);
  const double s = std::sin(norm * t);
  return Complex(c, 0.0) * Matrix2::identity() - Complex(0.0, s / norm) * h;
}

QubitState::QubitState(const Matrix2& rho) : rho_(rho) {
  constexpr double tol = 1e-12;
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) throw std::invalid_argument("density matrix trace is not 1");
  if (max_abs_diff(rho, rho.adjoint()) > tol) throw std::invalid_argument("density matrix is not Hermitian");
  const double a = rho(0, 0).real();
  const double d = rho(1, 1).real();
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(rho(0, 1)));
  if (0.5 * (a + d) - half_gap < -tol) throw std::invalid_argument("density matrix has a negative eigenvalue");
}

QubitState QubitState::maximally_mixed() { return QubitState(Complex(0.5, 0.0) * Matrix2::identity()); }

QubitState QubitState::pure(double theta, double phi) {
  const Complex up(std::cos(theta / 2), 0.0);
  const Complex down = std::polar(std::sin(theta / 2), phi);
  Matrix2 rho{{up * std::conj(up), up * std::conj(down), down * std::conj(up), down * std::conj(down)}};
  return QubitState(rho);
}

Dynamics::Dynamics(double omega) : omega_(omega), generator_(Complex(omega / 2, 0.0) * Matrix2::pauli_x()) {
  if (!std::isfinite(omega)) throw std::invalid_argument("omega must be finite");
}

Matrix2 Dynamics::projector(Outcome o) noexcept {
  return o == Outcome::Plus ? Matrix2{{1.0, 0.0, 0.0, 0.0}} : Matrix2{{0.0, 0.0, 0.0, 1.0}};
}

Matrix2 Dynamics::observable() noexcept { return projector(Outcome::Plus) - projector(Outcome::Minus); }

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() != 3 && times_.size() != 4) throw std::invalid_argument("time grid needs 3 or 4 times");
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k]) || times_[k] < 0.0) throw std::invalid_argument("times must be finite and >= 0");
    if (k > 0 && !(times_[k] > times_[k - 1])) throw std::invalid_argument("times must be strictly increasing");
  }
}

TimeGrid TimeGrid::equally_spaced(Delta delta, double spacing) {
  std::vector<double> times(static_cast<std::size_t>(to_int(delta)));
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = spacing * static_cast<double>(k + 1);
  return TimeGrid(std::move(times));
}

namespace {

// Evolution without revalidating intermediate (unnormalized) matrices.
Matrix2 evolve_matrix(const Matrix2& rho, const Dynamics& d, double dt) {
  const Matrix2 u = d.unitary(dt);
  return u * rho * u.adjoint();
}

double born(const Matrix2& rho, Outcome o) {
  return std::max(0.0, (Dynamics::projector(o) * rho).trace().real());
}

}  // namespace

QubitState evolve(const QubitState& s, const Dynamics& d, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("evolution time must be nonnegative");
  return QubitState(evolve_matrix(s.rho(), d, dt));
}

std::array<double, 2> single_time_distribution(const QubitState& s0, const Dynamics& d, double t) {
  const Matrix2 rho = evolve(s0, d, t).rho();
  return {born(rho, Outcome::Plus), born(rho, Outcome::Minus)};
}

JointDistribution two_time_distribution(const QubitState& s0, const Dynamics& d, double tA, double tB) {
  if (!(tA >= 0.0) || !(tB > tA)) throw std::invalid_argument("two-time distribution needs 0 <= tA < tB");
  const Matrix2 rho_a = evolve_matrix(s0.rho(), d, tA);
  std::array<double, 4> p{};
  for (Outcome a : kOutcomes) {
    const Matrix2& proj = Dynamics::projector(a);
    const double pa = born(rho_a, a);
    if (pa <= 1e-15) continue;
    const Matrix2 post = Complex(1.0 / pa, 0.0) * (proj * rho_a * proj);
    const Matrix2 later = evolve_matrix(post, d, tB - tA);
    for (Outcome b : kOutcomes) p[2 * index_of(a) + index_of(b)] = pa * born(later, b);
  }
  return JointDistribution(p);
}

Behavior behavior_from_quantum(const QubitState& s0, const Dynamics& d, const TimeGrid& grid) {
  std::vector<std::pair<Context, JointDistribution>> table;
  for (const auto& t : LgiFunctional::for_delta(grid.delta()).terms()) {
    table.emplace_back(t.context,
                       two_time_distribution(s0, d, grid.at(t.context.earlier()), grid.at(t.context.later())));
  }
  return Behavior(grid.delta(), std::move(table));
}

ViolationOptimum find_max_violation(Delta delta, const Dynamics& d) {
  if (!(d.omega() > 0.0)) throw std::invalid_argument("optimization needs omega > 0");
  const auto& f = LgiFunctional::for_delta(delta);
  const QubitState mixed = QubitState::maximally_mixed();
  auto value_at = [&](double spacing) {
    return f.evaluate(behavior_from_quantum(mixed, d, TimeGrid::equally_spaced(delta, spacing)));
  };

  const double period = 2.0 * std::numbers::pi / d.omega();
  constexpr int kScan = 2048;
  const double step = period / kScan;
  std::vector<double> scan(kScan - 1);
  for (int k = 1; k < kScan; ++k) scan[k - 1] = value_at(k * step);
  const double scan_best = *std::max_element(scan.begin(), scan.end());

  ViolationOptimum best{0.0, -std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < scan.size(); ++k) {
    const bool left_ok = k == 0 || scan[k] >= scan[k - 1];
    const bool right_ok = k + 1 == scan.size() || scan[k] >= scan[k + 1];
    if (!left_ok || !right_ok || scan[k] < scan_best - 1e-3) continue;

    // Golden-section refinement on the bracketing scan cells.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(step * static_cast<double>(k), 1e-12 * period);
    double hi = std::min(step * static_cast<double>(k + 2), period * (1.0 - 1e-12));
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = value_at(x1);
    double f2 = value_at(x2);
    while (hi - lo > 1e-12 * period) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = value_at(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = value_at(x1);
      }
    }
    const double x = 0.5 * (lo + hi);
    const double v = value_at(x);
    if (v > best.value + 1e-12) best = {x, v};
  }
  return best;
}

}  // namespace lgcert::quantum
