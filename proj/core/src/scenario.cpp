#include "lgcert/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgcert {

Delta delta_from_int(int value) {
  if (value == 3) return Delta::Three;
  if (value == 4) return Delta::Four;
  throw std::invalid_argument("delta must be 3 or 4, got " + std::to_string(value));
}

Context::Context(int earlier, int later) : earlier_(earlier), later_(later) {
  if (earlier < 1) throw std::invalid_argument("time indices start at 1");
  if (earlier >= later) {
    throw std::invalid_argument("context requires earlier < later, got (" + std::to_string(earlier) + ", " +
                                std::to_string(later) + ")");
  }
}

std::string Context::label() const { return std::to_string(earlier_) + "-" + std::to_string(later_); }

JointDistribution::JointDistribution(const std::array<double, 4>& p) : p_(p) {
  double total = 0.0;
  for (double x : p_) {
    if (!std::isfinite(x)) throw InvalidDistribution("probability is not finite");
    if (x < -kNonNegativityTolerance) {
      throw InvalidDistribution("negative probability " + std::to_string(x));
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw InvalidDistribution("probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

JointDistribution JointDistribution::point_mass(Outcome a, Outcome b) {
  std::array<double, 4> p{};
  p[2 * index_of(a) + index_of(b)] = 1.0;
  return JointDistribution(p);
}

JointDistribution JointDistribution::uniform() { return JointDistribution({0.25, 0.25, 0.25, 0.25}); }

std::array<double, 2> JointDistribution::marginal(Slot slot) const noexcept {
  if (slot == Slot::Earlier) return {p_[0] + p_[1], p_[2] + p_[3]};
  return {p_[0] + p_[2], p_[1] + p_[3]};
}

double correlator(const JointDistribution& j) noexcept {
  const auto& p = j.probabilities();
  return p[0] - p[1] - p[2] + p[3];
}

LgiFunctional::LgiFunctional(Delta delta, std::vector<SignedContext> terms, double lower, double upper)
    : delta_(delta), terms_(std::move(terms)), mr_lower_(lower), mr_upper_(upper) {}

const LgiFunctional& LgiFunctional::for_delta(Delta delta) {
  static const LgiFunctional f4(Delta::Four,
                                {{Context(1, 2), +1}, {Context(2, 3), +1}, {Context(3, 4), +1}, {Context(1, 4), -1}},
                                -2.0, 2.0);
  static const LgiFunctional f3(Delta::Three, {{Context(1, 2), +1}, {Context(2, 3), +1}, {Context(1, 3), -1}}, -3.0,
                                1.0);
  return delta == Delta::Four ? f4 : f3;
}

std::vector<Context> LgiFunctional::contexts() const {
  std::vector<Context> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.context);
  return out;
}

int LgiFunctional::position_of(const Context& c) const noexcept {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].context == c) return static_cast<int>(i);
  }
  return -1;
}

double LgiFunctional::evaluate(const Behavior& b) const {
  if (b.delta() != delta_) {
    throw DeltaMismatch("behavior has delta " + std::to_string(to_int(b.delta())) + ", functional has delta " +
                        std::to_string(to_int(delta_)));
  }
  double value = 0.0;
  for (const auto& t : terms_) value += t.sign * correlator(b.at(t.context));
  return value;
}

double evaluate(const LgiFunctional& f, const Behavior& b) { return f.evaluate(b); }

Behavior::Behavior(Delta delta, std::vector<std::pair<Context, JointDistribution>> table) : delta_(delta) {
  const auto& f = LgiFunctional::for_delta(delta);
  if (table.size() != f.terms().size()) {
    throw std::invalid_argument("behavior for delta " + std::to_string(to_int(delta)) + " needs " +
                                std::to_string(f.terms().size()) + " contexts, got " + std::to_string(table.size()));
  }
  std::vector<bool> seen(f.terms().size(), false);
  for (const auto& [ctx, dist] : table) {
    const int pos = f.position_of(ctx);
    if (pos < 0) throw std::invalid_argument("context " + ctx.label() + " is not part of the functional");
    if (seen[pos]) throw std::invalid_argument("duplicate context " + ctx.label());
    seen[pos] = true;
  }
  table_.reserve(table.size());
  for (const auto& t : f.terms()) {
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == t.context; });
    table_.push_back(*it);
  }
}

const JointDistribution& Behavior::at(const Context& c) const {
  for (const auto& [ctx, dist] : table_) {
    if (ctx == c) return dist;
  }
  throw std::out_of_range("context " + c.label() + " not in behavior");
}

namespace {

double linf(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

}  // namespace

ConsistencyReport consistency_report(const Behavior& b) {
  const int n_times = to_int(b.delta());
  ConsistencyReport report;
  report.nsit_residual.assign(n_times, 0.0);
  report.induction_residual.assign(n_times, 0.0);

  for (int t = 1; t <= n_times; ++t) {
    std::vector<std::array<double, 2>> earlier;
    std::vector<std::array<double, 2>> later;
    for (const auto& [ctx, dist] : b.table()) {
      if (ctx.earlier() == t) earlier.push_back(dist.marginal(Slot::Earlier));
      if (ctx.later() == t) later.push_back(dist.marginal(Slot::Later));
    }
    double induction = 0.0;
    for (std::size_t i = 0; i < earlier.size(); ++i) {
      for (std::size_t j = i + 1; j < earlier.size(); ++j) induction = std::max(induction, linf(earlier[i], earlier[j]));
    }
    double nsit = 0.0;
    for (std::size_t i = 0; i < later.size(); ++i) {
      for (const auto& e : earlier) nsit = std::max(nsit, linf(later[i], e));
      for (std::size_t j = i + 1; j < later.size(); ++j) nsit = std::max(nsit, linf(later[i], later[j]));
    }
    report.nsit_residual[t - 1] = nsit;
    report.induction_residual[t - 1] = induction;
    report.overall_max = std::max({report.overall_max, nsit, induction});
  }
  return report;
}

bool is_predictable(const Behavior& b, double tol) {
  for (const auto& [ctx, dist] : b.table()) {
    for (double p : dist.probabilities()) {
      if (std::abs(p) > tol && std::abs(p - 1.0) > tol) return false;
    }
  }
  return true;
}

double max_distance(const Behavior& a, const Behavior& b) {
  if (a.delta() != b.delta()) throw DeltaMismatch("behaviors have different delta");
  double d = 0.0;
  for (std::size_t k = 0; k < a.table().size(); ++k) {
    const auto& pa = a.table()[k].second.probabilities();
    const auto& pb = b.table()[k].second.probabilities();
    for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(pa[i] - pb[i]));
  }
  return d;
}

Behavior deterministic_behavior(Delta delta, std::span<const Outcome> assignment) {
  if (assignment.size() != static_cast<std::size_t>(to_int(delta))) {
    throw std::invalid_argument("assignment length must equal delta");
  }
  std::vector<std::pair<Context, JointDistribution>> table;
  for (const auto& t : LgiFunctional::for_delta(delta).terms()) {
    table.emplace_back(t.context, JointDistribution::point_mass(assignment[t.context.earlier() - 1],
                                                                assignment[t.context.later() - 1]));
  }
  return Behavior(delta, std::move(table));
}

std::vector<Behavior> deterministic_behaviors(Delta delta) {
  const int n = to_int(delta);
  std::vector<Behavior> out;
  out.reserve(std::size_t{1} << n);
  std::vector<Outcome> assignment(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int k = 0; k < n; ++k) assignment[k] = outcome_at((mask >> (n - 1 - k)) & 1u);
    out.push_back(deterministic_behavior(delta, assignment));
  }
  return out;
}

std::pair<double, double> macrorealist_bounds(Delta delta) {
  const auto& f = LgiFunctional::for_delta(delta);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& b : deterministic_behaviors(delta)) {
    const double v = f.evaluate(b);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace lgcert
