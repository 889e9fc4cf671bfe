#include "lgcert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <string>

namespace lgcert {

namespace {

std::string describe_infeasible(double epsilon, double eps_max) {
  std::ostringstream os;
  os.precision(9);
  os << "epsilon " << epsilon << " is infeasible: the consistent polytope admits at most epsilon " << eps_max;
  return os.str();
}

std::size_t context_count(Delta delta) { return LgiFunctional::for_delta(delta).terms().size(); }

struct MarginalRef {
  std::size_t position;
  Slot slot;
};

// One equality per outcome and per non-reference occurrence of a time. The
// reference is the first earlier-slot occurrence, or the first occurrence
// when the time only ever appears in a later slot.
struct ConsistencyPair {
  MarginalRef reference;
  MarginalRef other;
  bool induction;  // both earlier-slot
};

std::vector<ConsistencyPair> consistency_pairs(Delta delta) {
  const auto& f = LgiFunctional::for_delta(delta);
  std::vector<ConsistencyPair> pairs;
  for (int t = 1; t <= to_int(delta); ++t) {
    std::vector<MarginalRef> earlier;
    std::vector<MarginalRef> later;
    for (std::size_t k = 0; k < f.terms().size(); ++k) {
      const Context& c = f.terms()[k].context;
      if (c.earlier() == t) earlier.push_back({k, Slot::Earlier});
      if (c.later() == t) later.push_back({k, Slot::Later});
    }
    std::vector<MarginalRef> all = earlier;
    all.insert(all.end(), later.begin(), later.end());
    if (all.size() < 2) continue;
    for (std::size_t k = 1; k < all.size(); ++k) {
      const bool induction = all[0].slot == Slot::Earlier && all[k].slot == Slot::Earlier;
      pairs.push_back({all[0], all[k], induction});
    }
  }
  return pairs;
}

void add_marginal(std::vector<double>& row, const MarginalRef& ref, Outcome o, double coeff) {
  for (Outcome other : kOutcomes) {
    const std::size_t idx = ref.slot == Slot::Earlier ? variable_index(ref.position, o, other)
                                                      : variable_index(ref.position, other, o);
    row[idx] += coeff;
  }
}

// Upper bound on f - mr_upper over normalized behaviors; scales the relaxed slack.
double slack_scale(Delta delta) { return 2.0 * static_cast<double>(context_count(delta)); }

lp::LpProblem make_system(Delta delta, std::optional<double> epsilon, const CertificationOptions& options) {
  const auto& f = LgiFunctional::for_delta(delta);
  const std::size_t n_ctx = f.terms().size();
  const std::size_t n_behavior = 4 * n_ctx;
  const bool with_slack = epsilon && options.relaxed;
  const std::size_t n_vars = n_behavior + (with_slack ? 1 : 0);
  lp::LpProblem problem(n_vars);

  for (std::size_t k = 0; k < n_ctx; ++k) {
    std::vector<double> row(n_vars, 0.0);
    for (std::size_t v = 0; v < 4; ++v) row[4 * k + v] = 1.0;
    problem.add_equality(std::move(row), 1.0);
  }

  if (epsilon) {
    std::vector<double> row(n_vars, 0.0);
    for (std::size_t k = 0; k < n_ctx; ++k) {
      const double s = f.terms()[k].sign;
      for (Outcome a : kOutcomes) {
        for (Outcome b : kOutcomes) row[variable_index(k, a, b)] = s * value_of(a) * value_of(b);
      }
    }
    if (with_slack) row[n_behavior] = -slack_scale(delta);
    problem.add_equality(std::move(row), f.mr_upper() + *epsilon);
  }

  for (const auto& pair : consistency_pairs(delta)) {
    if (options.nsit_only && pair.induction) continue;
    for (Outcome o : kOutcomes) {
      std::vector<double> row(n_vars, 0.0);
      add_marginal(row, pair.reference, o, 1.0);
      add_marginal(row, pair.other, o, -1.0);
      problem.add_equality(std::move(row), 0.0);
    }
  }
  return problem;
}

void validate_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("epsilon must be finite and nonnegative");
  }
}

Behavior behavior_from_point(Delta delta, std::span<const double> point) {
  const auto& f = LgiFunctional::for_delta(delta);
  std::vector<std::pair<Context, JointDistribution>> table;
  for (std::size_t k = 0; k < f.terms().size(); ++k) {
    std::array<double, 4> p{};
    for (std::size_t v = 0; v < 4; ++v) p[v] = point[4 * k + v];
    table.emplace_back(f.terms()[k].context, JointDistribution(p));
  }
  return Behavior(delta, std::move(table));
}

}  // namespace

InfeasibleEpsilon::InfeasibleEpsilon(double epsilon, double nsit_epsilon_max)
    : std::runtime_error(describe_infeasible(epsilon, nsit_epsilon_max)),
      epsilon_(epsilon),
      epsilon_max_(nsit_epsilon_max) {}

std::size_t variable_index(std::size_t context_position, Outcome a, Outcome b) noexcept {
  return 4 * context_position + 2 * index_of(a) + index_of(b);
}

LpLayout lp_layout(Delta delta, const CertificationOptions& options) {
  LpLayout layout;
  layout.normalization_rows = context_count(delta);
  layout.level_rows = 1;
  for (const auto& pair : consistency_pairs(delta)) {
    if (!(options.nsit_only && pair.induction)) layout.consistency_rows += 2;
  }
  layout.behavior_vars = 4 * context_count(delta);
  return layout;
}

lp::LpProblem build_constraint_system(Delta delta, double epsilon, const CertificationOptions& options) {
  validate_epsilon(epsilon);
  return make_system(delta, epsilon, options);
}

lp::LpProblem build_lp(const CertificationQuery& q, Outcome i, Outcome j) {
  const int pos = LgiFunctional::for_delta(q.delta).position_of(q.target);
  if (pos < 0) throw std::invalid_argument("target context " + q.target.label() + " is not in the functional");
  lp::LpProblem problem = build_constraint_system(q.delta, q.epsilon, q.options);
  std::vector<double> objective(problem.n_vars(), 0.0);
  objective[variable_index(static_cast<std::size_t>(pos), i, j)] = 1.0;
  problem.set_objective(std::move(objective));
  return problem;
}

double consistent_functional_maximum(Delta delta, const CertificationOptions& options) {
  const auto& f = LgiFunctional::for_delta(delta);
  lp::LpProblem problem = make_system(delta, std::nullopt, options);
  std::vector<double> objective(problem.n_vars(), 0.0);
  for (std::size_t k = 0; k < f.terms().size(); ++k) {
    for (Outcome a : kOutcomes) {
      for (Outcome b : kOutcomes) objective[variable_index(k, a, b)] = f.terms()[k].sign * value_of(a) * value_of(b);
    }
  }
  problem.set_objective(std::move(objective));
  const auto sol = lp::solve(problem);
  if (sol.status != lp::LpStatus::Optimal) throw std::logic_error("consistent polytope is empty");
  return sol.value;
}

CertificateResult guessing_probability(const CertificationQuery& q) {
  std::array<double, 4> optima{};
  std::optional<lp::LpSolution> best;
  for (Outcome a : kOutcomes) {
    for (Outcome b : kOutcomes) {
      auto sol = lp::solve(build_lp(q, a, b));
      if (sol.status != lp::LpStatus::Optimal) {
        throw InfeasibleEpsilon(q.epsilon,
                                consistent_functional_maximum(q.delta, q.options) -
                                    LgiFunctional::for_delta(q.delta).mr_upper());
      }
      optima[2 * index_of(a) + index_of(b)] = sol.value;
      if (!best || sol.value > best->value) best = std::move(sol);
    }
  }
  const double p_guess = best->value;
  return CertificateResult{
      .per_outcome_optima = optima,
      .guessing_probability = p_guess,
      .min_entropy_bits = std::max(0.0, -std::log2(p_guess)),
      .witness = behavior_from_point(q.delta, best->point),
  };
}

std::vector<CurveRow> sweep(Delta delta, std::span<const double> eps_grid, std::span<const Context> contexts,
                            const CertificationOptions& options) {
  if (contexts.empty()) throw std::invalid_argument("sweep needs at least one context");
  for (std::size_t k = 1; k < eps_grid.size(); ++k) {
    if (!(eps_grid[k] > eps_grid[k - 1])) throw std::invalid_argument("epsilon grid must be strictly increasing");
  }
  const double mr_upper = LgiFunctional::for_delta(delta).mr_upper();

  auto row_at = [&](double eps) {
    CurveRow row{eps, mr_upper + eps, {}, 2.0, 0.0};
    for (const Context& c : contexts) {
      const auto cert = guessing_probability({delta, eps, c, options});
      row.per_context.push_back({c, cert.min_entropy_bits, cert.guessing_probability});
      row.min_entropy_bits = std::min(row.min_entropy_bits, cert.min_entropy_bits);
      row.guessing_probability = std::max(row.guessing_probability, cert.guessing_probability);
    }
    return row;
  };

  std::vector<std::future<CurveRow>> pending;
  pending.reserve(eps_grid.size());
  for (double eps : eps_grid) pending.push_back(std::async(std::launch::async, row_at, eps));

  std::vector<CurveRow> rows;
  rows.reserve(eps_grid.size());
  for (auto& fut : pending) rows.push_back(fut.get());
  return rows;
}

std::vector<double> default_epsilon_grid(Delta delta, bool full_range, std::size_t points) {
  if (points == 0) throw std::invalid_argument("grid needs at least one point");
  const double eps_max = full_range ? 2.0 : (delta == Delta::Four ? 2.0 * std::sqrt(2.0) - 2.0 : 0.5);
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) grid[k] = eps_max * static_cast<double>(k + 1) / points;
  return grid;
}

}  // namespace lgcert
