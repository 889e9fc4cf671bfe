#include "lgcert/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace lgcert::ontology {

namespace {

void check_distribution(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument(std::string(what) + " has a negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    throw std::invalid_argument(std::string(what) + " does not sum to 1");
  }
}

}  // namespace

StochasticMatrix::StochasticMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("stochastic matrix needs at least one row");
  for (const auto& r : rows_) {
    if (r.size() != rows_.size()) throw std::invalid_argument("stochastic matrix must be square");
    check_distribution(r, "stochastic matrix row");
  }
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
  return StochasticMatrix(std::move(rows));
}

StochasticMatrix StochasticMatrix::permutation(std::span<const std::size_t> image) {
  const std::size_t n = image.size();
  std::vector<bool> hit(n, false);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (image[i] >= n || hit[image[i]]) throw std::invalid_argument("not a permutation");
    hit[image[i]] = true;
    rows[i][image[i]] = 1.0;
  }
  return StochasticMatrix(std::move(rows));
}

std::vector<double> StochasticMatrix::apply(std::span<const double> distribution) const {
  if (distribution.size() != size()) throw std::invalid_argument("dimension mismatch in stochastic map");
  std::vector<double> out(size(), 0.0);
  for (std::size_t from = 0; from < size(); ++from) {
    if (distribution[from] == 0.0) continue;
    for (std::size_t to = 0; to < size(); ++to) out[to] += distribution[from] * rows_[from][to];
  }
  return out;
}

StochasticMatrix StochasticMatrix::then(const StochasticMatrix& next) const {
  if (next.size() != size()) throw std::invalid_argument("dimension mismatch in stochastic map");
  std::vector<std::vector<double>> rows;
  rows.reserve(size());
  for (const auto& r : rows_) rows.push_back(next.apply(r));
  return StochasticMatrix(std::move(rows));
}

bool StochasticMatrix::is_deterministic() const noexcept {
  for (const auto& r : rows_) {
    for (double x : r) {
      if (x != 0.0 && x != 1.0) return false;
    }
  }
  return true;
}

EpistemicState::EpistemicState(std::vector<double> mu) : mu_(std::move(mu)) {
  if (mu_.empty()) throw std::invalid_argument("ontic space must have at least one state");
  check_distribution(mu_, "epistemic state");
}

EpistemicState EpistemicState::point_mass(std::size_t n, std::size_t lambda) {
  if (lambda >= n) throw std::invalid_argument("ontic state out of range");
  std::vector<double> mu(n, 0.0);
  mu[lambda] = 1.0;
  return EpistemicState(std::move(mu));
}

ResponseFunction::ResponseFunction(std::vector<std::vector<double>> plus) : plus_(std::move(plus)) {
  if (plus_.empty()) throw std::invalid_argument("response function needs at least one time");
  for (const auto& row : plus_) {
    if (row.size() != plus_.front().size() || row.empty()) {
      throw std::invalid_argument("response function rows must share the ontic dimension");
    }
    for (double x : row) {
      if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("response probability outside [0, 1]");
    }
  }
}

double ResponseFunction::probability(Outcome k, std::size_t lambda, int time) const {
  const double plus = plus_.at(static_cast<std::size_t>(time - 1)).at(lambda);
  return k == Outcome::Plus ? plus : 1.0 - plus;
}

bool ResponseFunction::is_deterministic() const noexcept {
  for (const auto& row : plus_) {
    for (double x : row) {
      if (x != 0.0 && x != 1.0) return false;
    }
  }
  return true;
}

OntModel::OntModel(Delta delta, EpistemicState mu, ResponseFunction xi, TransformationMap maps)
    : delta_(delta), mu_(std::move(mu)), xi_(std::move(xi)), maps_(std::move(maps)) {
  const std::size_t n = mu_.size();
  const auto times = static_cast<std::size_t>(to_int(delta));
  if (xi_.n_times() != times) throw std::invalid_argument("response function needs one row per time");
  if (xi_.n_ontic() != n) throw std::invalid_argument("response function dimension differs from ontic space");
  if (maps_.measurement_update.size() != times) throw std::invalid_argument("need one measurement update per time");
  if (maps_.free_evolution.size() != times) {
    throw std::invalid_argument("need free evolution from preparation and between consecutive times");
  }
  for (const auto& per_outcome : maps_.measurement_update) {
    for (const auto& m : per_outcome) {
      if (m.size() != n) throw std::invalid_argument("measurement update dimension differs from ontic space");
    }
  }
  for (const auto& m : maps_.free_evolution) {
    if (m.size() != n) throw std::invalid_argument("free evolution dimension differs from ontic space");
  }
}

OntModel OntModel::with_epistemic_state(EpistemicState mu) const { return OntModel(delta_, std::move(mu), xi_, maps_); }

JointDistribution predict_joint(const OntModel& m, const Context& c) {
  const int last = to_int(m.delta());
  if (c.later() > last) throw std::out_of_range("context " + c.label() + " exceeds the model's times");
  const auto& maps = m.maps();
  const auto& xi = m.response();
  const std::size_t n = m.n_ontic();

  std::vector<double> before(m.epistemic_state().probabilities().begin(), m.epistemic_state().probabilities().end());
  for (int k = 0; k < c.earlier(); ++k) before = maps.free_evolution[k].apply(before);

  std::array<double, 4> p{};
  for (Outcome a : kOutcomes) {
    std::vector<double> branch(n);
    for (std::size_t l = 0; l < n; ++l) branch[l] = before[l] * xi.probability(a, l, c.earlier());
    branch = maps.measurement_update[c.earlier() - 1][index_of(a)].apply(branch);
    for (int k = c.earlier(); k < c.later(); ++k) branch = maps.free_evolution[k].apply(branch);
    for (Outcome b : kOutcomes) {
      double pb = 0.0;
      for (std::size_t l = 0; l < n; ++l) pb += branch[l] * xi.probability(b, l, c.later());
      p[2 * index_of(a) + index_of(b)] = pb;
    }
  }
  return JointDistribution(p);
}

Behavior behavior_from_model(const OntModel& m) {
  std::vector<std::pair<Context, JointDistribution>> table;
  for (const auto& t : LgiFunctional::for_delta(m.delta()).terms()) table.emplace_back(t.context, predict_joint(m, t.context));
  return Behavior(m.delta(), std::move(table));
}

bool check_factorizability(const OntModel& m, double tol) {
  for (const auto& t : LgiFunctional::for_delta(m.delta()).terms()) {
    const JointDistribution j = predict_joint(m, t.context);
    const auto first = j.marginal(Slot::Earlier);
    const auto second = j.marginal(Slot::Later);
    for (Outcome a : kOutcomes) {
      for (Outcome b : kOutcomes) {
        if (std::abs(j(a, b) - first[index_of(a)] * second[index_of(b)]) > tol) return false;
      }
    }
  }
  return true;
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[below(i)]);
    return p;
  }

  // Uniform on the simplex via normalized exponentials.
  std::vector<double> simplex(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
      x = -std::log(1.0 - unit());
      total += x;
    }
    for (double& x : w) x /= total;
    double fix = 1.0;
    for (std::size_t i = 1; i < n; ++i) fix -= w[i];
    w[0] = std::max(0.0, fix);
    return w;
  }

  StochasticMatrix map(std::size_t n, SampleMode mode) {
    if (mode == SampleMode::Deterministic) return StochasticMatrix::permutation(permutation(n));
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(simplex(n));
    return StochasticMatrix(std::move(rows));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::vector<OntModel> sample_models(std::uint64_t seed, std::size_t n, Delta delta, SampleMode mode,
                                    std::size_t count) {
  if (n == 0) throw std::invalid_argument("ontic space must have at least one state");
  if (count == 0) throw std::invalid_argument("count must be at least 1");
  const auto times = static_cast<std::size_t>(to_int(delta));
  Sampler s(seed);
  std::vector<OntModel> models;
  models.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    EpistemicState mu = mode == SampleMode::Deterministic ? EpistemicState::point_mass(n, s.below(n))
                                                          : EpistemicState(s.simplex(n));
    std::vector<std::vector<double>> plus(times, std::vector<double>(n));
    for (auto& row : plus) {
      for (double& x : row) x = mode == SampleMode::Deterministic ? static_cast<double>(s.below(2)) : s.unit();
    }
    TransformationMap maps;
    for (std::size_t t = 0; t < times; ++t) {
      StochasticMatrix on_plus = s.map(n, mode);
      StochasticMatrix on_minus = s.map(n, mode);
      maps.measurement_update.push_back({std::move(on_plus), std::move(on_minus)});
    }
    for (std::size_t t = 0; t < times; ++t) maps.free_evolution.push_back(s.map(n, mode));
    models.emplace_back(delta, std::move(mu), ResponseFunction(std::move(plus)), std::move(maps));
  }
  return models;
}

TheoremSuiteReport run_theorem_suite(std::uint64_t seed, std::size_t runs, std::size_t n, Delta delta,
                                     double filter_tol) {
  const auto& f = LgiFunctional::for_delta(delta);
  TheoremSuiteReport report;
  report.max_functional = -std::numeric_limits<double>::infinity();
  report.min_functional = std::numeric_limits<double>::infinity();
  for (const auto& m : sample_models(seed, n, delta, SampleMode::Deterministic, runs)) {
    ++report.tested;
    const Behavior b = behavior_from_model(m);
    if (!is_predictable(b, filter_tol) || consistency_report(b).overall_max > filter_tol) continue;
    ++report.passed_filter;
    const double v = f.evaluate(b);
    report.max_functional = std::max(report.max_functional, v);
    report.min_functional = std::min(report.min_functional, v);
    if (v > f.mr_upper() + filter_tol || v < f.mr_lower() - filter_tol) ++report.lgi_violations;
    if (!check_factorizability(m, filter_tol)) ++report.factorizability_failures;
  }
  if (report.passed_filter == 0) report.max_functional = report.min_functional = 0.0;
  return report;
}

}  // namespace lgcert::ontology
