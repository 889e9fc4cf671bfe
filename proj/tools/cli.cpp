#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lgcert/behavior_io.hpp"
#include "lgcert/certifier.hpp"
#include "lgcert/curve_io.hpp"
#include "lgcert/ontology.hpp"
#include "lgcert/quantum.hpp"
#include "lgcert/scenario.hpp"

namespace lgcert::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) { return format_number(x); }

char sign_char(Outcome o) { return o == Outcome::Plus ? '+' : '-'; }

std::string functional_text(Delta delta) {
  std::string s;
  for (const auto& t : LgiFunctional::for_delta(delta).terms()) {
    if (s.empty()) {
      s += t.sign > 0 ? "" : "-";
    } else {
      s += t.sign > 0 ? " + " : " - ";
    }
    s += "C" + std::to_string(t.context.earlier()) + std::to_string(t.context.later());
  }
  return s;
}

std::string fname(Delta delta) { return "f" + std::to_string(to_int(delta)); }

void print_residuals(std::ostream& out, const ConsistencyReport& r) {
  out << "time  nsit_residual  induction_residual\n";
  for (std::size_t t = 0; t < r.nsit_residual.size(); ++t) {
    out << "t" << t + 1 << "    " << num(r.nsit_residual[t]) << "    " << num(r.induction_residual[t]) << "\n";
  }
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

void print_verdicts(std::ostream& out, const Behavior& b, double predict_tol) {
  const auto& f = LgiFunctional::for_delta(b.delta());
  const double value = f.evaluate(b);
  out << fname(b.delta()) << "=" << num(value) << "\n";
  if (value > f.mr_upper()) {
    out << "violates MR bound: " << num(value) << " > " << num(f.mr_upper()) << "\n";
  } else if (value < f.mr_lower()) {
    out << "violates MR bound: " << num(value) << " < " << num(f.mr_lower()) << "\n";
  } else {
    out << "within MR bounds [" << num(f.mr_lower()) << ", " << num(f.mr_upper()) << "]\n";
  }
  const auto report = consistency_report(b);
  out << "NSIT residual max=" << num(max_of(report.nsit_residual))
      << " induction residual max=" << num(max_of(report.induction_residual)) << "\n";
  out << (is_predictable(b, predict_tol) ? "predictable" : "not predictable") << "\n";
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("malformed ") + what + ": '" + text + "'");
    }
  }
  if (values.empty()) throw UsageError(std::string("empty ") + what);
  return values;
}

Context parse_context(const std::string& text) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) throw std::invalid_argument(text);
    return Context(std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1)));
  } catch (const std::exception&) {
    throw UsageError("malformed context '" + text + "', expected e.g. 1-2");
  }
}

quantum::QubitState parse_state(const std::string& spec) {
  if (spec == "mixed") return quantum::QubitState::maximally_mixed();
  const std::string prefix = "pure:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto angles = parse_number_list(spec.substr(prefix.size()), "state spec");
    if (angles.size() != 2) throw UsageError("pure state needs two Bloch angles, e.g. pure:0,0");
    return quantum::QubitState::pure(angles[0], angles[1]);
  }
  throw UsageError("malformed state spec '" + spec + "', expected mixed or pure:theta,phi");
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& out) {
  if (path == "-") return out;
  file.open(path);
  if (!file) throw std::runtime_error(path + ": cannot open for writing");
  return file;
}

// --- subcommands ---------------------------------------------------------

struct BoundsArgs {
  int delta = 4;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  const Delta delta = delta_from_int(a.delta);
  const auto& f = LgiFunctional::for_delta(delta);
  out << fname(delta) << " = " << functional_text(delta) << "\n";
  out << "assignment  value\n";
  const auto behaviors = deterministic_behaviors(delta);
  for (const auto& b : behaviors) {
    std::string label;
    for (int t = 1; t <= to_int(delta); ++t) {
      // every time appears in some context; read it back from the point masses
      for (const auto& [ctx, dist] : b.table()) {
        if (!ctx.contains(t)) continue;
        const auto m = dist.marginal(ctx.earlier() == t ? Slot::Earlier : Slot::Later);
        label += sign_char(m[0] > 0.5 ? Outcome::Plus : Outcome::Minus);
        label += ' ';
        break;
      }
    }
    out << label << std::string(12 - std::min<std::size_t>(12, label.size()), ' ') << num(f.evaluate(b)) << "\n";
  }
  const auto [lo, hi] = macrorealist_bounds(delta);
  out << "min=" << num(lo) << " max=" << num(hi) << "\n";
  return kSuccess;
}

struct CertifyArgs {
  int delta = 4;
  std::optional<double> epsilon;
  std::string epsilon_grid;
  bool full_range = false;
  std::size_t points = 20;
  std::vector<std::string> contexts;
  bool nsit_only = false;
  bool relaxed = false;
  std::string output;
  std::string format = "csv";
};

int cmd_certify(const CertifyArgs& a, std::ostream& out, std::ostream& err) {
  const Delta delta = delta_from_int(a.delta);
  const auto& f = LgiFunctional::for_delta(delta);

  std::vector<double> grid;
  if (a.epsilon) {
    grid = {*a.epsilon};
  } else if (!a.epsilon_grid.empty()) {
    grid = parse_number_list(a.epsilon_grid, "epsilon grid");
  } else {
    grid = default_epsilon_grid(delta, a.full_range, a.points);
  }
  for (double e : grid) {
    if (!std::isfinite(e) || e < 0.0) throw UsageError("epsilon values must be nonnegative");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw UsageError("epsilon grid must be strictly increasing");
  }

  std::vector<Context> contexts;
  for (const auto& c : a.contexts) {
    const Context ctx = parse_context(c);
    if (f.position_of(ctx) < 0) throw UsageError("context " + ctx.label() + " is not part of " + fname(delta));
    contexts.push_back(ctx);
  }
  if (contexts.empty()) contexts = f.contexts();

  const CertificationOptions options{.nsit_only = a.nsit_only, .relaxed = a.relaxed};
  std::vector<CurveRow> rows;
  try {
    rows = sweep(delta, grid, contexts, options);
  } catch (const InfeasibleEpsilon& e) {
    err << "error: " << e.what() << "\n";
    err << "maximum " << fname(delta) << " over the NSIT-consistent polytope is "
        << num(f.mr_upper() + e.epsilon_max()) << " (epsilon <= " << num(e.epsilon_max()) << ")\n";
    return kInfeasible;
  }

  for (const auto& row : rows) {
    out << "epsilon=" << num(row.epsilon) << " " << fname(delta) << "=" << num(row.functional_value)
        << " H_min=" << num(row.min_entropy_bits) << " bits P_guess=" << num(row.guessing_probability) << "\n";
  }

  if (!a.output.empty()) {
    std::ofstream file;
    std::ostream& sink = open_output(a.output, file, out);
    if (a.format == "json") {
      write_curve_json(sink, rows);
    } else {
      write_curve_csv(sink, rows);
    }
  }
  return kSuccess;
}

struct QuantumArgs {
  int delta = 4;
  double omega = 1.0;
  std::optional<double> omega_tau;
  bool optimize = false;
  std::string times;
  std::string state = "mixed";
  bool check_nsit = false;
  std::string output;
};

int cmd_quantum(const QuantumArgs& a, std::ostream& out) {
  const Delta delta = delta_from_int(a.delta);
  const quantum::QubitState s0 = parse_state(a.state);
  if (!(a.omega > 0.0) || !std::isfinite(a.omega)) throw UsageError("omega must be positive");
  const quantum::Dynamics dyn(a.omega);

  std::optional<quantum::TimeGrid> grid;
  if (a.optimize) {
    const auto best = quantum::find_max_violation(delta, dyn);
    out << "optimal omega_tau=" << num(a.omega * best.spacing) << " (max over equal spacings of the mixed state: "
        << fname(delta) << "=" << num(best.value) << ")\n";
    grid = quantum::TimeGrid::equally_spaced(delta, best.spacing);
  } else if (!a.times.empty()) {
    try {
      grid = quantum::TimeGrid(parse_number_list(a.times, "time list"));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (grid->delta() != delta) throw UsageError("time list length must equal delta");
  } else {
    if (!a.omega_tau || !(*a.omega_tau > 0.0)) throw UsageError("give --omega-tau > 0, --times or --optimize");
    grid = quantum::TimeGrid::equally_spaced(delta, *a.omega_tau / a.omega);
  }

  const Behavior b = quantum::behavior_from_quantum(s0, dyn, *grid);
  out << "times:";
  for (double t : grid->times()) out << " " << num(t);
  out << "\n";
  print_verdicts(out, b, 1e-9);
  if (a.check_nsit) {
    const auto report = consistency_report(b);
    print_residuals(out, report);
    out << (max_of(report.nsit_residual) <= 1e-12 ? "NSIT satisfied" : "NSIT violated")
        << " (max residual " << num(max_of(report.nsit_residual)) << ")\n";
  }
  if (!a.output.empty()) {
    std::ofstream file;
    open_output(a.output, file, out) << format_behavior(b);
  }
  return kSuccess;
}

struct CheckArgs {
  std::string file;
  double tol = 1e-9;
  bool residuals = false;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<Behavior> b;
  try {
    b = read_behavior_file(a.file);
  } catch (const BehaviorFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  out << "delta=" << to_int(b->delta()) << "\n";
  print_verdicts(out, *b, a.tol);
  if (a.residuals) print_residuals(out, consistency_report(*b));
  return kSuccess;
}

struct OntologyArgs {
  std::size_t runs = 10000;
  std::size_t n = 4;
  std::uint64_t seed = kDefaultSeed;
  int delta = 4;
};

int cmd_ontology_test(const OntologyArgs& a, std::ostream& out) {
  const Delta delta = delta_from_int(a.delta);
  const auto r = ontology::run_theorem_suite(a.seed, a.runs, a.n, delta);
  out << "ontology-test delta=" << a.delta << " n=" << a.n << " seed=" << a.seed << "\n";
  out << "models tested: " << r.tested << "\n";
  out << "predictable and consistent: " << r.passed_filter << "\n";
  out << "filtered out: " << r.tested - r.passed_filter << "\n";
  if (r.passed_filter > 0) {
    out << fname(delta) << " range over admitted models: [" << num(r.min_functional) << ", " << num(r.max_functional)
        << "]\n";
  }
  out << "factorizability failures: " << r.factorizability_failures << "\n";
  out << r.lgi_violations << " violations\n";
  return r.lgi_violations == 0 && r.factorizability_failures == 0 ? kSuccess : kFalsified;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomness certification from Leggett-Garg violations", "lgcert"};
  app.require_subcommand(1);
  const auto delta_check = CLI::IsMember({3, 4});

  BoundsArgs bounds;
  auto* sub_bounds = app.add_subcommand("bounds", "Enumerate macrorealist bounds of a functional");
  sub_bounds->add_option("--delta", bounds.delta, "3 or 4")->required()->check(delta_check);

  CertifyArgs certify;
  auto* sub_certify = app.add_subcommand("certify", "Certified min-entropy for LGI violations");
  sub_certify->add_option("--delta", certify.delta, "3 or 4")->required()->check(delta_check);
  auto* opt_eps = sub_certify->add_option("--epsilon", certify.epsilon, "single violation margin");
  auto* opt_grid = sub_certify->add_option("--epsilon-grid", certify.epsilon_grid, "comma-separated increasing margins");
  auto* opt_full = sub_certify->add_flag("--full-range", certify.full_range,
                                         "default grid up to the NSIT-polytope maximum");
  auto* opt_points = sub_certify->add_option("--points", certify.points, "default grid size")
                         ->check(CLI::PositiveNumber);
  opt_eps->excludes(opt_grid, opt_full, opt_points);
  opt_grid->excludes(opt_full, opt_points);
  sub_certify->add_option("--context", certify.contexts, "target context such as 1-2 (repeatable)");
  sub_certify->add_flag("--nsit-only", certify.nsit_only, "drop induction equalities");
  sub_certify->add_flag("--relaxed", certify.relaxed, "constrain f >= bound + epsilon instead of equality");
  sub_certify->add_option("--output,-o", certify.output, "curve file path ('-' for stdout)");
  sub_certify->add_option("--format", certify.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  QuantumArgs qargs;
  auto* sub_quantum = app.add_subcommand("quantum", "Simulate a qubit Leggett-Garg test");
  sub_quantum->add_option("--delta", qargs.delta, "3 or 4")->required()->check(delta_check);
  sub_quantum->add_option("--omega", qargs.omega, "oscillation frequency");
  auto* opt_wt = sub_quantum->add_option("--omega-tau", qargs.omega_tau, "phase per equal time step");
  auto* opt_opt = sub_quantum->add_flag("--optimize", qargs.optimize, "search the maximal violation");
  auto* opt_times = sub_quantum->add_option("--times", qargs.times, "explicit comma-separated measurement times");
  opt_wt->excludes(opt_opt, opt_times);
  opt_opt->excludes(opt_times);
  sub_quantum->add_option("--state", qargs.state, "mixed | pure:theta,phi");
  sub_quantum->add_flag("--check-nsit", qargs.check_nsit, "print per-time consistency residuals");
  sub_quantum->add_option("--output,-o", qargs.output, "behavior file to write ('-' for stdout)");

  CheckArgs check;
  auto* sub_check = app.add_subcommand("check", "Evaluate a behavior file");
  sub_check->add_option("file", check.file, "behavior file")->required();
  sub_check->add_option("--tol", check.tol, "predictability tolerance")->check(CLI::NonNegativeNumber);
  sub_check->add_flag("--residuals", check.residuals, "print per-time consistency residuals");

  OntologyArgs onto;
  auto* sub_onto = app.add_subcommand("ontology-test", "Check predictable+NSIT models against the LGI");
  sub_onto->add_option("--runs", onto.runs, "number of sampled models")->check(CLI::PositiveNumber);
  sub_onto->add_option("--n", onto.n, "ontic states per model")->check(CLI::PositiveNumber);
  sub_onto->add_option("--seed", onto.seed, "random seed (default 42)");
  sub_onto->add_option("--delta", onto.delta, "3 or 4")->check(delta_check);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*sub_bounds) return cmd_bounds(bounds, out);
    if (*sub_certify) return cmd_certify(certify, out, err);
    if (*sub_quantum) return cmd_quantum(qargs, out);
    if (*sub_check) return cmd_check(check, out, err);
    if (*sub_onto) return cmd_ontology_test(onto, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace lgcert::cli
