#include "lgcert/curve_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace lgcert {

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
  out << "epsilon,functional_value,context,H_min_bits,P_guess\n";
  for (const auto& row : rows) {
    const std::string prefix = format_number(row.epsilon) + "," + format_number(row.functional_value) + ",";
    for (const auto& c : row.per_context) {
      out << prefix << c.context.label() << "," << format_number(c.min_entropy_bits) << ","
          << format_number(c.guessing_probability) << "\n";
    }
    out << prefix << "min," << format_number(row.min_entropy_bits) << "," << format_number(row.guessing_probability)
        << "\n";
  }
}

void write_curve_json(std::ostream& out, std::span<const CurveRow> rows) {
  // Values go through format_number so both formats agree digit for digit.
  auto num = [](double x) { return nlohmann::json::parse(format_number(x)); };
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json contexts = nlohmann::json::array();
    for (const auto& c : row.per_context) {
      contexts.push_back({{"context", c.context.label()},
                          {"H_min_bits", num(c.min_entropy_bits)},
                          {"P_guess", num(c.guessing_probability)}});
    }
    doc.push_back({{"epsilon", num(row.epsilon)},
                   {"functional_value", num(row.functional_value)},
                   {"contexts", std::move(contexts)},
                   {"min", {{"H_min_bits", num(row.min_entropy_bits)}, {"P_guess", num(row.guessing_probability)}}}});
  }
  out << doc.dump(2) << "\n";
}

}  // namespace lgcert
