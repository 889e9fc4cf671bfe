// Curve tables for plotting the certified min-entropy against epsilon.
//
// CSV layout: header `epsilon,functional_value,context,H_min_bits,P_guess`,
// one row per (epsilon, context) followed by a `min` row carrying the
// minimum entropy over contexts. Numbers use 9 significant digits.

#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "lgcert/certifier.hpp"

namespace lgcert {

/// printf-style %.9g.
std::string format_number(double x);

void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows);
void write_curve_json(std::ostream& out, std::span<const CurveRow> rows);

}  // namespace lgcert
