// Behavior file format (JSON syntax):
//
//   { "delta": 4,
//     "contexts": [ { "times": [1, 2], "p": [p_pp, p_pm, p_mp, p_mm] }, ... ] }
//
// Outcome order inside "p" is (+,+), (+,-), (-,+), (-,-). The context list
// must cover exactly the contexts of the functional for the given delta, in
// any order. Only functional contexts are stored; single-time statistics are
// read off earlier-slot marginals.

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "lgcert/scenario.hpp"

namespace lgcert {

/// Malformed or invalid behavior document. what() names the offending
/// line/column (syntax errors) or field path (schema errors).
class BehaviorFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Behavior parse_behavior(const std::string& text);
Behavior read_behavior_file(const std::string& path);

/// Serializes with round-trip precision for every probability.
std::string format_behavior(const Behavior& b);
void write_behavior_file(const Behavior& b, const std::string& path);

}  // namespace lgcert
