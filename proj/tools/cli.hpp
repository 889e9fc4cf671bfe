#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lgcert::cli {

inline constexpr std::uint64_t kDefaultSeed = 42;

enum ExitCode : int {
  kSuccess = 0,
  kFalsified = 1,   // ontology property suite found a counterexample
  kUsage = 2,       // parse errors, malformed input files
  kInfeasible = 3,  // epsilon beyond the consistent polytope
};

/// Runs the command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lgcert::cli
