#include "lgcert/behavior_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lgcert {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw BehaviorFormatError(where + ": " + what);
}

int read_int(const json& node, const std::string& where) {
  if (!node.is_number_integer()) fail(where, "expected an integer");
  return node.get<int>();
}

}  // namespace

Behavior parse_behavior(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    throw BehaviorFormatError(std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  if (!doc.contains("delta")) fail("delta", "missing field");
  if (!doc.contains("contexts")) fail("contexts", "missing field");

  Delta delta;
  try {
    delta = delta_from_int(read_int(doc["delta"], "delta"));
  } catch (const std::invalid_argument& e) {
    fail("delta", e.what());
  }

  const json& contexts = doc["contexts"];
  if (!contexts.is_array()) fail("contexts", "expected an array");

  std::vector<std::pair<Context, JointDistribution>> table;
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    const std::string where = "contexts[" + std::to_string(k) + "]";
    const json& entry = contexts[k];
    if (!entry.is_object()) fail(where, "expected an object");
    if (!entry.contains("times")) fail(where + ".times", "missing field");
    if (!entry.contains("p")) fail(where + ".p", "missing field");

    const json& times = entry["times"];
    if (!times.is_array() || times.size() != 2) fail(where + ".times", "expected two time indices");
    const int t0 = read_int(times[0], where + ".times[0]");
    const int t1 = read_int(times[1], where + ".times[1]");

    const json& p = entry["p"];
    if (!p.is_array() || p.size() != 4) fail(where + ".p", "expected four probabilities");
    std::array<double, 4> probs{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!p[i].is_number()) fail(where + ".p[" + std::to_string(i) + "]", "expected a number");
      probs[i] = p[i].get<double>();
    }

    try {
      table.emplace_back(Context(t0, t1), JointDistribution(probs));
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }

  try {
    return Behavior(delta, std::move(table));
  } catch (const std::invalid_argument& e) {
    fail("contexts", e.what());
  }
}

Behavior read_behavior_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BehaviorFormatError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_behavior(buf.str());
  } catch (const BehaviorFormatError& e) {
    throw BehaviorFormatError(path + ": " + e.what());
  }
}

std::string format_behavior(const Behavior& b) {
  json doc;
  doc["delta"] = to_int(b.delta());
  json contexts = json::array();
  for (const auto& [ctx, dist] : b.table()) {
    const auto& p = dist.probabilities();
    contexts.push_back({{"times", {ctx.earlier(), ctx.later()}}, {"p", {p[0], p[1], p[2], p[3]}}});
  }
  doc["contexts"] = std::move(contexts);
  return doc.dump(2) + "\n";
}

void write_behavior_file(const Behavior& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << format_behavior(b);
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace lgcert
