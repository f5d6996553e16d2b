#pragma once

#include "json.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace osva {

struct Witness {
  std::string input;
  std::string expected;
  std::string got;
};

/// Outcome of one check. Exact checks carry tolerance 0 and residual 0 on
/// success; numeric checks pass iff residual <= tolerance.
struct CheckReport {
  std::string name;
  bool passed = true;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t checked = 0;  // number of identities evaluated
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  /// Records a violation; passed is cleared.
  void fail(std::string input, std::string expected, std::string got);
  /// Sets passed from residual and tolerance (numeric checks).
  void settle_numeric();
};

constexpr std::size_t kMaxWitnesses = 32;

nlohmann::ordered_json to_json(const CheckReport& report);
CheckReport report_from_json(const nlohmann::json& j);

}  // namespace osva
