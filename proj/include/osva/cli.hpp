#pragma once

#include "osva/report.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osva {

constexpr const char* kToolVersion = "0.1.0";

/// Bad paths, flags or input files; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { text, structured };

struct RunConfig {
  std::string command;  // validate | solve | axioms | geometry
  // validate / solve
  std::string builtin;                 // "ising" or empty
  std::string data_path;               // fusion-data file
  std::string algebras_path;           // validate: solutions file to verify
  std::vector<int> dims;               // solve
  std::size_t search_bound = 200000;   // solve
  std::string solutions_path;          // solve: where the solutions file goes
  // axioms / geometry
  std::string instance = "heisenberg";  // assoc:<file> | heisenberg | tensor:<file>
  int cutoff = 8;
  double tol = 1e-4;
  int samples = 4;
  unsigned long long seed = 0;
  std::string check;  // geometry: vacuum | conformal | sewing | pr-consistency, empty = all
  double eps = 1e-4;
  // output
  std::string out;
  ReportFormat format = ReportFormat::structured;
  bool timings = false;

  nlohmann::ordered_json echo() const;
};

struct ReportBundle {
  std::string version = kToolVersion;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<CheckReport> reports;
  std::vector<double> wall_ms;  // parallel to reports
  nlohmann::ordered_json solutions;  // solve only; null otherwise

  bool overall() const;
};

/// Runs the configured suite. Throws UsageError on bad configuration or input.
ReportBundle execute(const RunConfig& config);

/// Deterministic serialization; wall times only with `timings`.
std::string emit_report(const ReportBundle& bundle, ReportFormat format, bool timings = false);
ReportBundle bundle_from_json(const nlohmann::json& j);

/// Parses argv, runs, writes the report. Returns the process exit code:
/// 0 overall pass, 1 check failure, 2 usage or I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace osva
