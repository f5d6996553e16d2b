#include "osva/report.hpp"

#include <cmath>

namespace osva {

void CheckReport::fail(std::string input, std::string expected, std::string got) {
  passed = false;
  if (witnesses.size() < kMaxWitnesses)
    witnesses.push_back({std::move(input), std::move(expected), std::move(got)});
}

void CheckReport::settle_numeric() {
  passed = witnesses.empty() && std::isfinite(residual) && residual <= tolerance;
}

nlohmann::ordered_json to_json(const CheckReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["passed"] = report.passed;
  j["residual"] = report.residual;
  j["tolerance"] = report.tolerance;
  j["checked"] = report.checked;
  auto& w = j["witnesses"] = nlohmann::ordered_json::array();
  for (const auto& x : report.witnesses)
    w.push_back({{"input", x.input}, {"expected", x.expected}, {"got", x.got}});
  j["notes"] = report.notes;
  return j;
}

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport r;
  r.name = j.at("name").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  r.residual = j.at("residual").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.checked = j.at("checked").get<std::size_t>();
  for (const auto& w : j.at("witnesses"))
    r.witnesses.push_back({w.at("input"), w.at("expected"), w.at("got")});
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

}  // namespace osva
