// Copyright 2026 The Resistor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "resistor/harness.hpp"

namespace resistor {
namespace {

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

Regime regime_from_string(const std::string& text) {
  if (text == "exact_affine") return Regime::ExactAffine;
  if (text == "monte_carlo") return Regime::MonteCarlo;
  throw std::invalid_argument("unknown regime '" + text + "'");
}

std::string emit_csv(const RunReport& report) {
  std::ostringstream os;
  os << "iter,certified_gap,floor,regime,event_e_margin,value,grad_norm\n";
  for (const auto& row : report.rows) {
    os << row.iter << ',' << shortest(row.certified_gap) << ',' << shortest(row.floor) << ','
       << to_string(row.regime) << ',' << shortest(row.event_e_margin) << ','
       << shortest(row.value) << ',' << shortest(row.grad_norm) << '\n';
  }
  return os.str();
}

}  // namespace

ReportFormat format_from_string(const std::string& text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + text + "'");
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"iter", r.iter},
                    {"certified_gap", r.certified_gap},
                    {"floor", r.floor},
                    {"regime", to_string(r.regime)},
                    {"event_e_margin", r.event_e_margin},
                    {"value", r.value},
                    {"grad_norm", r.grad_norm}});
  }
  nlohmann::json audits = nlohmann::json::array();
  for (const auto& a : report.lipschitz_audit) {
    audits.push_back({{"order", a.order},
                      {"pairs", a.pairs},
                      {"max_ratio", a.max_ratio},
                      {"bound", a.bound},
                      {"slack", a.slack},
                      {"pass", a.pass}});
  }
  const RunSummary& s = report.summary;
  nlohmann::json summary{{"pass", s.pass},
                         {"floor_held", s.floor_held},
                         {"min_gap", s.min_gap},
                         {"consistency_ok", s.consistency_ok},
                         {"audits_ok", s.audits_ok},
                         {"event_e_held", nullptr},
                         {"first_violation", nullptr}};
  if (s.event_e_held) summary["event_e_held"] = *s.event_e_held;
  if (s.first_violation) summary["first_violation"] = *s.first_violation;
  return {{"mode", to_string(report.mode)},
          {"T", report.T},
          {"k", report.k},
          {"method", to_string(report.method)},
          {"seed", report.seed},
          {"scale", report.scale},
          {"rows", rows},
          {"lipschitz_audit", audits},
          {"min_value",
           {{"estimate", report.min_value.estimate},
            {"std_error", report.min_value.std_error},
            {"bound", report.min_value.bound},
            {"pass", report.min_value.pass}}},
          {"summary", summary}};
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport report;
  report.mode = mode_from_string(j.at("mode").get<std::string>());
  report.T = j.at("T").get<int>();
  report.k = j.at("k").get<int>();
  report.method = method_from_string(j.at("method").get<std::string>());
  report.seed = j.at("seed").get<std::uint64_t>();
  report.scale = j.at("scale").get<double>();
  for (const auto& r : j.at("rows")) {
    report.rows.push_back({r.at("iter").get<int>(), r.at("certified_gap").get<double>(),
                           r.at("floor").get<double>(),
                           regime_from_string(r.at("regime").get<std::string>()),
                           r.at("event_e_margin").get<double>(), r.at("value").get<double>(),
                           r.at("grad_norm").get<double>()});
  }
  for (const auto& a : j.at("lipschitz_audit")) {
    report.lipschitz_audit.push_back({a.at("order").get<int>(), a.at("pairs").get<int>(),
                                      a.at("max_ratio").get<double>(),
                                      a.at("bound").get<double>(), a.at("slack").get<double>(),
                                      a.at("pass").get<bool>()});
  }
  const auto& mv = j.at("min_value");
  report.min_value = {mv.at("estimate").get<double>(), mv.at("std_error").get<double>(),
                      mv.at("bound").get<double>(), mv.at("pass").get<bool>()};
  const auto& s = j.at("summary");
  report.summary.pass = s.at("pass").get<bool>();
  report.summary.floor_held = s.at("floor_held").get<bool>();
  report.summary.min_gap = s.at("min_gap").get<double>();
  report.summary.consistency_ok = s.at("consistency_ok").get<bool>();
  report.summary.audits_ok = s.at("audits_ok").get<bool>();
  if (!s.at("event_e_held").is_null()) report.summary.event_e_held = s["event_e_held"].get<bool>();
  if (!s.at("first_violation").is_null()) {
    report.summary.first_violation = s["first_violation"].get<int>();
  }
  return report;
}

std::string emit_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) return emit_csv(report);
  return to_json(report).dump(2) + "\n";
}

void write_report(const RunReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << emit_report(report, format);
}

}  // namespace resistor
