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

#include "resistor/oracles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace resistor {
namespace {

bool answered_locally(const OracleResponse& r, int index) {
  return r.regime == Regime::ExactAffine && r.affine_index >= 1 && r.affine_index <= index;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

nlohmann::json to_json(const TranscriptEntry& entry, bool dump_vectors) {
  nlohmann::json j{{"i", entry.index},
                   {"x_norm", entry.query.norm()},
                   {"value", entry.response.value},
                   {"grad_norm", entry.response.gradient.norm()},
                   {"regime", to_string(entry.flags.regime)},
                   {"event_e_margin", entry.flags.event_e_margin},
                   {"locality_ok", entry.flags.locality_ok}};
  if (dump_vectors) {
    j["x"] = to_std(entry.query);
    j["gradient"] = to_std(entry.response.gradient);
  }
  return j;
}

std::string to_jsonl(const Transcript& transcript, bool dump_vectors) {
  std::ostringstream os;
  for (const auto& entry : transcript.entries) os << to_json(entry, dump_vectors).dump() << '\n';
  return os.str();
}

OracleResponse Oracle::query(const Vector& x) {
  if (queries_made() >= budget()) {
    throw std::length_error("oracle: query budget of " + std::to_string(budget()) +
                            " exhausted");
  }
  if (static_cast<std::size_t>(x.size()) != dimension()) {
    throw std::invalid_argument("oracle: query dimension mismatch");
  }
  require_feasible(x, "oracle");
  const int index = queries_made() + 1;
  Answer a = answer(x, index);
  transcript_.entries.push_back(TranscriptEntry{index, x, a.response, a.flags});
  return std::move(a.response);
}

InstanceOracle::InstanceOracle(HardInstance instance, MCBudget budget,
                               std::optional<int> query_budget)
    : Oracle(instance.params().mode, query_budget.value_or(instance.params().T)),
      instance_(std::move(instance)),
      mc_(budget) {
  if (instance_.size() == 0) throw std::invalid_argument("InstanceOracle: empty instance");
}

Oracle::Answer InstanceOracle::answer(const Vector& x, int index) {
  Answer a{oracle_answer(instance_, x, mc_, static_cast<std::uint32_t>(index)), {}};
  a.flags.regime = a.response.regime;
  a.flags.locality_ok = answered_locally(a.response, index);
  return a;
}

AdaptiveOracle::AdaptiveOracle(InstanceParams params, std::uint64_t seed, MCBudget budget,
                               bool allow_invalid)
    : Oracle(params.mode, params.T), instance_(params), seed_(seed), mc_(budget) {
  if (params.mode != Mode::Deterministic) {
    throw std::invalid_argument("AdaptiveOracle: params must be in deterministic mode");
  }
  const auto violations = validate(params);
  if (!violations.empty() && !allow_invalid) {
    throw std::invalid_argument("AdaptiveOracle: invalid params: " + violations.front());
  }
}

Oracle::Answer AdaptiveOracle::answer(const Vector& x, int index) {
  Stream rng(seed_, StreamPurpose::kDegeneratePiece, static_cast<std::uint32_t>(index));
  origins_.push_back(instance_.append_piece(x, rng));
  Answer a{oracle_answer(instance_, x, mc_, static_cast<std::uint32_t>(index)), {}};
  a.flags.regime = a.response.regime;
  a.flags.locality_ok = answered_locally(a.response, index);
  // No later pieces exist yet; finalize() records the real margin.
  a.flags.event_e_margin = 0.0;
  return a;
}

FinalizeResult AdaptiveOracle::finalize() {
  ConsistencyReport report;
  report.partial = !instance_.complete();
  const auto& pieces = instance_.pieces();
  for (auto& entry : transcript_.entries) {
    const OracleResponse replay =
        oracle_answer(instance_, entry.query, mc_, static_cast<std::uint32_t>(entry.index));
    if (!replay.same_answer(entry.response)) {
      report.all_equal = false;
      report.mismatches.push_back(entry.index);
    }
    double later = 0.0;
    for (std::size_t j = static_cast<std::size_t>(entry.index); j < pieces.size(); ++j) {
      later = std::max(later, std::abs(pieces[j].a.dot(entry.query)));
    }
    entry.flags.event_e_margin = later;
    report.max_later_inner = std::max(report.max_later_inner, later);
  }
  return {instance_, std::move(report)};
}

HardInstance randomized_instance(const InstanceParams& params, std::uint64_t seed) {
  if (params.mode != Mode::Randomized) {
    throw std::invalid_argument("randomized_instance: params must be in randomized mode");
  }
  const auto violations = validate(params);
  if (!violations.empty()) {
    throw std::invalid_argument("randomized_instance: invalid params: " + violations.front());
  }
  Stream rng(seed, StreamPurpose::kBasis, 0);
  OrthonormalBasis basis =
      random_orthonormal_basis(params.d, static_cast<std::size_t>(params.T), rng);
  return HardInstance(params, basis.vectors());
}

RandomizedOracle::RandomizedOracle(const InstanceParams& params, std::uint64_t seed,
                                   MCBudget budget)
    : InstanceOracle(randomized_instance(params, seed), budget) {}

Oracle::Answer RandomizedOracle::answer(const Vector& x, int index) {
  Answer a = InstanceOracle::answer(x, index);
  double margin = 0.0;
  const auto& pieces = instance_.pieces();
  for (std::size_t j = static_cast<std::size_t>(index - 1); j < pieces.size(); ++j) {
    margin = std::max(margin, std::abs(pieces[j].a.dot(x)));
  }
  a.flags.event_e_margin = margin;
  return a;
}

EventECheck event_e_check(const Transcript& transcript, const InstanceParams& params) {
  if (transcript.mode != Mode::Randomized || params.mode != Mode::Randomized) {
    throw std::invalid_argument("event_e_check: needs a randomized-mode transcript");
  }
  const double threshold = params.event_threshold();
  EventECheck out;
  for (const auto& entry : transcript.entries) {
    if (entry.flags.event_e_margin > threshold) {
      out.held = false;
      out.first_violation = entry.index;
      break;
    }
  }
  return out;
}

}  // namespace resistor
