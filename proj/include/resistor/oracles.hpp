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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "resistor/evaluator.hpp"
#include "resistor/instance.hpp"

namespace resistor {

struct QueryFlags {
  Regime regime = Regime::ExactAffine;
  // max_{j>=i} |a_j . x_i| for randomized oracles; max_{j>i} for adaptive
  // ones, filled in by finalize() once the later pieces exist.
  double event_e_margin = 0.0;
  // The answer used only pieces 1..i.
  bool locality_ok = true;
};

struct TranscriptEntry {
  int index = 0;  // 1-based
  Vector query;
  OracleResponse response;
  QueryFlags flags;
};

struct Transcript {
  Mode mode = Mode::Deterministic;
  int budget = 0;
  std::vector<TranscriptEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

// One JSON object per query: i, x_norm, value, grad_norm, regime,
// event_e_margin, locality_ok, plus x and gradient when dump_vectors is set.
nlohmann::json to_json(const TranscriptEntry& entry, bool dump_vectors = false);
std::string to_jsonl(const Transcript& transcript, bool dump_vectors = false);

// A k-th order oracle over the unit ball with a fixed query budget. query()
// checks feasibility and budget, defers to answer(), and records the result.
class Oracle {
 public:
  virtual ~Oracle() = default;

  OracleResponse query(const Vector& x);

  virtual std::size_t dimension() const = 0;
  virtual int order() const = 0;
  int budget() const { return transcript_.budget; }
  int queries_made() const { return static_cast<int>(transcript_.size()); }
  const Transcript& transcript() const { return transcript_; }

 protected:
  Oracle(Mode mode, int budget) { transcript_.mode = mode; transcript_.budget = budget; }

  struct Answer {
    OracleResponse response;
    QueryFlags flags;
  };
  virtual Answer answer(const Vector& x, int index) = 0;

  Transcript transcript_;
};

// Answers against a fixed, fully known instance.
class InstanceOracle : public Oracle {
 public:
  InstanceOracle(HardInstance instance, MCBudget budget, std::optional<int> query_budget = {});

  std::size_t dimension() const override { return instance_.params().d; }
  int order() const override { return instance_.params().k; }
  const HardInstance& instance() const { return instance_; }

 protected:
  Answer answer(const Vector& x, int index) override;

  HardInstance instance_;
  MCBudget mc_;
};

struct ConsistencyReport {
  bool all_equal = true;
  std::vector<int> mismatches;  // 1-based query indices
  bool partial = false;         // finalized before T queries
  double max_later_inner = 0.0; // max_{j>i} |a_j . x_i|
};

struct FinalizeResult {
  HardInstance instance;
  ConsistencyReport report;
};

// Resisting oracle: every query adds the piece it reveals, then is answered
// by the partial instance built so far.
class AdaptiveOracle : public Oracle {
 public:
  // Throws if validate(params) is non-empty unless allow_invalid is set.
  AdaptiveOracle(InstanceParams params, std::uint64_t seed, MCBudget budget,
                 bool allow_invalid = false);

  std::size_t dimension() const override { return instance_.params().d; }
  int order() const override { return instance_.params().k; }
  const HardInstance& partial_instance() const { return instance_; }
  const std::vector<PieceOrigin>& origins() const { return origins_; }

  // Replays every recorded query against the current instance and compares
  // answers bit for bit.
  FinalizeResult finalize();

 protected:
  Answer answer(const Vector& x, int index) override;

 private:
  HardInstance instance_;
  std::uint64_t seed_;
  MCBudget mc_;
  std::vector<PieceOrigin> origins_;
};

// Fixed random basis drawn up front; nothing adapts to the queries.
class RandomizedOracle : public InstanceOracle {
 public:
  RandomizedOracle(const InstanceParams& params, std::uint64_t seed, MCBudget budget);

 protected:
  Answer answer(const Vector& x, int index) override;
};

HardInstance randomized_instance(const InstanceParams& params, std::uint64_t seed);

struct EventECheck {
  bool held = true;
  std::optional<int> first_violation;
};

// Held iff every recorded margin is <= 1/(20 T^1.5).
EventECheck event_e_check(const Transcript& transcript, const InstanceParams& params);

}  // namespace resistor
