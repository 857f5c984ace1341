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

#include <array>
#include <cstdint>
#include <limits>

namespace resistor {

// Philox4x32-10 (Salmon et al., SC 2011). A keyed bijection on 128-bit
// counters; stream positions are addressable, so any draw can be replayed
// from (key, counter) alone.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

// Purposes partition the counter space of one seed into independent streams.
enum class StreamPurpose : std::uint32_t {
  kDegeneratePiece = 1,
  kValue = 2,
  kGradient = 3,
  kBasis = 4,
  kAudit = 5,
  kOptimizer = 6,
  kTest = 7,
};

struct StreamKey {
  std::uint64_t seed = 0;
  StreamPurpose purpose = StreamPurpose::kTest;
  std::uint32_t index = 0;
};

// A reproducible stream keyed by (seed, purpose, index). Models
// UniformRandomBitGenerator so it can drive <random> distributions, but the
// members uniform()/normal() are preferred: their output does not depend on
// the standard library implementation.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(StreamKey key);
  Stream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t index = 0)
      : Stream(StreamKey{seed, purpose, index}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal (Box-Muller, second variate cached).
  double normal();

  const StreamKey& key() const { return key_; }
  std::uint64_t blocks_consumed() const { return block_; }

 private:
  std::uint32_t next32();

  StreamKey key_;
  Philox4x32::Key philox_key_{};
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace resistor
