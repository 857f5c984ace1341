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

#include <cmath>
#include <set>

#include "doctest.h"

#include "resistor/rng.hpp"

using namespace resistor;

TEST_SUITE("rng") {
  // Known-answer vectors for Philox4x32-10 from the Random123 distribution.
  TEST_CASE("philox known answers") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                            K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams replay exactly") {
    Stream a(42, StreamPurpose::kValue, 7);
    Stream b(42, StreamPurpose::kValue, 7);
    for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
    CHECK(a.blocks_consumed() == b.blocks_consumed());
  }

  TEST_CASE("purpose, index and seed separate streams") {
    std::set<std::uint64_t> firsts;
    firsts.insert(Stream(1, StreamPurpose::kValue, 0)());
    firsts.insert(Stream(1, StreamPurpose::kValue, 1)());
    firsts.insert(Stream(1, StreamPurpose::kGradient, 0)());
    firsts.insert(Stream(2, StreamPurpose::kValue, 0)());
    CHECK(firsts.size() == 4);
  }

  TEST_CASE("uniform and normal moments") {
    Stream rng(3, StreamPurpose::kTest);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    double lo = 1, hi = 0;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      lo = std::min(lo, u);
      hi = std::max(hi, u);
      su += u;
      const double z = rng.normal();
      sn += z;
      sn2 += z * z;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(su / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sn / n) < 3.0 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
  }
}
