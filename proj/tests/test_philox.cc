// Copyright 2026 The EnQSP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "enqsp/philox.h"

namespace enqsp {
namespace {

// Known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterStream, SameKeySameSequence) {
  StreamKey key{42, 3, 17, 5};
  CounterStream a(key), b(key);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u32(), b.next_u32());
}

TEST(CounterStream, KeyFieldsSeparateStreams) {
  StreamKey base{42, 3, 17, 5};
  std::set<std::uint64_t> firsts;
  for (StreamKey k : {base, base.with_sample(18), base.with_slot(6), base.with_experiment(4),
                      StreamKey{43, 3, 17, 5}, base.with_sample(17 + (std::uint64_t{1} << 40))}) {
    firsts.insert(CounterStream(k).next_u64());
  }
  EXPECT_EQ(firsts.size(), 6u);
}

TEST(CounterStream, UniformRangeAndMoments) {
  CounterStream s(StreamKey{1, 0, 0, 0});
  double sum = 0, sum2 = 0;
  const int n = 200;  // stays within one key's block budget
  for (int i = 0; i < n; ++i) {
    double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(CounterStream, NormalMomentsAcrossKeys) {
  const int n = 100000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    double z = CounterStream(StreamKey{9, 1, static_cast<std::uint64_t>(i), 0}).normal();
    sum += z;
    sum2 += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sum2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(CounterStream, OpenLowNeverZero) {
  CounterStream s(StreamKey{5, 0, 0, 0});
  for (int i = 0; i < 200; ++i) EXPECT_GT(s.uniform_open_low(), 0.0);
}

}  // namespace
}  // namespace enqsp
