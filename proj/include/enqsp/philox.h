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

#ifndef ENQSP_PHILOX_H_
#define ENQSP_PHILOX_H_

#include <array>
#include <cstdint>

namespace enqsp {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// Address of an independent random stream. Every draw made by the library is
// a pure function of its key, so work can be scheduled in any order.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t experiment = 0;
  std::uint64_t sample = 0;
  // Position within a sample (for phase errors: the phase index). Only the
  // low 24 bits are usable; the high byte indexes blocks inside the stream.
  std::uint32_t slot = 0;

  StreamKey with_sample(std::uint64_t s) const {
    StreamKey k = *this;
    k.sample = s;
    return k;
  }
  StreamKey with_slot(std::uint32_t s) const {
    StreamKey k = *this;
    k.slot = s;
    return k;
  }
  StreamKey with_experiment(std::uint32_t e) const {
    StreamKey k = *this;
    k.experiment = e;
    return k;
  }
};

inline constexpr std::uint32_t kMaxSlot = (1u << 24) - 1;
// Reserved slots, above any phase position.
inline constexpr std::uint32_t kOutcomeSlot = kMaxSlot;
inline constexpr std::uint32_t kPostSelectSlot = kMaxSlot - 1;

// Sequential draws from the stream addressed by a StreamKey. Holds up to 256
// Philox blocks (1024 words) per key.
class CounterStream {
 public:
  explicit CounterStream(const StreamKey& key);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }
  // Standard normal via Box-Muller.
  double normal();

 private:
  void refill();

  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  std::uint32_t block_index_ = 0;
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace enqsp

#endif  // ENQSP_PHILOX_H_
