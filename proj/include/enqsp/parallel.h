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

#ifndef ENQSP_PARALLEL_H_
#define ENQSP_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace enqsp {

// Execution resources for the heavy loops. Results never depend on `threads`.
struct Execution {
  int threads = 1;
};

// Runs body(i) for i in [0, count) on up to `exec.threads` worker threads.
// The first exception thrown by any body is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t count, const Execution& exec, Body&& body) {
  std::size_t workers = static_cast<std::size_t>(std::max(1, exec.threads));
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Number of terms folded sequentially into one partial result.
inline constexpr std::size_t kReductionChunk = 64;

// Running mean of term(0..count-1). Terms are grouped into fixed chunks of
// kReductionChunk, each chunk is averaged in index order, and chunk means are
// merged sequentially with count weights. The grouping is fixed, so the
// result is bit-identical for any thread count. Identical terms give an exact
// mean.
template <class T, class Term>
T chunked_mean(std::size_t count, const Execution& exec, const T& zero, Term&& term) {
  if (count == 0) return zero;
  std::size_t chunks = (count + kReductionChunk - 1) / kReductionChunk;
  std::vector<T> means(chunks, zero);
  parallel_for(chunks, exec, [&](std::size_t c) {
    std::size_t begin = c * kReductionChunk;
    std::size_t end = std::min(count, begin + kReductionChunk);
    T mean = term(begin);
    for (std::size_t i = begin + 1; i < end; ++i) {
      T x = term(i);
      mean += (x - mean) / static_cast<double>(i - begin + 1);
    }
    means[c] = std::move(mean);
  });
  T total = means[0];
  std::size_t seen = std::min(count, kReductionChunk);
  for (std::size_t c = 1; c < chunks; ++c) {
    std::size_t n = std::min(count - c * kReductionChunk, kReductionChunk);
    seen += n;
    total += (means[c] - total) * (static_cast<double>(n) / static_cast<double>(seen));
  }
  return total;
}

}  // namespace enqsp

#endif  // ENQSP_PARALLEL_H_
