// Copyright 2026 The dspkit Authors.
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

#ifndef DSPKIT_BENCH_HPP_
#define DSPKIT_BENCH_HPP_

#include <cstdint>
#include <vector>

#include "dspkit/transform.hpp"

namespace dspkit {

struct BenchRow {
  int64_t n = 0;
  int64_t machines = 0;
  SweepCounters to_packing;
  SweepCounters to_schedule;
  double to_packing_ms = 0;
  double to_schedule_ms = 0;
  int64_t n_log_n = 0;  // n * ceil(log2 n)

  // Counter limits: re-stack events <= n, per-event comparisons <= n log n,
  // per-event machine scans <= n.
  bool within_limits() const;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

// One random schedule per size, pushed through both sweeps.
BenchReport bench(const std::vector<int64_t>& sizes, uint64_t seed = 1, int64_t machines = 8);

}  // namespace dspkit

#endif  // DSPKIT_BENCH_HPP_
