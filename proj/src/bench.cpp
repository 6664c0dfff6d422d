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

#include "dspkit/bench.hpp"

#include <chrono>

#include "dspkit/errors.hpp"
#include "dspkit/generate.hpp"

namespace dspkit {

bool BenchRow::within_limits() const {
  return to_packing.restack_events <= n && to_packing.max_event_comparisons <= n_log_n &&
         to_schedule.max_event_scans <= n;
}

BenchReport bench(const std::vector<int64_t>& sizes, uint64_t seed, int64_t machines) {
  using Clock = std::chrono::steady_clock;
  BenchReport report;
  for (int64_t n : sizes) {
    if (n < 0) throw InvalidInput("bench sizes must be non-negative");
    BenchRow row;
    row.n = n;
    row.machines = machines;
    int64_t lg = 0;
    while ((int64_t{1} << lg) < n) ++lg;
    row.n_log_n = n * lg;
    auto rs = gen_random_schedule(seed + static_cast<uint64_t>(n), static_cast<size_t>(n), machines, 100);
    auto t0 = Clock::now();
    auto pk = schedule_to_packing(rs.jobs, rs.schedule, machines);
    auto t1 = Clock::now();
    auto back = packing_to_schedule(pk.instance, pk.packing, machines);
    auto t2 = Clock::now();
    row.to_packing = pk.counters;
    row.to_schedule = back.counters;
    row.to_packing_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.to_schedule_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace dspkit
