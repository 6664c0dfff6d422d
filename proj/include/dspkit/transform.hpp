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

#ifndef DSPKIT_TRANSFORM_HPP_
#define DSPKIT_TRANSFORM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dspkit/core.hpp"

namespace dspkit {

struct Job {
  std::string id;
  int64_t p = 1;  // processing time
  int64_t q = 1;  // machines required
  bool operator==(const Job&) const = default;
};

// Entries are aligned with the job list the schedule was built for.
struct PtsSchedule {
  std::vector<int64_t> sigma;
  std::vector<std::vector<int64_t>> rho;
  bool operator==(const PtsSchedule&) const = default;
};

void check_jobs(const std::vector<Job>& jobs);

int64_t makespan(const std::vector<Job>& jobs, const PtsSchedule& schedule);

// Throws Infeasible naming the first conflicting job pair (or the offending job).
void validate_schedule(const std::vector<Job>& jobs, const PtsSchedule& schedule, int64_t m);

std::vector<Item> jobs_to_items(const std::vector<Job>& jobs);
std::vector<Job> items_to_jobs(const std::vector<Item>& items);

struct SweepCounters {
  int64_t events = 0;          // distinct start times processed
  int64_t restack_events = 0;  // events that re-stacked the active items
  int64_t comparisons = 0;     // total comparisons spent sorting
  int64_t max_event_comparisons = 0;
  int64_t machine_scans = 0;  // active jobs inspected
  int64_t max_event_scans = 0;
};

struct PackingFromSchedule {
  Instance instance;  // strip width = makespan
  SlicedPacking packing;
  SweepCounters counters;
};

PackingFromSchedule schedule_to_packing(const std::vector<Job>& jobs, const PtsSchedule& schedule,
                                        int64_t m);

struct ScheduleFromPacking {
  PtsSchedule schedule;
  SweepCounters counters;
};

ScheduleFromPacking packing_to_schedule(const Instance& instance, const SlicedPacking& packing,
                                        int64_t m);

}  // namespace dspkit

#endif  // DSPKIT_TRANSFORM_HPP_
