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

#ifndef DSPKIT_GENERATE_HPP_
#define DSPKIT_GENERATE_HPP_

#include <cstdint>
#include <vector>

#include "dspkit/core.hpp"
#include "dspkit/transform.hpp"

namespace dspkit {

// W = 9, items a..h of total area 36; sliced optimum 4, unsliced optimum 5.
Instance gen_gap_instance();

// n items with widths in [1, W] and heights in [1, h_max]; ids r0, r1, ...
Instance gen_random(uint64_t seed, size_t n, int64_t W, int64_t h_max);

struct RandomSchedule {
  std::vector<Job> jobs;
  PtsSchedule schedule;
  int64_t machines = 1;
};

// Jobs with p in [1, p_max], q in [1, m], list-scheduled on the earliest free machines.
RandomSchedule gen_random_schedule(uint64_t seed, size_t n, int64_t m, int64_t p_max);

struct PlantedInstance {
  Instance instance;
  SpSolution packing;  // tiles the W x H rectangle exactly
  int64_t height = 0;
};

// Random guillotine cuts of a W x H rectangle into up to `pieces` items.
PlantedInstance gen_planted(uint64_t seed, int64_t W, int64_t H, size_t pieces);

}  // namespace dspkit

#endif  // DSPKIT_GENERATE_HPP_
