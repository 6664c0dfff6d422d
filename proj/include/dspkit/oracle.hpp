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

#ifndef DSPKIT_ORACLE_HPP_
#define DSPKIT_ORACLE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dspkit/core.hpp"
#include "dspkit/transform.hpp"

namespace dspkit {

struct OracleLimits {
  int64_t max_items = 14;
  int64_t max_width = 512;
  int64_t max_states = 50'000'000;
};

// Defaults overridden by DSPKIT_LIMITS, e.g. "max_items=10,max_states=1000000".
OracleLimits limits_from_env();
OracleLimits parse_limits(const std::string& spec, OracleLimits base = {});

struct DspOptimum {
  int64_t peak = 0;
  DspSolution solution;
  int64_t nodes = 0;
};

// Minimum peak; the witness is the lexicographically smallest optimal start vector.
DspOptimum solve_dsp_exact(const Instance& instance, const OracleLimits& limits = {});

// Some start vector with peak <= budget, if one exists.
std::optional<DspSolution> dsp_decide(const Instance& instance, int64_t budget,
                                      const OracleLimits& limits = {}, int64_t* nodes = nullptr);

struct SpOptimum {
  int64_t height = 0;
  SpSolution solution;
  int64_t nodes = 0;
};

// Minimum height of a non-sliced packing; Infeasible if it exceeds height_bound.
SpOptimum solve_sp_exact(const Instance& instance, std::optional<int64_t> height_bound = {},
                         const OracleLimits& limits = {});

std::optional<SpSolution> sp_decide(const Instance& instance, int64_t height,
                                    const OracleLimits& limits = {}, int64_t* nodes = nullptr);

struct PtsOptimum {
  int64_t makespan = 0;
  PtsSchedule schedule;
};

PtsOptimum solve_pts_exact(const std::vector<Job>& jobs, int64_t m,
                           const OracleLimits& limits = {});

}  // namespace dspkit

#endif  // DSPKIT_ORACLE_HPP_
