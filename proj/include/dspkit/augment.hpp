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

#ifndef DSPKIT_AUGMENT_HPP_
#define DSPKIT_AUGMENT_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dspkit/approx.hpp"
#include "dspkit/core.hpp"
#include "dspkit/oracle.hpp"
#include "dspkit/rational.hpp"
#include "dspkit/transform.hpp"

namespace dspkit {

struct PtsInnerResult {
  int64_t makespan = 0;
  PtsSchedule schedule;
};

struct DspInnerResult {
  int64_t peak = 0;
  DspSolution solution;
};

// An approximate solver with a declared ratio rho >= 1.
struct PtsInner {
  std::string name;
  Rational rho{1};
  std::function<PtsInnerResult(const std::vector<Job>&, int64_t machines)> solve;
};

struct DspInner {
  std::string name;
  Rational rho{1};
  std::function<DspInnerResult(const Instance&)> solve;
};

PtsInner exact_pts_inner(const OracleLimits& limits = {});
PtsInner steinberg_pts_inner();
DspInner exact_dsp_inner(const OracleLimits& limits = {});
DspInner steinberg_dsp_inner();

// Steinberg on the transposed instance: machines along x, time along y.
PtsInnerResult steinberg_schedule(const std::vector<Job>& jobs, int64_t machines);

struct Probe {
  int64_t guess = 0;
  int64_t objective = 0;
  bool accepted = false;
};

struct WidthAugmentation {
  int64_t height = 0;
  Instance instance;  // original items, strip width = width used
  SlicedPacking packing;
  int64_t width_used = 0;
  int64_t width_cap = 0;  // floor(rho * W)
  Bounds bounds;
  std::vector<Probe> probes;
  int64_t probe_limit = 0;
};

WidthAugmentation optimal_height_with_width_augmentation(const Instance& instance,
                                                         const PtsInner& inner);

struct MachineAugmentation {
  int64_t makespan = 0;
  PtsSchedule schedule;
  int64_t machines_used = 0;
  int64_t machine_cap = 0;  // floor(rho * m)
  Bounds bounds;
  std::vector<Probe> probes;
  int64_t probe_limit = 0;
};

MachineAugmentation optimal_makespan_with_machine_augmentation(const std::vector<Job>& jobs,
                                                               int64_t m, const DspInner& inner);

// ceil(log2(n)) for n >= 1.
int64_t ceil_log2(int64_t n);

}  // namespace dspkit

#endif  // DSPKIT_AUGMENT_HPP_
