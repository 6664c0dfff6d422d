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

#include <doctest.h>

#include "dspkit/augment.hpp"
#include "dspkit/oracle.hpp"
#include "support.hpp"

using namespace dspkit;
using namespace dspkit::testing;

namespace {

void check_probes(const std::vector<Probe>& probes, const Bounds& b, int64_t limit) {
  CHECK(limit == ceil_log2(b.upper - b.lower + 1));
  CHECK(static_cast<int64_t>(probes.size()) <= limit);
}

}  // namespace

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(1024) == 10);
}

TEST_CASE("width augmentation with an exact inner solver") {
  Instance gap = gap_instance();
  WidthAugmentation a = optimal_height_with_width_augmentation(gap, exact_pts_inner());
  CHECK(a.height == 4);
  CHECK(a.width_used <= 9);
  CHECK(validate_sliced(a.instance, a.packing, a.height).ok());
  check_probes(a.probes, a.bounds, a.probe_limit);

  Instance one(5, {{"a", 2, 3}});
  WidthAugmentation s = optimal_height_with_width_augmentation(one, exact_pts_inner());
  CHECK(s.height == 3);
  CHECK(s.probes.size() <= 1);

  for (uint64_t seed = 0; seed < 40; ++seed) {
    Instance inst = gen_random(seed, 1 + seed % 6, 1 + seed % 12, 6);
    WidthAugmentation w = optimal_height_with_width_augmentation(inst, exact_pts_inner());
    CHECK(w.height == solve_dsp_exact(inst).peak);
    CHECK(w.width_used <= w.width_cap);
    CHECK(validate_sliced(w.instance, w.packing, w.height).ok());
    check_probes(w.probes, w.bounds, w.probe_limit);
  }
}

TEST_CASE("width augmentation with the Steinberg inner solver") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = gen_random(seed + 300, 1 + seed % 6, 2 + seed % 10, 6);
    PtsInner inner = steinberg_pts_inner();
    WidthAugmentation w = optimal_height_with_width_augmentation(inst, inner);
    CHECK(w.height <= solve_dsp_exact(inst).peak);
    CHECK(Rational(w.width_used) <= inner.rho * inst.strip_width());
    CHECK(validate_sliced(w.instance, w.packing, w.height).ok());
    check_probes(w.probes, w.bounds, w.probe_limit);
  }
}

TEST_CASE("machine augmentation with an exact inner solver") {
  std::vector<Job> one{{"j", 6, 3}};
  MachineAugmentation a = optimal_makespan_with_machine_augmentation(one, 3, exact_dsp_inner());
  CHECK(a.makespan == 6);

  for (uint64_t seed = 0; seed < 30; ++seed) {
    int64_t m = 1 + seed % 4;
    RandomSchedule rs = gen_random_schedule(seed, 1 + seed % 6, m, 5);
    MachineAugmentation b = optimal_makespan_with_machine_augmentation(rs.jobs, m, exact_dsp_inner());
    CHECK(b.makespan == solve_pts_exact(rs.jobs, m).makespan);
    CHECK(b.machines_used <= b.machine_cap);
    CHECK_NOTHROW(validate_schedule(rs.jobs, b.schedule, b.machine_cap));
    check_probes(b.probes, b.bounds, b.probe_limit);
  }
}

TEST_CASE("machine augmentation with the Steinberg inner solver") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    int64_t m = 1 + seed % 4;
    RandomSchedule rs = gen_random_schedule(seed + 77, 1 + seed % 6, m, 5);
    MachineAugmentation b =
        optimal_makespan_with_machine_augmentation(rs.jobs, m, steinberg_dsp_inner());
    CHECK(b.makespan <= solve_pts_exact(rs.jobs, m).makespan);
    CHECK(b.machines_used <= 2 * m);
    CHECK_NOTHROW(validate_schedule(rs.jobs, b.schedule, 2 * m));
    check_probes(b.probes, b.bounds, b.probe_limit);
  }
}

TEST_CASE("steinberg schedule is feasible on the transposed strip") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    RandomSchedule rs = gen_random_schedule(seed, 8, 4, 6);
    PtsInnerResult r = steinberg_schedule(rs.jobs, 4);
    CHECK_NOTHROW(validate_schedule(rs.jobs, r.schedule, 4));
    CHECK(makespan(rs.jobs, r.schedule) == r.makespan);
  }
}
