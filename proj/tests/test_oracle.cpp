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

#include <functional>

#include "dspkit/approx.hpp"
#include "dspkit/errors.hpp"
#include "dspkit/oracle.hpp"
#include "support.hpp"

using namespace dspkit;
using namespace dspkit::testing;

namespace {

bool naive_sp_fits(const Instance& inst, int64_t H) {
  struct R { int64_t x, y, w, h; };
  std::vector<R> placed;
  std::function<bool(size_t)> go = [&](size_t i) {
    if (i == inst.size()) return true;
    const Item& it = inst.item(i);
    for (int64_t x = 0; x + it.width <= inst.strip_width(); ++x)
      for (int64_t y = 0; y + it.height <= H; ++y) {
        bool ok = true;
        for (const R& r : placed)
          if (x < r.x + r.w && r.x < x + it.width && y < r.y + r.h && r.y < y + it.height) ok = false;
        if (!ok) continue;
        placed.push_back({x, y, it.width, it.height});
        if (go(i + 1)) return true;
        placed.pop_back();
      }
    return false;
  };
  return go(0);
}

int64_t naive_sp(const Instance& inst) {
  int64_t H = lower_bound(inst);
  while (!naive_sp_fits(inst, H)) ++H;
  return H;
}

// Explicit start times and machine subsets for every job.
bool naive_pts_fits(const std::vector<Job>& jobs, int64_t m, int64_t T) {
  std::vector<int64_t> start(jobs.size());
  std::vector<uint32_t> mask(jobs.size());
  std::function<bool(size_t)> go = [&](size_t j) {
    if (j == jobs.size()) return true;
    for (int64_t s = 0; s + jobs[j].p <= T; ++s)
      for (uint32_t ms = 0; ms < (1u << m); ++ms) {
        if (__builtin_popcount(ms) != jobs[j].q) continue;
        bool ok = true;
        for (size_t k = 0; k < j && ok; ++k)
          if (s < start[k] + jobs[k].p && start[k] < s + jobs[j].p && (mask[k] & ms)) ok = false;
        if (!ok) continue;
        start[j] = s;
        mask[j] = ms;
        if (go(j + 1)) return true;
      }
    return false;
  };
  return go(0);
}

int64_t naive_pts(const std::vector<Job>& jobs, int64_t m) {
  int64_t T = 1;
  while (!naive_pts_fits(jobs, m, T)) ++T;
  return T;
}

}  // namespace

TEST_CASE("gap instance optima") {
  Instance gap = gap_instance();
  DspOptimum d = solve_dsp_exact(gap);
  CHECK(d.peak == 4);
  CHECK(d.solution.starts == std::vector<int64_t>{0, 3, 0, 3, 6, 6, 7, 8});
  CHECK(peak_height(gap, d.solution) == 4);
  SpOptimum s = solve_sp_exact(gap);
  CHECK(s.height == 5);
  CHECK(validate_sp(gap, s.solution, 5).ok());
  CHECK_FALSE(sp_decide(gap, 4).has_value());
}

TEST_CASE("single item optima") {
  Instance one(6, {{"a", 4, 3}});
  CHECK(solve_dsp_exact(one).peak == 3);
  CHECK(solve_sp_exact(one).height == 3);
  CHECK(solve_pts_exact({{"j", 5, 3}}, 3).makespan == 5);
  CHECK(solve_dsp_exact(Instance(4, {})).peak == 0);
}

TEST_CASE("dsp oracle matches exhaustive enumeration") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Instance inst = gen_random(seed, 5, 2 + seed % 7, 4);
    DspOptimum d = solve_dsp_exact(inst);
    CHECK(d.peak == brute_dsp(inst));
    CHECK(peak_height(inst, d.solution) == d.peak);
    CHECK(d.peak >= lower_bound(inst));
  }
}

TEST_CASE("dsp witness is lexicographically smallest") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    Instance inst = gen_random(seed + 100, 4, 2 + seed % 5, 3);
    DspOptimum d = solve_dsp_exact(inst);
    std::vector<int64_t> s(inst.size(), 0), first;
    while (true) {
      if (naive_peak(inst, s) == d.peak) {
        first = s;
        break;
      }
      size_t i = inst.size();
      while (i-- > 0) {
        if (s[i] + inst.item(i).width < inst.strip_width()) {
          ++s[i];
          break;
        }
        s[i] = 0;
      }
      if (i == static_cast<size_t>(-1)) break;
    }
    CHECK(d.solution.starts == first);
  }
}

TEST_CASE("sp oracle matches naive enumeration") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    Instance inst = gen_random(seed, 4, 2 + seed % 5, 3);
    SpOptimum s = solve_sp_exact(inst);
    CHECK(s.height == naive_sp(inst));
    CHECK(validate_sp(inst, s.solution, s.height).ok());
    int64_t dsp = solve_dsp_exact(inst).peak;
    CHECK(s.height >= dsp);
    CHECK(s.height <= 2 * dsp);
  }
}

TEST_CASE("pts oracle matches exhaustive schedules") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    int64_t m = 1 + seed % 3;
    RandomSchedule rs = gen_random_schedule(seed, 5, m, 2);
    PtsOptimum o = solve_pts_exact(rs.jobs, m);
    CHECK(o.makespan == naive_pts(rs.jobs, m));
    CHECK_NOTHROW(validate_schedule(rs.jobs, o.schedule, m));
    CHECK(makespan(rs.jobs, o.schedule) == o.makespan);
  }
}

TEST_CASE("pts on the transposed gap instance") {
  Instance gap = gap_instance();
  std::vector<Job> jobs = items_to_jobs(gap.items());
  PtsOptimum o = solve_pts_exact(jobs, 4);
  CHECK(o.makespan == 9);
  CHECK_NOTHROW(validate_schedule(jobs, o.schedule, 4));
}

TEST_CASE("pts and dsp duality") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RandomSchedule rs = gen_random_schedule(seed + 50, 5, 3, 3);
    PtsOptimum o = solve_pts_exact(rs.jobs, 3);
    Instance at_T(o.makespan, jobs_to_items(rs.jobs));
    CHECK(solve_dsp_exact(at_T).peak <= 3);
    if (o.makespan > 1) {
      bool fits = true;
      for (const Job& j : rs.jobs) fits = fits && j.p <= o.makespan - 1;
      if (fits) CHECK(solve_dsp_exact(Instance(o.makespan - 1, jobs_to_items(rs.jobs))).peak > 3);
    }
  }
}

TEST_CASE("oracle limits") {
  OracleLimits tiny;
  tiny.max_states = 10;
  CHECK_THROWS_AS(solve_dsp_exact(gen_random(3, 9, 20, 5), tiny), LimitExceeded);
  OracleLimits few;
  few.max_items = 2;
  CHECK_THROWS_AS(solve_dsp_exact(gen_random(3, 3, 5, 5), few), LimitExceeded);
  OracleLimits p = parse_limits("max_items=10,max_states=1000");
  CHECK(p.max_items == 10);
  CHECK(p.max_states == 1000);
  CHECK(p.max_width == OracleLimits{}.max_width);
  CHECK_THROWS_AS(parse_limits("max_items=0"), InvalidInput);
  CHECK_THROWS_AS(solve_sp_exact(gap_instance(), 4), Infeasible);
}
