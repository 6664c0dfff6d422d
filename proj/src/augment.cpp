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

#include "dspkit/augment.hpp"

#include <algorithm>
#include <optional>

#include "dspkit/errors.hpp"

namespace dspkit {

int64_t ceil_log2(int64_t n) {
  int64_t k = 0;
  while ((int64_t{1} << k) < n) ++k;
  return k;
}

PtsInnerResult steinberg_schedule(const std::vector<Job>& jobs, int64_t machines) {
  check_jobs(jobs);
  PtsInnerResult out;
  out.schedule.sigma.assign(jobs.size(), 0);
  out.schedule.rho.assign(jobs.size(), {});
  if (jobs.empty()) return out;
  std::vector<Item> items;
  items.reserve(jobs.size());
  for (const auto& j : jobs) items.push_back({j.id, j.q, j.p});
  Instance transposed(machines, std::move(items));
  auto packed = steinberg_pack(transposed);
  for (size_t i = 0; i < jobs.size(); ++i) {
    const auto& pl = packed.solution.placements[i];
    out.schedule.sigma[i] = pl.y;
    for (int64_t k = 0; k < jobs[i].q; ++k) out.schedule.rho[i].push_back(pl.x + k);
  }
  out.makespan = packed.height;
  return out;
}

PtsInner exact_pts_inner(const OracleLimits& limits) {
  return {"exact", Rational(1), [limits](const std::vector<Job>& jobs, int64_t m) {
            auto opt = solve_pts_exact(jobs, m, limits);
            return PtsInnerResult{opt.makespan, opt.schedule};
          }};
}

PtsInner steinberg_pts_inner() { return {"steinberg", Rational(2), steinberg_schedule}; }

DspInner exact_dsp_inner(const OracleLimits& limits) {
  return {"exact", Rational(1), [limits](const Instance& inst) {
            auto opt = solve_dsp_exact(inst, limits);
            return DspInnerResult{opt.peak, opt.solution};
          }};
}

DspInner steinberg_dsp_inner() {
  return {"steinberg", Rational(2), [](const Instance& inst) {
            auto packed = steinberg_pack(inst);
            DspInnerResult out;
            for (const auto& pl : packed.solution.placements) out.solution.starts.push_back(pl.x);
            out.peak = peak_height(inst, out.solution);
            return out;
          }};
}

namespace {

void check_rho(const Rational& rho) {
  if (rho < 1) throw InvalidInput("inner solver ratio must be at least 1");
}

std::vector<Job> as_jobs(const Instance& instance) { return items_to_jobs(instance.items()); }

}  // namespace

WidthAugmentation optimal_height_with_width_augmentation(const Instance& instance,
                                                         const PtsInner& inner) {
  check_rho(inner.rho);
  WidthAugmentation out;
  const int64_t w = instance.strip_width();
  out.width_cap = floor_to_int(inner.rho * w);
  if (instance.empty()) {
    out.instance = instance;
    out.packing = {};
    out.width_used = 0;
    out.probe_limit = 0;
    return out;
  }
  auto st = steinberg_pack(instance);
  int64_t lo = lower_bound(instance), hi = std::max(lo, st.height);
  out.bounds = {lo, hi};
  out.probe_limit = ceil_log2(hi - lo + 1);

  // The Steinberg packing already certifies the upper end of the range.
  std::optional<PackingFromSchedule> best;
  int64_t best_guess = -1;
  auto jobs = as_jobs(instance);
  while (lo < hi) {
    int64_t mid = lo + (hi - lo) / 2;
    auto res = inner.solve(jobs, mid);
    bool ok = Rational(res.makespan) <= inner.rho * w;
    out.probes.push_back({mid, res.makespan, ok});
    if (ok) {
      validate_schedule(jobs, res.schedule, mid);
      best = schedule_to_packing(jobs, res.schedule, mid);
      best_guess = mid;
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  out.height = lo;
  if (best && best_guess == lo) {
    out.width_used = best->instance.strip_width();
    out.instance = Instance(out.width_used, instance.items());
    out.packing = best->packing;
  } else {
    out.width_used = w;
    out.instance = instance;
    out.packing = to_sliced(instance, st.solution);
  }
  if (static_cast<int64_t>(out.probes.size()) > out.probe_limit) {
    throw InternalError("probe count exceeds the binary search bound");
  }
  auto report = validate_sliced(out.instance, out.packing, out.height);
  if (!report.ok()) throw InternalError("width augmentation witness invalid: " + report.summary());
  if (out.width_used > out.width_cap) throw InternalError("witness exceeds the augmented width");
  return out;
}

MachineAugmentation optimal_makespan_with_machine_augmentation(const std::vector<Job>& jobs,
                                                               int64_t m, const DspInner& inner) {
  check_rho(inner.rho);
  check_jobs(jobs);
  if (m < 1) throw InvalidInput("machine count must be positive");
  for (const auto& j : jobs) {
    if (j.q > m) {
      throw InvalidInput("job '" + j.id + "' needs more than " + std::to_string(m) + " machines");
    }
  }
  MachineAugmentation out;
  out.machine_cap = floor_to_int(inner.rho * m);
  if (jobs.empty()) return out;
  int64_t max_p = 0, work = 0;
  for (const auto& j : jobs) {
    max_p = std::max(max_p, j.p);
    work += j.p * j.q;
  }
  auto st = steinberg_schedule(jobs, m);
  int64_t lo = std::max(max_p, ceil_div(work, m)), hi = std::max(lo, st.makespan);
  out.bounds = {lo, hi};
  out.probe_limit = ceil_log2(hi - lo + 1);

  auto items = jobs_to_items(jobs);
  std::optional<ScheduleFromPacking> best;
  int64_t best_guess = -1, best_peak = 0;
  while (lo < hi) {
    int64_t mid = lo + (hi - lo) / 2;
    Instance inst(mid, items);
    auto res = inner.solve(inst);
    bool ok = Rational(res.peak) <= inner.rho * m;
    out.probes.push_back({mid, res.peak, ok});
    if (ok) {
      int64_t peak = peak_height(inst, res.solution);
      best = packing_to_schedule(inst, stack_columns(inst, res.solution), std::max<int64_t>(peak, 1));
      best_guess = mid;
      best_peak = peak;
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  out.makespan = lo;
  if (best && best_guess == lo) {
    out.schedule = best->schedule;
    out.machines_used = best_peak;
  } else {
    out.schedule = st.schedule;
    out.machines_used = m;
  }
  if (static_cast<int64_t>(out.probes.size()) > out.probe_limit) {
    throw InternalError("probe count exceeds the binary search bound");
  }
  validate_schedule(jobs, out.schedule, out.machines_used);
  if (makespan(jobs, out.schedule) > out.makespan) {
    throw InternalError("machine augmentation witness exceeds the guessed makespan");
  }
  if (out.machines_used > out.machine_cap) {
    throw InternalError("witness exceeds the augmented machine count");
  }
  return out;
}

}  // namespace dspkit
