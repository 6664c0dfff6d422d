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

#include "dspkit/transform.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "dspkit/errors.hpp"

namespace dspkit {

void check_jobs(const std::vector<Job>& jobs) {
  std::unordered_set<std::string> ids;
  for (const auto& j : jobs) {
    if (j.p < 1 || j.q < 1) throw InvalidInput("job '" + j.id + "' needs p >= 1 and q >= 1");
    if (!ids.insert(j.id).second) throw InvalidInput("duplicate job id '" + j.id + "'");
  }
}

int64_t makespan(const std::vector<Job>& jobs, const PtsSchedule& schedule) {
  int64_t t = 0;
  for (size_t i = 0; i < jobs.size(); ++i) t = std::max(t, schedule.sigma[i] + jobs[i].p);
  return t;
}

void validate_schedule(const std::vector<Job>& jobs, const PtsSchedule& schedule, int64_t m) {
  check_jobs(jobs);
  if (schedule.sigma.size() != jobs.size() || schedule.rho.size() != jobs.size()) {
    throw Infeasible("schedule does not cover the job list");
  }
  for (size_t i = 0; i < jobs.size(); ++i) {
    const auto& r = schedule.rho[i];
    if (schedule.sigma[i] < 0) throw Infeasible("job '" + jobs[i].id + "' starts before 0");
    if (static_cast<int64_t>(r.size()) != jobs[i].q) {
      throw Infeasible("job '" + jobs[i].id + "' holds " + std::to_string(r.size()) +
                       " machines, needs " + std::to_string(jobs[i].q));
    }
    std::set<int64_t> seen;
    for (int64_t k : r) {
      if (k < 0 || k >= m) {
        throw Infeasible("job '" + jobs[i].id + "' uses machine " + std::to_string(k) +
                         " outside [0," + std::to_string(m) + ")");
      }
      if (!seen.insert(k).second) {
        throw Infeasible("job '" + jobs[i].id + "' lists machine " + std::to_string(k) + " twice");
      }
    }
  }
  // Sweep over time; ends are processed before starts at equal times.
  std::vector<size_t> order(jobs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return schedule.sigma[a] < schedule.sigma[b]; });
  std::vector<int64_t> owner(static_cast<size_t>(m), -1);
  std::multimap<int64_t, size_t> ends;
  for (size_t i : order) {
    int64_t t = schedule.sigma[i];
    while (!ends.empty() && ends.begin()->first <= t) {
      size_t e = ends.begin()->second;
      for (int64_t k : schedule.rho[e]) {
        if (owner[k] == static_cast<int64_t>(e)) owner[k] = -1;
      }
      ends.erase(ends.begin());
    }
    for (int64_t k : schedule.rho[i]) {
      if (owner[k] >= 0) {
        throw Infeasible("jobs '" + jobs[owner[k]].id + "' and '" + jobs[i].id +
                         "' share machine " + std::to_string(k) + " at time " + std::to_string(t));
      }
      owner[k] = static_cast<int64_t>(i);
    }
    ends.emplace(t + jobs[i].p, i);
  }
}

std::vector<Item> jobs_to_items(const std::vector<Job>& jobs) {
  std::vector<Item> items;
  items.reserve(jobs.size());
  for (const auto& j : jobs) items.push_back({j.id, j.p, j.q});
  return items;
}

std::vector<Job> items_to_jobs(const std::vector<Item>& items) {
  std::vector<Job> jobs;
  jobs.reserve(items.size());
  for (const auto& it : items) jobs.push_back({it.id, it.width, it.height});
  return jobs;
}

namespace {

std::vector<size_t> start_order(const std::vector<int64_t>& starts) {
  std::vector<size_t> order(starts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return starts[a] < starts[b]; });
  return order;
}

}  // namespace

PackingFromSchedule schedule_to_packing(const std::vector<Job>& jobs, const PtsSchedule& schedule,
                                        int64_t m) {
  validate_schedule(jobs, schedule, m);
  const size_t n = jobs.size();
  const int64_t t_end = makespan(jobs, schedule);
  PackingFromSchedule out{Instance(std::max<int64_t>(t_end, 1), jobs_to_items(jobs)), {}, {}};
  SweepCounters& cnt = out.counters;

  // Per job, the bottoms it takes from each event time on.
  std::vector<std::vector<std::pair<int64_t, int64_t>>> segments(n);
  std::vector<int64_t> y(n, 0);
  std::vector<size_t> active;
  auto order = start_order(schedule.sigma);

  for (size_t k = 0; k < n;) {
    const int64_t t = schedule.sigma[order[k]];
    std::vector<size_t> fresh;
    while (k < n && schedule.sigma[order[k]] == t) fresh.push_back(order[k++]);
    ++cnt.events;
    std::erase_if(active, [&](size_t j) { return schedule.sigma[j] + jobs[j].p <= t; });

    // A fresh job keeps its machine rows when they form one block that is
    // free in the current layout.
    std::vector<std::pair<int64_t, int64_t>> taken;
    for (size_t j : active) taken.push_back({y[j], y[j] + jobs[j].q});
    bool keep = true;
    std::vector<int64_t> want(fresh.size());
    for (size_t f = 0; f < fresh.size() && keep; ++f) {
      const auto& r = schedule.rho[fresh[f]];
      auto [lo, hi] = std::minmax_element(r.begin(), r.end());
      if (*hi - *lo + 1 != jobs[fresh[f]].q) {
        keep = false;
        break;
      }
      want[f] = *lo;
      for (auto [a, b] : taken) {
        if (*lo < b && a < *lo + jobs[fresh[f]].q) keep = false;
      }
      taken.push_back({*lo, *lo + jobs[fresh[f]].q});
    }
    if (keep) {
      for (size_t f = 0; f < fresh.size(); ++f) {
        y[fresh[f]] = want[f];
        segments[fresh[f]].push_back({t, want[f]});
        active.push_back(fresh[f]);
      }
      continue;
    }
    for (size_t j : fresh) active.push_back(j);
    int64_t cmp = 0;
    std::stable_sort(active.begin(), active.end(), [&](size_t a, size_t b) {
      ++cmp;
      if (jobs[a].q != jobs[b].q) return jobs[a].q < jobs[b].q;
      return jobs[a].id < jobs[b].id;
    });
    cnt.comparisons += cmp;
    cnt.max_event_comparisons = std::max(cnt.max_event_comparisons, cmp);
    ++cnt.restack_events;
    int64_t level = 0;
    for (size_t j : active) {
      y[j] = level;
      level += jobs[j].q;
      segments[j].push_back({t, y[j]});
    }
    if (level > m) throw InternalError("re-stack exceeded the machine count");
  }

  SlicedPacking& p = out.packing;
  p.starts = schedule.sigma;
  p.bottoms.resize(n);
  for (size_t j = 0; j < n; ++j) {
    auto& b = p.bottoms[j];
    b.resize(jobs[j].p);
    size_t s = 0;
    for (int64_t c = 0; c < jobs[j].p; ++c) {
      int64_t t = schedule.sigma[j] + c;
      while (s + 1 < segments[j].size() && segments[j][s + 1].first <= t) ++s;
      b[c] = segments[j][s].second;
    }
  }
  return out;
}

ScheduleFromPacking packing_to_schedule(const Instance& instance, const SlicedPacking& packing,
                                        int64_t m) {
  DspSolution sol = drop_to_solution(packing);
  DemandProfile prof = demand_profile(instance, sol);
  for (size_t x = 0; x < prof.column_load.size(); ++x) {
    if (prof.column_load[x] > m) {
      throw Infeasible("column " + std::to_string(x) + " carries load " +
                       std::to_string(prof.column_load[x]) + " > " + std::to_string(m) +
                       " machines");
    }
  }
  const size_t n = instance.size();
  auto jobs = items_to_jobs(instance.items());
  ScheduleFromPacking out;
  out.schedule.sigma = sol.starts;
  out.schedule.rho.assign(n, {});
  SweepCounters& cnt = out.counters;

  std::set<int64_t> free;
  for (int64_t k = 0; k < m; ++k) free.insert(k);
  std::vector<size_t> active;
  auto order = start_order(sol.starts);
  for (size_t k = 0; k < n;) {
    const int64_t t = sol.starts[order[k]];
    std::vector<size_t> fresh;
    while (k < n && sol.starts[order[k]] == t) fresh.push_back(order[k++]);
    ++cnt.events;
    int64_t scans = static_cast<int64_t>(active.size());
    std::erase_if(active, [&](size_t j) {
      if (sol.starts[j] + jobs[j].p > t) return false;
      for (int64_t mk : out.schedule.rho[j]) free.insert(mk);
      return true;
    });
    cnt.machine_scans += scans;
    cnt.max_event_scans = std::max(cnt.max_event_scans, scans);
    std::stable_sort(fresh.begin(), fresh.end(), [&](size_t a, size_t b) {
      if (jobs[a].q != jobs[b].q) return jobs[a].q < jobs[b].q;
      return jobs[a].id < jobs[b].id;
    });
    for (size_t j : fresh) {
      if (static_cast<int64_t>(free.size()) < jobs[j].q) {
        throw InternalError("no free machines for job '" + jobs[j].id + "' at time " +
                            std::to_string(t));
      }
      auto& r = out.schedule.rho[j];
      for (int64_t c = 0; c < jobs[j].q; ++c) {
        r.push_back(*free.begin());
        free.erase(free.begin());
      }
      active.push_back(j);
    }
  }
  return out;
}

}  // namespace dspkit
