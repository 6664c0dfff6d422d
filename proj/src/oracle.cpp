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

#include "dspkit/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

#include "dspkit/errors.hpp"

namespace dspkit {

OracleLimits parse_limits(const std::string& spec, OracleLimits base) {
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidInput("bad limit '" + tok + "'");
    std::string key = tok.substr(0, eq);
    int64_t value = 0;
    try {
      value = std::stoll(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvalidInput("bad limit value in '" + tok + "'");
    }
    if (value < 1) throw InvalidInput("limit '" + key + "' must be positive");
    if (key == "max_items") {
      base.max_items = value;
    } else if (key == "max_width") {
      base.max_width = value;
    } else if (key == "max_states") {
      base.max_states = value;
    } else {
      throw InvalidInput("unknown limit '" + key + "'");
    }
  }
  return base;
}

OracleLimits limits_from_env() {
  const char* env = std::getenv("DSPKIT_LIMITS");
  return env ? parse_limits(env) : OracleLimits{};
}

namespace {

void check_limits(const Instance& instance, const OracleLimits& limits) {
  if (static_cast<int64_t>(instance.size()) > limits.max_items) {
    throw LimitExceeded("instance has " + std::to_string(instance.size()) + " items, limit is " +
                        std::to_string(limits.max_items));
  }
  if (instance.strip_width() > limits.max_width) {
    throw LimitExceeded("strip width " + std::to_string(instance.strip_width()) +
                        " exceeds limit " + std::to_string(limits.max_width));
  }
}

int64_t trivial_bound(const Instance& instance) {
  int64_t w = instance.strip_width();
  return std::max(instance.max_height(), (instance.total_area() + w - 1) / w);
}

// Depth-first search over start positions with a fixed peak budget.
class DspSearch {
 public:
  DspSearch(const Instance& inst, int64_t budget, const OracleLimits& limits, int64_t* nodes)
      : inst_(inst), budget_(budget), limits_(limits), nodes_(nodes),
        load_(inst.strip_width(), 0), starts_(inst.size(), -1) {}

  // Places every item not yet fixed; items in `order` are tried in sequence.
  bool complete(std::vector<size_t> order) {
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      const Item& x = inst_.item(a);
      const Item& y = inst_.item(b);
      if (x.area() != y.area()) return x.area() > y.area();
      return x.id < y.id;
    });
    order_ = std::move(order);
    twin_.assign(order_.size(), -1);
    for (size_t k = 1; k < order_.size(); ++k) {
      const Item& a = inst_.item(order_[k - 1]);
      const Item& b = inst_.item(order_[k]);
      if (a.width == b.width && a.height == b.height) twin_[k] = static_cast<int64_t>(k - 1);
    }
    suffix_area_.assign(order_.size() + 1, 0);
    suffix_min_h_.assign(order_.size() + 1, budget_ + 1);
    for (size_t k = order_.size(); k-- > 0;) {
      suffix_area_[k] = suffix_area_[k + 1] + inst_.item(order_[k]).area();
      suffix_min_h_[k] = std::min(suffix_min_h_[k + 1], inst_.item(order_[k]).height);
    }
    return dfs(0);
  }

  bool fits(size_t i, int64_t s) const {
    const Item& it = inst_.item(i);
    for (int64_t x = s; x < s + it.width; ++x) {
      if (load_[x] + it.height > budget_) return false;
    }
    return true;
  }

  void apply(size_t i, int64_t s, int64_t sign) {
    const Item& it = inst_.item(i);
    for (int64_t x = s; x < s + it.width; ++x) load_[x] += sign * it.height;
    starts_[i] = sign > 0 ? s : -1;
  }

  const std::vector<int64_t>& starts() const { return starts_; }

 private:
  bool dfs(size_t k) {
    if (k == order_.size()) return true;
    if (nodes_ && ++*nodes_ > limits_.max_states) {
      throw LimitExceeded("DSP search exhausted its state budget of " +
                          std::to_string(limits_.max_states));
    }
    // Capacity left in columns that can still take the shortest remaining item.
    int64_t usable = 0;
    for (int64_t l : load_) {
      int64_t f = budget_ - l;
      if (f >= suffix_min_h_[k]) usable += f;
    }
    if (usable < suffix_area_[k]) return false;
    size_t i = order_[k];
    const Item& it = inst_.item(i);
    int64_t lo = twin_[k] >= 0 ? starts_[order_[twin_[k]]] : 0;
    for (int64_t s = lo; s + it.width <= inst_.strip_width(); ++s) {
      if (!fits(i, s)) continue;
      apply(i, s, 1);
      if (dfs(k + 1)) return true;
      apply(i, s, -1);
    }
    return false;
  }

  const Instance& inst_;
  int64_t budget_;
  const OracleLimits& limits_;
  int64_t* nodes_;
  std::vector<int64_t> load_;
  std::vector<int64_t> starts_;
  std::vector<size_t> order_;
  std::vector<int64_t> twin_;
  std::vector<int64_t> suffix_area_;
  std::vector<int64_t> suffix_min_h_;
};

}  // namespace

std::optional<DspSolution> dsp_decide(const Instance& instance, int64_t budget,
                                      const OracleLimits& limits, int64_t* nodes) {
  check_limits(instance, limits);
  if (instance.empty()) return DspSolution{};
  if (budget < trivial_bound(instance)) return std::nullopt;
  int64_t local = 0;
  DspSearch search(instance, budget, limits, nodes ? nodes : &local);
  std::vector<size_t> all(instance.size());
  std::iota(all.begin(), all.end(), size_t{0});
  if (!search.complete(all)) return std::nullopt;
  return DspSolution{search.starts()};
}

DspOptimum solve_dsp_exact(const Instance& instance, const OracleLimits& limits) {
  check_limits(instance, limits);
  DspOptimum out;
  if (instance.empty()) return out;
  int64_t peak = trivial_bound(instance);
  while (!dsp_decide(instance, peak, limits, &out.nodes)) ++peak;
  out.peak = peak;

  // Fix items in input order at their smallest start that still completes.
  const size_t n = instance.size();
  std::vector<int64_t> fixed(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const Item& it = instance.item(i);
    bool placed = false;
    for (int64_t s = 0; s + it.width <= instance.strip_width() && !placed; ++s) {
      DspSearch search(instance, peak, limits, &out.nodes);
      bool ok = true;
      for (size_t j = 0; j < i && ok; ++j) {
        search.apply(j, fixed[j], 1);
      }
      if (!search.fits(i, s)) continue;
      search.apply(i, s, 1);
      std::vector<size_t> rest;
      for (size_t j = i + 1; j < n; ++j) rest.push_back(j);
      if (search.complete(rest)) {
        fixed[i] = s;
        placed = true;
      }
    }
    if (!placed) throw InternalError("lexicographic refinement lost feasibility");
  }
  out.solution.starts = fixed;
  return out;
}

namespace {

class SpSearch {
 public:
  SpSearch(const Instance& inst, int64_t height, const OracleLimits& limits, int64_t* nodes)
      : inst_(inst), w_(inst.strip_width()), h_(height), limits_(limits), nodes_(nodes),
        grid_(static_cast<size_t>(w_ * h_), 0) {
    std::map<std::pair<int64_t, int64_t>, size_t> type_of;
    for (size_t i = 0; i < inst.size(); ++i) {
      auto key = std::make_pair(inst.item(i).width, inst.item(i).height);
      auto it = type_of.find(key);
      if (it == type_of.end()) {
        it = type_of.emplace(key, types_.size()).first;
        types_.push_back({key.first, key.second, {}});
      }
      types_[it->second].members.push_back(i);
    }
    // Larger pieces first.
    std::stable_sort(types_.begin(), types_.end(), [](const Type& a, const Type& b) {
      return a.w * a.h > b.w * b.h;
    });
    remaining_.resize(types_.size());
    for (size_t t = 0; t < types_.size(); ++t) remaining_[t] = types_[t].members.size();
    min_w_ = w_;
    for (const auto& t : types_) min_w_ = std::min(min_w_, t.w);
  }

  bool run(SpSolution* out) {
    int64_t waste = w_ * h_ - inst_.total_area();
    if (waste < 0) return false;
    placed_.assign(types_.size(), {});
    if (!dfs(0, waste)) return false;
    out->placements.assign(inst_.size(), {});
    for (size_t t = 0; t < types_.size(); ++t) {
      for (size_t k = 0; k < placed_[t].size(); ++k) {
        out->placements[types_[t].members[k]] = placed_[t][k];
      }
    }
    return true;
  }

 private:
  struct Type {
    int64_t w, h;
    std::vector<size_t> members;
  };

  bool cell(int64_t x, int64_t y) const { return grid_[y * w_ + x] != 0; }

  bool free_rect(int64_t x, int64_t y, int64_t w, int64_t h) const {
    if (x + w > w_ || y + h > h_) return false;
    for (int64_t yy = y; yy < y + h; ++yy) {
      for (int64_t xx = x; xx < x + w; ++xx) {
        if (cell(xx, yy)) return false;
      }
    }
    return true;
  }

  void fill(int64_t x, int64_t y, int64_t w, int64_t h, char v) {
    for (int64_t yy = y; yy < y + h; ++yy) {
      for (int64_t xx = x; xx < x + w; ++xx) grid_[yy * w_ + xx] = v;
    }
  }

  bool dfs(int64_t pos, int64_t waste) {
    while (pos < w_ * h_ && grid_[pos]) ++pos;
    bool done = true;
    for (size_t r : remaining_) done = done && r == 0;
    if (done) return true;
    if (pos >= w_ * h_) return false;
    if (nodes_ && ++*nodes_ > limits_.max_states) {
      throw LimitExceeded("SP search exhausted its state budget of " +
                          std::to_string(limits_.max_states));
    }
    int64_t x = pos % w_, y = pos / w_;
    int64_t run = 0;
    while (x + run < w_ && !cell(x + run, y)) ++run;
    if (run >= min_w_) {
      for (size_t t = 0; t < types_.size(); ++t) {
        if (remaining_[t] == 0) continue;
        const Type& ty = types_[t];
        if (ty.w > run || !free_rect(x, y, ty.w, ty.h)) continue;
        fill(x, y, ty.w, ty.h, 1);
        --remaining_[t];
        placed_[t].push_back({x, y});
        if (dfs(pos + ty.w, waste)) return true;
        placed_[t].pop_back();
        ++remaining_[t];
        fill(x, y, ty.w, ty.h, 0);
      }
    }
    if (waste == 0) return false;
    grid_[pos] = 2;
    bool ok = dfs(pos + 1, waste - 1);
    grid_[pos] = 0;
    return ok;
  }

  const Instance& inst_;
  int64_t w_, h_;
  const OracleLimits& limits_;
  int64_t* nodes_;
  std::vector<char> grid_;
  std::vector<Type> types_;
  std::vector<size_t> remaining_;
  std::vector<std::vector<Placement>> placed_;
  int64_t min_w_ = 1;
};

}  // namespace

std::optional<SpSolution> sp_decide(const Instance& instance, int64_t height,
                                    const OracleLimits& limits, int64_t* nodes) {
  check_limits(instance, limits);
  if (instance.empty()) return SpSolution{};
  if (height < instance.max_height()) return std::nullopt;
  int64_t local = 0;
  SpSearch search(instance, height, limits, nodes ? nodes : &local);
  SpSolution out;
  if (!search.run(&out)) return std::nullopt;
  return out;
}

SpOptimum solve_sp_exact(const Instance& instance, std::optional<int64_t> height_bound,
                         const OracleLimits& limits) {
  check_limits(instance, limits);
  SpOptimum out;
  if (instance.empty()) return out;
  int64_t bound = 0;
  for (const auto& it : instance.items()) bound += it.height;
  if (height_bound) bound = std::min(bound, *height_bound);
  for (int64_t h = trivial_bound(instance); h <= bound; ++h) {
    if (auto s = sp_decide(instance, h, limits, &out.nodes)) {
      out.height = h;
      out.solution = *s;
      return out;
    }
  }
  throw Infeasible("no packing within height bound " + std::to_string(bound));
}

PtsOptimum solve_pts_exact(const std::vector<Job>& jobs, int64_t m, const OracleLimits& limits) {
  check_jobs(jobs);
  if (m < 1) throw InvalidInput("machine count must be positive");
  for (const auto& j : jobs) {
    if (j.q > m) throw InvalidInput("job '" + j.id + "' needs more than " + std::to_string(m) +
                                    " machines");
  }
  PtsOptimum out;
  if (jobs.empty()) return out;
  int64_t sum_p = 0, work = 0, max_p = 0;
  for (const auto& j : jobs) {
    sum_p += j.p;
    work += j.p * j.q;
    max_p = std::max(max_p, j.p);
  }
  auto items = jobs_to_items(jobs);
  int64_t lo = std::max(max_p, (work + m - 1) / m), hi = sum_p;
  if (hi > limits.max_width) {
    // The search only ever needs widths up to the answer; cap at the limit.
    hi = std::max(lo, limits.max_width);
  }
  auto feasible = [&](int64_t t) {
    return dsp_decide(Instance(t, items), m, limits).has_value();
  };
  if (!feasible(hi)) {
    throw LimitExceeded("makespan search exceeds the width limit " +
                        std::to_string(limits.max_width));
  }
  while (lo < hi) {
    int64_t mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  Instance inst(lo, items);
  auto best = solve_dsp_exact(inst, limits);
  if (best.peak > m) throw InternalError("PTS witness exceeds the machine count");
  out.makespan = lo;
  out.schedule = packing_to_schedule(inst, stack_columns(inst, best.solution), m).schedule;
  return out;
}

}  // namespace dspkit
