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

#include "dspkit/core.hpp"

#include <algorithm>
#include <sstream>

#include "dspkit/errors.hpp"

namespace dspkit {

Instance::Instance(int64_t strip_width, std::vector<Item> items)
    : strip_width_(strip_width), items_(std::move(items)) {
  if (strip_width_ < 1) throw InvalidInput("strip width must be positive");
  for (size_t i = 0; i < items_.size(); ++i) {
    const Item& it = items_[i];
    if (it.width < 1 || it.height < 1) {
      throw InvalidInput("item '" + it.id + "' must have positive width and height");
    }
    if (it.width > strip_width_) {
      throw InvalidInput("item '" + it.id + "' is wider than the strip");
    }
    if (!index_.emplace(it.id, i).second) throw InvalidInput("duplicate item id '" + it.id + "'");
  }
}

std::optional<size_t> Instance::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

size_t Instance::require_index(const std::string& id) const {
  auto i = index_of(id);
  if (!i) throw InvalidInput("unknown item id '" + id + "'");
  return *i;
}

int64_t Instance::total_area() const {
  int64_t a = 0;
  for (const auto& it : items_) a += it.area();
  return a;
}

int64_t Instance::max_height() const {
  int64_t m = 0;
  for (const auto& it : items_) m = std::max(m, it.height);
  return m;
}

int64_t Instance::max_width() const {
  int64_t m = 0;
  for (const auto& it : items_) m = std::max(m, it.width);
  return m;
}

int64_t DemandProfile::peak() const {
  int64_t p = 0;
  for (int64_t v : column_load) p = std::max(p, v);
  return p;
}

size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<size_t>(std::count_if(violations.begin(), violations.end(),
                                           [&](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.message << "\n";
  return os.str();
}

void check_solution(const Instance& instance, const DspSolution& solution) {
  if (solution.starts.size() != instance.size()) {
    throw Infeasible("solution has " + std::to_string(solution.starts.size()) + " starts for " +
                     std::to_string(instance.size()) + " items");
  }
  for (size_t i = 0; i < instance.size(); ++i) {
    int64_t s = solution.starts[i];
    if (s < 0 || s + instance.item(i).width > instance.strip_width()) {
      throw Infeasible("start " + std::to_string(s) + " of item '" + instance.item(i).id +
                       "' leaves the strip");
    }
  }
}

DemandProfile demand_profile(const Instance& instance, const DspSolution& solution) {
  check_solution(instance, solution);
  const int64_t w = instance.strip_width();
  std::vector<int64_t> diff(static_cast<size_t>(w) + 1, 0);
  for (size_t i = 0; i < instance.size(); ++i) {
    diff[solution.starts[i]] += instance.item(i).height;
    diff[solution.starts[i] + instance.item(i).width] -= instance.item(i).height;
  }
  DemandProfile p;
  p.column_load.resize(w);
  int64_t run = 0;
  for (int64_t x = 0; x < w; ++x) {
    run += diff[x];
    p.column_load[x] = run;
  }
  return p;
}

int64_t peak_height(const Instance& instance, const DspSolution& solution) {
  if (instance.empty()) {
    check_solution(instance, solution);
    return 0;
  }
  return demand_profile(instance, solution).peak();
}

namespace {

struct Slice {
  int64_t y;
  int64_t h;
  size_t item;
};

}  // namespace

ValidationReport validate_sliced(const Instance& instance, const SlicedPacking& packing,
                                 int64_t height_budget) {
  ValidationReport report;
  const size_t n = instance.size();
  const int64_t w = instance.strip_width();
  if (packing.starts.size() != n || packing.bottoms.size() != n) {
    report.violations.push_back({ViolationKind::kDomain,
                                 "packing covers " + std::to_string(packing.starts.size()) +
                                     " items, instance has " + std::to_string(n),
                                 {},
                                 {}});
    return report;
  }
  std::vector<std::vector<Slice>> columns(w);
  std::vector<int64_t> over_budget;
  std::vector<std::string> over_items;
  for (size_t i = 0; i < n; ++i) {
    const Item& it = instance.item(i);
    int64_t s = packing.starts[i];
    if (static_cast<int64_t>(packing.bottoms[i].size()) != it.width) {
      report.violations.push_back({ViolationKind::kSliceShape,
                                   "item '" + it.id + "' has " +
                                       std::to_string(packing.bottoms[i].size()) +
                                       " slices, width is " + std::to_string(it.width),
                                   {it.id},
                                   {}});
      continue;
    }
    if (s < 0 || s + it.width > w) {
      report.violations.push_back({ViolationKind::kExtent,
                                   "item '" + it.id + "' spans [" + std::to_string(s) + "," +
                                       std::to_string(s + it.width) + ") outside the strip",
                                   {it.id},
                                   {}});
      continue;
    }
    bool item_over = false;
    for (int64_t c = 0; c < it.width; ++c) {
      int64_t y = packing.bottoms[i][c];
      int64_t x = s + c;
      if (y < 0) {
        report.violations.push_back({ViolationKind::kExtent,
                                     "item '" + it.id + "' has a negative bottom in column " +
                                         std::to_string(x),
                                     {it.id},
                                     {x}});
      }
      if (y + it.height > height_budget) {
        over_budget.push_back(x);
        item_over = true;
      }
      columns[x].push_back({y, it.height, i});
    }
    if (item_over) over_items.push_back(it.id);
  }
  // One overlap violation per unordered item pair, listing its columns.
  std::vector<std::pair<std::pair<size_t, size_t>, int64_t>> clashes;
  for (int64_t x = 0; x < w; ++x) {
    auto& col = columns[x];
    std::sort(col.begin(), col.end(), [](const Slice& a, const Slice& b) {
      return a.y != b.y ? a.y < b.y : a.item < b.item;
    });
    for (size_t a = 0; a < col.size(); ++a) {
      for (size_t b = a + 1; b < col.size() && col[b].y < col[a].y + col[a].h; ++b) {
        size_t lo = std::min(col[a].item, col[b].item), hi = std::max(col[a].item, col[b].item);
        clashes.push_back({{lo, hi}, x});
      }
    }
  }
  std::sort(clashes.begin(), clashes.end());
  for (size_t k = 0; k < clashes.size();) {
    size_t e = k;
    Violation v{ViolationKind::kOverlap, "", {}, {}};
    auto [a, b] = clashes[k].first;
    while (e < clashes.size() && clashes[e].first == clashes[k].first) {
      v.columns.push_back(clashes[e].second);
      ++e;
    }
    v.items = {instance.item(a).id, instance.item(b).id};
    v.message = "items '" + v.items[0] + "' and '" + v.items[1] + "' overlap in " +
                std::to_string(v.columns.size()) + " column(s) starting at " +
                std::to_string(v.columns.front());
    report.violations.push_back(std::move(v));
    k = e;
  }
  if (!over_budget.empty()) {
    std::sort(over_budget.begin(), over_budget.end());
    over_budget.erase(std::unique(over_budget.begin(), over_budget.end()), over_budget.end());
    std::ostringstream os;
    os << "slices exceed height budget " << height_budget << " in columns";
    for (int64_t x : over_budget) os << " " << x;
    report.violations.push_back({ViolationKind::kBudget, os.str(), over_items, over_budget});
  }
  return report;
}

ValidationReport validate_sp(const Instance& instance, const SpSolution& solution,
                             std::optional<int64_t> height_budget) {
  ValidationReport report;
  if (solution.placements.size() != instance.size()) {
    report.violations.push_back({ViolationKind::kDomain, "placement count mismatch", {}, {}});
    return report;
  }
  int64_t budget = height_budget ? *height_budget : sp_height(instance, solution);
  for (size_t i = 0; i < instance.size(); ++i) {
    if (solution.placements[i].y < 0) {
      report.violations.push_back({ViolationKind::kExtent,
                                   "item '" + instance.item(i).id + "' has negative y",
                                   {instance.item(i).id},
                                   {}});
    }
  }
  auto r = validate_sliced(instance, to_sliced(instance, solution), budget);
  for (auto& v : r.violations) report.violations.push_back(std::move(v));
  return report;
}

DspSolution drop_to_solution(const SlicedPacking& packing) { return DspSolution{packing.starts}; }

int64_t packing_height(const Instance& instance, const SlicedPacking& packing) {
  int64_t top = 0;
  for (size_t i = 0; i < packing.bottoms.size(); ++i) {
    for (int64_t y : packing.bottoms[i]) top = std::max(top, y + instance.item(i).height);
  }
  return top;
}

int64_t sp_height(const Instance& instance, const SpSolution& solution) {
  int64_t top = 0;
  for (size_t i = 0; i < solution.placements.size(); ++i) {
    top = std::max(top, solution.placements[i].y + instance.item(i).height);
  }
  return top;
}

std::vector<int64_t> slice_column_sums(const Instance& instance, const SlicedPacking& packing) {
  std::vector<int64_t> sums(instance.strip_width(), 0);
  for (size_t i = 0; i < packing.starts.size(); ++i) {
    for (size_t c = 0; c < packing.bottoms[i].size(); ++c) {
      sums[packing.starts[i] + static_cast<int64_t>(c)] += instance.item(i).height;
    }
  }
  return sums;
}

SlicedPacking to_sliced(const Instance& instance, const SpSolution& solution) {
  SlicedPacking p;
  for (size_t i = 0; i < solution.placements.size() && i < instance.size(); ++i) {
    p.starts.push_back(solution.placements[i].x);
    p.bottoms.emplace_back(static_cast<size_t>(instance.item(i).width), solution.placements[i].y);
  }
  return p;
}

SlicedPacking stack_columns(const Instance& instance, const DspSolution& solution) {
  check_solution(instance, solution);
  std::vector<int64_t> level(instance.strip_width(), 0);
  SlicedPacking p;
  p.starts = solution.starts;
  p.bottoms.resize(instance.size());
  for (size_t i = 0; i < instance.size(); ++i) {
    const Item& it = instance.item(i);
    auto& b = p.bottoms[i];
    b.resize(it.width);
    for (int64_t c = 0; c < it.width; ++c) {
      int64_t x = solution.starts[i] + c;
      b[c] = level[x];
      level[x] += it.height;
    }
  }
  return p;
}

bool is_unsliced(const SlicedPacking& packing, size_t item) {
  const auto& b = packing.bottoms[item];
  return std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) == b.end();
}

}  // namespace dspkit
