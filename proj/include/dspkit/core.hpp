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

#ifndef DSPKIT_CORE_HPP_
#define DSPKIT_CORE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dspkit {

struct Item {
  std::string id;
  int64_t width = 1;
  int64_t height = 1;

  int64_t area() const { return width * height; }
  bool operator==(const Item&) const = default;
};

// Items keep their input order; every solution type below stores one entry
// per item, aligned with that order.
class Instance {
 public:
  Instance() = default;
  Instance(int64_t strip_width, std::vector<Item> items);

  int64_t strip_width() const { return strip_width_; }
  const std::vector<Item>& items() const { return items_; }
  const Item& item(size_t i) const { return items_[i]; }
  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  std::optional<size_t> index_of(const std::string& id) const;
  size_t require_index(const std::string& id) const;

  int64_t total_area() const;
  int64_t max_height() const;
  int64_t max_width() const;

  bool operator==(const Instance& o) const {
    return strip_width_ == o.strip_width_ && items_ == o.items_;
  }

 private:
  int64_t strip_width_ = 1;
  std::vector<Item> items_;
  std::unordered_map<std::string, size_t> index_;
};

struct DspSolution {
  std::vector<int64_t> starts;
  bool operator==(const DspSolution&) const = default;
};

struct DemandProfile {
  std::vector<int64_t> column_load;
  int64_t peak() const;
};

// One bottom per unit column of each item: bottoms[i][c] is the y offset of
// the slice of item i in column starts[i] + c.
struct SlicedPacking {
  std::vector<int64_t> starts;
  std::vector<std::vector<int64_t>> bottoms;
  bool operator==(const SlicedPacking&) const = default;
};

struct Placement {
  int64_t x = 0;
  int64_t y = 0;
  bool operator==(const Placement&) const = default;
};

struct SpSolution {
  std::vector<Placement> placements;
  bool operator==(const SpSolution&) const = default;
};

enum class ViolationKind { kDomain, kExtent, kSliceShape, kOverlap, kBudget };

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<std::string> items;
  std::vector<int64_t> columns;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  size_t count(ViolationKind kind) const;
  std::string summary() const;
};

// Throws Infeasible naming the first item whose start is out of range.
void check_solution(const Instance& instance, const DspSolution& solution);

DemandProfile demand_profile(const Instance& instance, const DspSolution& solution);
int64_t peak_height(const Instance& instance, const DspSolution& solution);

ValidationReport validate_sliced(const Instance& instance, const SlicedPacking& packing,
                                 int64_t height_budget);
ValidationReport validate_sp(const Instance& instance, const SpSolution& solution,
                             std::optional<int64_t> height_budget = std::nullopt);

DspSolution drop_to_solution(const SlicedPacking& packing);

// Largest y + h over all slices; 0 for an empty packing.
int64_t packing_height(const Instance& instance, const SlicedPacking& packing);
int64_t sp_height(const Instance& instance, const SpSolution& solution);

// Per-column load of a sliced packing, computed from its slices directly.
std::vector<int64_t> slice_column_sums(const Instance& instance, const SlicedPacking& packing);

// Every item slice in column x bottoms at the same y.
SlicedPacking to_sliced(const Instance& instance, const SpSolution& solution);

// Stacks the slices in every column in item order, starting at y = 0.
SlicedPacking stack_columns(const Instance& instance, const DspSolution& solution);

// Items whose slices all share one bottom.
bool is_unsliced(const SlicedPacking& packing, size_t item);

}  // namespace dspkit

#endif  // DSPKIT_CORE_HPP_
