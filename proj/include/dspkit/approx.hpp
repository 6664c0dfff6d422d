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

#ifndef DSPKIT_APPROX_HPP_
#define DSPKIT_APPROX_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dspkit/core.hpp"

namespace dspkit {

// max(h_max, ceil(area / W)); 0 for an empty instance.
int64_t lower_bound(const Instance& instance);

struct Bounds {
  int64_t lower = 0;
  int64_t upper = 0;
};

struct SteinbergResult {
  SpSolution solution;
  int64_t height = 0;
  Bounds bounds;
  int64_t calls = 0;             // recursive procedure invocations
  bool used_exact_fallback = false;
};

// Non-sliced packing of height at most 2 * lower_bound(instance).
SteinbergResult steinberg_pack(const Instance& instance);

struct Shelf {
  int64_t y = 0;
  int64_t height = 0;
  std::vector<size_t> items;  // indices into the input list, left to right
};

struct NfdhResult {
  std::vector<std::optional<Placement>> position;  // aligned with the input list
  std::vector<size_t> placed;
  std::vector<size_t> leftover;
  std::vector<Shelf> shelves;
  int64_t used_height() const;
};

enum class NfdhOrder { kHeight, kWidth };

// Next Fit Decreasing Height into a box. Ties in height are broken by width
// descending, then id. kWidth orders by width first (then height, then id).
NfdhResult nfdh_pack(const std::vector<Item>& items, int64_t box_width, int64_t box_height,
                     NfdhOrder order = NfdhOrder::kHeight);

}  // namespace dspkit

#endif  // DSPKIT_APPROX_HPP_
