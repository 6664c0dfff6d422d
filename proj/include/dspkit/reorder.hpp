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

#ifndef DSPKIT_REORDER_HPP_
#define DSPKIT_REORDER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dspkit/core.hpp"
#include "dspkit/rational.hpp"
#include "dspkit/structure.hpp"

namespace dspkit {

enum class BoxBucket { kQuarter, kHalf, kTall };  // h <= 1/2 OPT, (1/2, 3/4], > 3/4

BoxBucket bucket_of(int64_t box_height, int64_t opt);
const char* bucket_name(BoxBucket b);

// A tall item inside a box. Coordinates are box-local; only immovable items
// may extend past the box borders. bottoms[c] is the slice bottom in column x + c.
struct TallPiece {
  size_t item = 0;
  int64_t x = 0;
  int64_t width = 1;
  int64_t height = 1;
  std::vector<int64_t> bottoms;
  bool immovable = false;
};

struct VerticalSlice {
  size_t item = 0;
  int64_t height = 0;
};

struct TvBox {
  int64_t x0 = 0;  // strip column of box column 0
  int64_t width = 0;
  int64_t height = 0;
  int64_t opt = 1;  // OPT in the box's height units
  Rational eps{1, 4};
  std::vector<TallPiece> talls;
  std::vector<std::vector<VerticalSlice>> columns;  // vertical content per column

  int64_t vertical_load(int64_t c) const;
  int64_t vertical_area() const;
};

// Talls stacked per column in the order of their rounded bottoms; verticals
// recorded per column.
TvBox make_tv_box(const RoundedPacking& rounded, const Box& box,
                  const Classification& classification, const EpsParams& params);

enum class SubBoxKind { kTall, kVertical };

struct SubBox {
  SubBoxKind kind = SubBoxKind::kTall;
  int64_t x = 0;
  int64_t y = 0;
  int64_t width = 0;
  int64_t height = 0;
  std::vector<size_t> items;
  std::string label;
};

struct PlacedTall {
  size_t item = 0;
  int64_t x = 0;
  int64_t y = 0;
  int64_t width = 0;
  int64_t height = 0;
  bool immovable = false;
};

struct PseudoItem {
  int64_t x = 0;
  int64_t width = 0;
  int64_t height = 0;
  std::vector<VerticalSlice> constituents;  // one entry per (item, column)
};

enum Region : uint8_t { kBottom = 1, kMiddle = 2, kTop = 4 };

struct RegionAssignment {
  std::vector<size_t> items;               // tall item ids, box order
  std::vector<uint8_t> initial_machines;   // bit m: line m intersected in the start column
  std::vector<uint8_t> machines;           // final machine set
  std::vector<uint8_t> regions;            // Region bits
  std::vector<bool> immovable;             // height-1 jobs pinned by a height-2 neighbour
  int64_t swaps = 0;
  int64_t conflicts = 0;

  uint8_t region_of(size_t item) const;
};

struct ReorderResult {
  std::string procedure;
  std::vector<PlacedTall> talls;
  std::vector<SubBox> tall_boxes;
  std::vector<SubBox> vertical_boxes;
  std::vector<PseudoItem> pseudo_items;
  int64_t height = 0;      // box height after the procedure
  int64_t extension = 0;   // height - input box height
  bool fallback = false;   // stacking fallback replaced the procedure's placement
  int64_t iterations = 0;  // sweep iterations or sorted regions
  int64_t tall_bound = 0;
  int64_t vertical_bound = 0;
};

ReorderResult reorder_quarter_box(const TvBox& box);
ReorderResult reorder_half_box(const TvBox& box);
RegionAssignment assign_regions(const TvBox& box);
ReorderResult reorder_tall_box(const TvBox& box, const RegionAssignment& assignment);
ReorderResult reorder_box(const TvBox& box);

// Overlaps among placed talls, talls outside [0, height), moved immovables,
// lost talls, sub-box coverage; empty when the result is consistent.
std::vector<std::string> audit_reorder(const TvBox& box, const ReorderResult& result);

}  // namespace dspkit

#endif  // DSPKIT_REORDER_HPP_
