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

#ifndef DSPKIT_PLACE_HPP_
#define DSPKIT_PLACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dspkit/core.hpp"
#include "dspkit/rational.hpp"
#include "dspkit/reorder.hpp"
#include "dspkit/structure.hpp"

namespace dspkit {

// ---- exact linear programs ----

enum class LpSense { kLe, kGe, kEq };

struct RationalLp {
  std::vector<std::vector<Rational>> a;
  std::vector<LpSense> sense;
  std::vector<Rational> rhs;
  std::vector<Rational> cost;  // minimised; missing entries are zero

  size_t rows() const { return a.size(); }
  size_t cols() const;
  void add_row(std::vector<Rational> coeffs, LpSense s, Rational b);
};

struct LpSolution {
  std::vector<Rational> x;
  Rational objective;
  size_t nonzeros = 0;
  int64_t pivots = 0;
};

// Two-phase simplex with Bland's rule. Throws Infeasible.
LpSolution solve_config_lp(const RationalLp& lp);

// Largest constraint violation of x (zero when x satisfies every row and x >= 0).
Rational lp_residual(const RationalLp& lp, const std::vector<Rational>& x);

// ---- configurations ----

struct Configuration {
  std::vector<int64_t> counts;  // a_d per entry of the dimension list

  int64_t size(const std::vector<int64_t>& dims) const;
  int64_t items() const;
};

// Multisets of dims with total size <= capacity and counts[d] <= caps[d].
// With maximal_only no further item fits. Throws LimitExceeded above max_configs.
std::vector<Configuration> enumerate_configurations(const std::vector<int64_t>& dims,
                                                    const std::vector<int64_t>& caps,
                                                    int64_t capacity, size_t max_configs,
                                                    bool maximal_only = true);

struct PlaceOptions {
  size_t max_configs = 20000;
};

struct Rect {
  int64_t x = 0;
  int64_t y = 0;
  int64_t width = 0;
  int64_t height = 0;

  int64_t area() const { return width * height; }
  bool operator==(const Rect&) const = default;
};

struct PlacedItem {
  size_t item = 0;
  int64_t box = -1;  // index of the containing box, -1 for an extra box
  int64_t x = 0;
  int64_t y = 0;     // offset from the bottom of the containing box
};

struct ExtraBox {
  int64_t width = 0;
  int64_t height = 0;
  std::vector<PlacedItem> items;  // x, y relative to the extra box
};

// ---- vertical items ----

struct VerticalPlacement {
  std::vector<PlacedItem> placed;  // x absolute, y above the bottom of box `box`
  std::vector<ExtraBox> extra;
  std::vector<PlacedItem> extra_pool;  // items routed to extra boxes
  std::vector<Rect> empty;             // B_V^S, absolute coordinates
  std::vector<int64_t> heights;        // H_V
  std::vector<Configuration> configurations;
  LpSolution lp;
  RationalLp system;
  size_t nonzero_configurations = 0;
  size_t extra_bound = 0;  // 7 (|H_V| + |B_P|)
  int64_t extra_height = 0;
  int64_t shortfall = 0;   // width the LP could not cover
};

// boxes are absolute rectangles; every item must be narrower than extra_width.
VerticalPlacement place_vertical(const std::vector<Rect>& boxes, const Instance& instance,
                                 const std::vector<size_t>& items, int64_t extra_width,
                                 const PlaceOptions& options = {});

// ---- horizontal items ----

struct HorizontalSubBox {
  int64_t box = 0;
  int64_t x = 0;  // absolute column
  int64_t y = 0;  // offset from the box bottom
  int64_t width = 0;
  int64_t height = 0;
  int64_t rounded_width = 0;
  std::vector<size_t> items;
};

struct HorizontalPlacement {
  std::vector<PlacedItem> placed;
  ExtraBox top;                      // strip-wide extra box
  std::vector<size_t> exiled;        // widest group
  std::vector<size_t> overflow;      // lane overflow and shortfall items
  std::vector<int64_t> rounded_width;  // per input item
  std::vector<int64_t> group_widths;
  std::vector<HorizontalSubBox> sub_boxes;
  std::vector<std::pair<int64_t, Rect>> empty;  // (box, rectangle with y relative to the box)
  Rational rounded_area;  // a(H~) placed inside boxes
  LpSolution lp;
  RationalLp system;
  int64_t shortfall = 0;
};

HorizontalPlacement place_horizontal(const std::vector<Rect>& boxes, const Instance& instance,
                                     const std::vector<size_t>& items, int64_t group_height,
                                     const PlaceOptions& options = {});

// ---- small and medium items ----

struct SmallPlacement {
  std::vector<PlacedItem> placed;  // box indexes refer to the rectangle list
  std::vector<size_t> used_boxes;
  std::vector<size_t> discarded_boxes;
  std::vector<int64_t> waste;      // per used box: area not covered by items
  ExtraBox leftover;               // strip-wide, Steinberg packed
};

SmallPlacement place_small(const std::vector<Rect>& boxes, const Instance& instance,
                           const std::vector<size_t>& items, int64_t min_width, int64_t min_height,
                           int64_t strip_width);

// Throws PreconditionViolated when area_cap is set and a(M) exceeds it.
ExtraBox place_medium(const Instance& instance, const std::vector<size_t>& items,
                      int64_t strip_width, const Rational* area_cap = nullptr);

// ---- pipeline ----

struct LedgerEntry {
  std::string name;
  int64_t increment = 0;  // scaled units
  Rational nominal;       // fraction of OPT the structural argument allows
  bool within_nominal = true;
};

struct PipelineResult {
  EpsParams params;
  Classification classification;
  RoundedPacking rounded;
  BoxPartition partition;
  std::vector<ReorderResult> reorders;  // aligned with partition.B_TV
  VerticalPlacement vertical;
  HorizontalPlacement horizontal;
  SmallPlacement small;
  ExtraBox medium;
  Instance instance;       // scaled and rounded; same item order as the input
  SlicedPacking packing;   // final structured packing
  std::vector<LedgerEntry> ledger;
  int64_t total = 0;       // sum of ledger increments, at least the final height
  int64_t core_total = 0;  // total without the horizontal, small and medium boxes
  Rational bound;          // (5/4+5eps) OPT + eps^9 OPT + 2 eps^6 OPT + 2 eps OPT, scaled
  Rational core_bound;     // (5/4+5eps) OPT, scaled
  int64_t tall_sub_boxes = 0;
  int64_t vertical_sub_boxes = 0;
  int64_t reorder_fallbacks = 0;

  bool within_bound() const { return Rational(total) <= bound; }
};

// Throws with the failing stage name in the message.
PipelineResult restructure_pipeline(const Instance& instance, const SlicedPacking& packing,
                                    const EpsParams& params, const PlaceOptions& options = {});

// Empty when the result is consistent: conservation, validity at the ledger
// total, unsliced tall items and box-count bounds.
std::vector<std::string> audit_pipeline(const Instance& instance, const PipelineResult& result);

}  // namespace dspkit

#endif  // DSPKIT_PLACE_HPP_
