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

#ifndef DSPKIT_STRUCTURE_HPP_
#define DSPKIT_STRUCTURE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dspkit/core.hpp"
#include "dspkit/rational.hpp"

namespace dspkit {

// Working parameters. eps = 1/E and delta = eps^x; heights downstream are
// multiplied by `scale` so that every grid used by the rounding is integral.
struct EpsParams {
  Rational eps;
  Rational eps_prime;
  int64_t k = 1;
  Rational delta;
  Rational mu;
  int64_t H_guess = 1;
  int64_t N = 1;  // grid lines at pitch eps^2 * OPT
  int64_t E = 4;
  int64_t delta_exponent = 1;
  int64_t scale = 1;

  int64_t opt_scaled() const { return H_guess * scale; }
};

Rational eps_prime_of(const Rational& eps);

// Validates mu < delta < eps <= 1/4, eps = 1/E and delta = eps^x.
EpsParams make_params(const Rational& eps, const Rational& delta, const Rational& mu,
                      int64_t H_guess, int64_t k = 1);

enum class ItemClass { kLarge, kTall, kVertical, kMediumVertical, kHorizontal, kSmall, kMedium };

const char* class_name(ItemClass c);

struct Classification {
  std::vector<ItemClass> of_item;
  std::vector<size_t> L, T, V, Mv, H, S, M;

  const std::vector<size_t>& members(ItemClass c) const;
};

ItemClass classify_item(const Item& item, int64_t W, const Rational& eps, const Rational& delta,
                        const Rational& mu, int64_t H_guess);

Classification classify(const Instance& instance, const Rational& eps, const Rational& delta,
                        const Rational& mu, int64_t H_guess);
Classification classify(const Instance& instance, const EpsParams& params);

int64_t medium_area(const Instance& instance, const Classification& c);

struct DeltaMuChoice {
  Rational f;
  int64_t index = 0;
  Rational sigma_delta;  // sigma_i before snapping
  Rational delta;        // eps^x
  int64_t delta_exponent = 0;
  Rational mu;
  int64_t medium_area = 0;
  Rational area_bound;  // f * W * OPT
};

// Exponents of f beyond `max_exponent` raise LimitExceeded.
DeltaMuChoice select_delta_mu(const Instance& instance, const Rational& eps, int64_t k,
                              int64_t opt, std::optional<Rational> f_override = std::nullopt,
                              int64_t max_exponent = 1 << 12);

struct RoundedItem {
  bool rounded = false;
  int64_t ell = 0;
  int64_t grid = 0;  // eps^(ell+1) * OPT in scaled units
  int64_t k = 0;
};

// Scaled instance (heights times params.scale) with rounded heights for
// items of height >= delta * OPT, and the stretched packing.
struct RoundedPacking {
  Instance instance;
  SlicedPacking packing;
  std::vector<RoundedItem> info;
  int64_t scale = 1;
  int64_t budget = 0;  // (1 + 2 eps) * OPT, scaled
};

RoundedPacking round_heights(const Instance& instance, const SlicedPacking& packing,
                             const EpsParams& params);

enum class BoxKind { kLarge, kHorizontal, kTallVertical };

const char* box_kind_name(BoxKind k);

struct Box {
  BoxKind kind = BoxKind::kLarge;
  int64_t x = 0;
  int64_t width = 0;
  int64_t height = 0;
  std::optional<int64_t> y;  // unset for boxes that are sliced per column
  bool sliceable = true;
  std::vector<size_t> items;          // contained items
  std::vector<size_t> overlap_items;  // horizontal boxes: items crossing the top border
};

struct BoxPartition {
  std::vector<Box> B_L, B_H, B_TV;
  std::vector<size_t> discarded_small, discarded_medium;
  std::vector<int64_t> profile;  // per column: large plus horizontal box heights
  std::vector<int64_t> tv_load;  // per column: tall plus vertical rounded load
  int64_t horizontal_starts = 0;
  int64_t horizontal_start_bound = 0;
  bool start_reduction_applied = false;  // fallback snapping, not the cited reduction
  std::vector<int64_t> horizontal_starts_used;  // per item; differs from packing if snapped
  Rational bound_B_H;
  Rational bound_B_TV;
};

// `rounded` comes from round_heights; `classification` from the original instance.
BoxPartition partition_into_boxes(const RoundedPacking& rounded,
                                  const Classification& classification, const EpsParams& params,
                                  bool allow_start_reduction = true);

}  // namespace dspkit

#endif  // DSPKIT_STRUCTURE_HPP_
