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

#include <map>
#include <random>
#include <set>

#include "dspkit/errors.hpp"
#include "dspkit/oracle.hpp"
#include "dspkit/place.hpp"
#include "support.hpp"

using namespace dspkit;
using namespace dspkit::testing;

namespace {

const Rational kEps(1, 4), kDelta(1, 16), kMu(1, 64);

RationalLp random_feasible_lp(std::mt19937_64& rng) {
  size_t rows = 1 + rng() % 6, cols = 1 + rng() % 8;
  std::vector<Rational> x0(cols);
  for (auto& v : x0) v = Rational(static_cast<long>(rng() % 5), static_cast<long>(1 + rng() % 3));
  RationalLp lp;
  for (size_t r = 0; r < rows; ++r) {
    std::vector<Rational> a(cols);
    Rational lhs = 0;
    for (size_t c = 0; c < cols; ++c) {
      a[c] = static_cast<long>(rng() % 4);
      lhs += a[c] * x0[c];
    }
    LpSense s = static_cast<LpSense>(rng() % 3);
    Rational b = lhs;
    if (s == LpSense::kLe) b += static_cast<long>(rng() % 3);
    if (s == LpSense::kGe) b -= static_cast<long>(rng() % 3);
    lp.add_row(a, s, b);
  }
  lp.cost.resize(cols);
  for (auto& c : lp.cost) c = static_cast<long>(rng() % 5) - 2;
  // Keep the objective bounded below.
  for (size_t c = 0; c < cols; ++c) {
    std::vector<Rational> cap(cols);
    cap[c] = 1;
    lp.add_row(cap, LpSense::kLe, 10);
  }
  return lp;
}

}  // namespace

TEST_CASE("hand solved vertex") {
  RationalLp lp;
  lp.add_row({1, 2}, LpSense::kLe, 4);
  lp.add_row({3, 1}, LpSense::kLe, 6);
  lp.cost = {-1, -1};
  LpSolution s = solve_config_lp(lp);
  CHECK(s.x[0] == Rational(8, 5));
  CHECK(s.x[1] == Rational(6, 5));
  CHECK(s.objective == Rational(-14, 5));
  CHECK(lp_residual(lp, s.x) == 0);
}

TEST_CASE("infeasible system") {
  RationalLp lp;
  lp.add_row({1}, LpSense::kLe, 1);
  lp.add_row({1}, LpSense::kGe, 2);
  CHECK_THROWS_AS(solve_config_lp(lp), Infeasible);
}

TEST_CASE("random feasible systems") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    RationalLp lp = random_feasible_lp(rng);
    LpSolution s = solve_config_lp(lp);
    CHECK(lp_residual(lp, s.x) == 0);
    CHECK(s.nonzeros <= lp.rows());
    size_t nz = 0;
    for (const Rational& v : s.x) {
      CHECK(v >= 0);
      if (v != 0) ++nz;
    }
    CHECK(nz == s.nonzeros);
  }
}

TEST_CASE("configurations") {
  std::vector<Configuration> all = enumerate_configurations({4, 3}, {2, 2}, 7, 100, false);
  std::vector<Configuration> max = enumerate_configurations({4, 3}, {2, 2}, 7, 100, true);
  CHECK(all.size() == 4);
  for (const Configuration& c : all) CHECK(c.items() > 0);
  CHECK(max.size() == 2);
  for (const Configuration& c : max) CHECK(c.size({4, 3}) <= 7);
  CHECK_THROWS_AS(enumerate_configurations({1}, {50}, 50, 10, false), LimitExceeded);
}

TEST_CASE("vertical items tiling one box") {
  std::vector<Item> items;
  std::vector<size_t> idx;
  for (int i = 0; i < 8; ++i) {
    items.push_back({"v" + std::to_string(i), 1, 3});
    idx.push_back(i);
  }
  Instance inst(16, items);
  VerticalPlacement v = place_vertical({{0, 0, 4, 6}}, inst, idx, 4);
  CHECK(v.extra.empty());
  CHECK(v.extra_pool.empty());
  CHECK(v.empty.empty());
  CHECK(v.placed.size() == 8);
  CHECK(v.nonzero_configurations == 1);
  CHECK(v.lp.x[0] == 4);
}

TEST_CASE("three overflowing lanes") {
  Instance inst(64, {{"v0", 1, 2}, {"v1", 1, 3}, {"v2", 1, 3}, {"v3", 2, 1}, {"v4", 1, 1}, {"v5", 2, 2}});
  VerticalPlacement v = place_vertical({{0, 0, 3, 13}}, inst, {0, 1, 2, 3, 4, 5}, 4);
  CHECK(v.shortfall == 0);
  CHECK(v.nonzero_configurations == 1);
  CHECK(v.extra_pool.size() == 3);
  CHECK(v.extra.size() <= 7);
  CHECK(v.extra_bound == 28);
  CHECK(v.placed.size() + v.extra_pool.size() == 6);
}

TEST_CASE("vertical placement audits") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<Rect> boxes;
    int64_t box_area = 0;
    int64_t x = 0;
    for (size_t b = 0, nb = 1 + rng() % 3; b < nb; ++b) {
      Rect r{x, 0, static_cast<int64_t>(2 + rng() % 6), static_cast<int64_t>(8 + rng() % 10)};
      x += r.width;
      box_area += r.area();
      boxes.push_back(r);
    }
    std::vector<Item> items;
    std::vector<size_t> idx;
    int64_t area = 0;
    for (size_t i = 0, n = 1 + rng() % 10; i < n; ++i) {
      Item it{"v" + std::to_string(i), static_cast<int64_t>(1 + rng() % 2), static_cast<int64_t>(2 + rng() % 6)};
      if (area + it.area() > box_area / 2) break;
      area += it.area();
      items.push_back(it);
      idx.push_back(i);
    }
    Instance inst(x + 8, items);
    VerticalPlacement v = place_vertical(boxes, inst, idx, 4);
    CHECK(lp_residual(v.system, v.lp.x) == 0);
    CHECK(v.lp.nonzeros <= v.system.rows());
    CHECK(v.extra.size() <= v.extra_bound);
    CHECK(v.extra.size() <= 7 * v.nonzero_configurations + (v.shortfall > 0 ? 7 : 0));
    int64_t empty_area = 0;
    for (const Rect& r : v.empty) empty_area += r.area();
    int64_t placed_area = 0;
    for (const PlacedItem& p : v.placed) placed_area += inst.item(p.item).area();
    CHECK(empty_area + placed_area == box_area);
    CHECK(empty_area >= box_area - area);
    std::multiset<size_t> seen;
    for (const PlacedItem& p : v.placed) seen.insert(p.item);
    for (const PlacedItem& p : v.extra_pool) seen.insert(p.item);
    CHECK(seen == std::multiset<size_t>(idx.begin(), idx.end()));
    for (const PlacedItem& p : v.placed) {
      const Rect& b = boxes[p.box];
      CHECK(p.x >= b.x);
      CHECK(p.x + inst.item(p.item).width <= b.x + b.width);
      CHECK(p.y + inst.item(p.item).height <= b.y + b.height);
    }
  }
}

TEST_CASE("horizontal items of one width") {
  std::vector<Item> items;
  std::vector<size_t> idx;
  for (int i = 0; i < 6; ++i) {
    items.push_back({"h" + std::to_string(i), 5, 1});
    idx.push_back(i);
  }
  Instance inst(5, items);
  HorizontalPlacement h = place_horizontal({{0, 0, 5, 4}}, inst, idx, 2);
  CHECK(h.group_widths == std::vector<int64_t>{5, 5, 5});
  CHECK(h.exiled.size() == 2);
  CHECK(h.overflow.empty());
  CHECK(h.placed.size() == 4);
  CHECK(h.empty.empty());
  CHECK(h.top.height == 2);
}

TEST_CASE("two width hand trace") {
  Instance inst(10, {{"A", 6, 1}, {"B", 6, 1}, {"C", 4, 1}, {"D", 4, 1}, {"E", 3, 1}, {"F", 3, 1}});
  HorizontalPlacement h = place_horizontal({{0, 0, 7, 2}}, inst, {0, 1, 2, 3, 4, 5}, 2);
  CHECK(h.group_widths == std::vector<int64_t>{6, 4, 3});
  CHECK(h.exiled == std::vector<size_t>{0, 1});
  CHECK(h.rounded_width == std::vector<int64_t>{6, 6, 4, 4, 3, 3});
  CHECK(h.lp.x[0] == 2);
  CHECK(h.lp.x[1] == 0);
  std::map<size_t, std::pair<int64_t, int64_t>> at;
  for (const PlacedItem& p : h.placed) at[p.item] = {p.x, p.y};
  CHECK(at[2] == std::pair<int64_t, int64_t>{0, 0});
  CHECK(at[3] == std::pair<int64_t, int64_t>{0, 1});
  CHECK(at[4] == std::pair<int64_t, int64_t>{4, 0});
  CHECK(at[5] == std::pair<int64_t, int64_t>{4, 1});
  REQUIRE(h.sub_boxes.size() == 2);
  CHECK(h.sub_boxes[0].width == 4);
  CHECK(h.sub_boxes[1].width == 3);
  CHECK(h.empty.empty());
  CHECK(h.rounded_area == 14);
  CHECK(h.top.height == 2);
  CHECK(h.top.items.size() == 2);
}

TEST_CASE("horizontal placement audits") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    int64_t W = 16 + rng() % 17;
    std::vector<Rect> boxes;
    int64_t box_area = 0;
    for (size_t b = 0, nb = 1 + rng() % 3; b < nb; ++b) {
      int64_t w = 4 + rng() % (W - 3);
      Rect r{static_cast<int64_t>(rng() % (W - w + 1)), 0, w, static_cast<int64_t>(2 + rng() % 6)};
      box_area += r.area();
      boxes.push_back(r);
    }
    std::vector<Item> items;
    std::vector<size_t> idx;
    for (size_t i = 0, n = 1 + rng() % 12; i < n; ++i) {
      items.push_back({"h" + std::to_string(i), static_cast<int64_t>(2 + rng() % 10), 1});
      idx.push_back(i);
    }
    Instance inst(W, items);
    HorizontalPlacement h = place_horizontal(boxes, inst, idx, 2);
    if (!h.system.a.empty()) CHECK(lp_residual(h.system, h.lp.x) == 0);
    std::multiset<size_t> seen;
    for (const PlacedItem& p : h.placed) seen.insert(p.item);
    for (const PlacedItem& p : h.top.items) seen.insert(p.item);
    CHECK(seen == std::multiset<size_t>(idx.begin(), idx.end()));
    for (const HorizontalSubBox& s : h.sub_boxes) {
      for (size_t i : s.items) {
        CHECK(h.rounded_width[i] == s.rounded_width);
        CHECK(inst.item(i).width <= s.width);
      }
    }
    Rational empty = 0;
    for (const auto& e : h.empty) empty += e.second.area();
    CHECK(empty == Rational(box_area) - h.rounded_area);
    for (size_t i : idx) CHECK(h.rounded_width[i] >= inst.item(i).width);
    CHECK(static_cast<int64_t>(h.group_widths.size()) <= static_cast<int64_t>(idx.size() + 1) / 2 + 1);
  }
}

TEST_CASE("small items tiling one box") {
  std::vector<Item> items;
  std::vector<size_t> idx;
  for (int i = 0; i < 16; ++i) {
    items.push_back({"s" + std::to_string(i), 1, 1});
    idx.push_back(i);
  }
  Instance inst(8, items);
  SmallPlacement s = place_small({{2, 0, 4, 4}}, inst, idx, 1, 1, 8);
  CHECK(s.leftover.items.empty());
  CHECK(s.leftover.height == 0);
  CHECK(s.waste == std::vector<int64_t>{0});
  SmallPlacement none = place_small({{0, 0, 1, 4}, {1, 0, 4, 1}}, inst, idx, 2, 2, 8);
  CHECK(none.discarded_boxes == std::vector<size_t>{0, 1});
  CHECK(none.leftover.items.size() == 16);
  CHECK(none.leftover.height >= 2);
  CHECK(none.leftover.height <= 4);
}

TEST_CASE("small placement waste bound") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    int64_t W = 64, OPT = 64, a = 1 + rng() % 4, b = 1 + rng() % 4;
    std::vector<Rect> boxes;
    for (size_t k = 0, nb = 1 + rng() % 4; k < nb; ++k)
      boxes.push_back({static_cast<int64_t>(rng() % 32), 0, static_cast<int64_t>(1 + rng() % 32),
                       static_cast<int64_t>(1 + rng() % OPT)});
    std::vector<Item> items;
    std::vector<size_t> idx;
    for (size_t i = 0, n = rng() % 120; i < n; ++i) {
      items.push_back({"s" + std::to_string(i), static_cast<int64_t>(1 + rng() % a), static_cast<int64_t>(1 + rng() % b)});
      idx.push_back(i);
    }
    Instance inst(W, items);
    SmallPlacement s = place_small(boxes, inst, idx, a, b, W);
    for (size_t k = 0; k < s.used_boxes.size(); ++k) {
      bool last = k + 1 == s.used_boxes.size();
      if (last && s.leftover.items.empty()) continue;
      const Rect& r = boxes[s.used_boxes[k]];
      CHECK(s.waste[k] <= a * r.height + 2 * b * r.width);
      CHECK(s.waste[k] <= 3 * a * OPT);
    }
    for (size_t k : s.discarded_boxes) CHECK((boxes[k].width < a || boxes[k].height < b));
    CHECK(s.placed.size() + s.leftover.items.size() == idx.size());
  }
}

TEST_CASE("medium items") {
  Instance inst(16, {{"m0", 3, 2}, {"m1", 5, 1}});
  CHECK(place_medium(inst, {}, 16).height == 0);
  CHECK(place_medium(inst, {0}, 16).height == 2);
  Rational cap(5);
  CHECK_THROWS_AS(place_medium(inst, {0, 1}, 16, &cap), PreconditionViolated);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<Item> items;
    std::vector<size_t> idx;
    int64_t area = 0, hmax = 0;
    for (size_t i = 0, n = 1 + rng() % 20; i < n; ++i) {
      Item it{"m" + std::to_string(i), static_cast<int64_t>(1 + rng() % 8), static_cast<int64_t>(1 + rng() % 6)};
      area += it.area();
      hmax = std::max(hmax, it.height);
      items.push_back(it);
      idx.push_back(i);
    }
    Instance m(16, items);
    Rational bound(area);
    ExtraBox e = place_medium(m, idx, 16, &bound);
    CHECK(Rational(e.height) <= Rational(2 * area, 16) + hmax);
    CHECK(e.items.size() == idx.size());
  }
}

TEST_CASE("pipeline on a single large item") {
  Instance inst(8, {{"L", 8, 8}});
  EpsParams p = make_params(kEps, kDelta, kMu, 8);
  PipelineResult r = restructure_pipeline(inst, {{0}, {std::vector<int64_t>(8, 0)}}, p);
  CHECK(audit_pipeline(inst, r).empty());
  for (const LedgerEntry& e : r.ledger) {
    if (e.name != "opt_guess" && e.name != "rounding") CHECK(e.increment == 0);
  }
  CHECK(r.within_bound());
}

TEST_CASE("pipeline on the gap instance") {
  Instance gap = gap_instance();
  EpsParams p = make_params(kEps, kDelta, kMu, 4);
  PipelineResult r = restructure_pipeline(gap, gap_packing(), p);
  CHECK(audit_pipeline(gap, r).empty());
  CHECK(r.within_bound());
  CHECK(Rational(r.core_total) <= r.core_bound);
  CHECK(validate_sliced(r.instance, r.packing, r.total).ok());
  CHECK(r.bound == (Rational(5, 4) + 5 * kEps + pow(kEps, 9) + 2 * pow(kEps, 6) + 2 * kEps) * 1024);
}

TEST_CASE("pipeline on oracle solved instances") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Instance inst = gen_random(seed, 1 + seed % 8, 2 + seed % 10, 8);
    DspOptimum opt = solve_dsp_exact(inst);
    EpsParams p = make_params(kEps, kDelta, kMu, opt.peak);
    PipelineResult r = restructure_pipeline(inst, stack_columns(inst, opt.solution), p);
    CAPTURE(seed);
    CHECK(audit_pipeline(inst, r).empty());
    CHECK(r.within_bound());
    CHECK(validate_sliced(r.instance, r.packing, r.total).ok());
    const Classification& cl = r.classification;
    for (size_t i : cl.T) CHECK(is_unsliced(r.packing, i));
  }
}

TEST_CASE("pipeline rejects an infeasible packing with the stage name") {
  Instance inst(2, {{"a", 2, 3}, {"b", 1, 3}});
  EpsParams p = make_params(kEps, kDelta, kMu, 4);
  try {
    restructure_pipeline(inst, {{0, 0}, {{0, 0}, {0}}}, p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInfeasible);
    CHECK(std::string(e.what()).rfind("round: ", 0) == 0);
  }
}
