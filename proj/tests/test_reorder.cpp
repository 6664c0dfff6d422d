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

#include <algorithm>
#include <random>

#include "dspkit/errors.hpp"
#include "dspkit/reorder.hpp"

using namespace dspkit;

namespace {

TallPiece piece(size_t id, int64_t x, int64_t w, int64_t h, int64_t y = 0) {
  TallPiece p;
  p.item = id;
  p.x = x;
  p.width = w;
  p.height = h;
  p.bottoms.assign(w, y);
  return p;
}

TvBox empty_box(int64_t width, int64_t height, int64_t opt, Rational eps) {
  TvBox b;
  b.width = width;
  b.height = height;
  b.opt = opt;
  b.eps = eps;
  b.columns.assign(width, {});
  return b;
}

// Talls stacked tallest first in every column.
void stack_tallest_first(TvBox& b) {
  for (int64_t c = 0; c < b.width; ++c) {
    std::vector<size_t> here;
    for (size_t k = 0; k < b.talls.size(); ++k)
      if (c >= b.talls[k].x && c < b.talls[k].x + b.talls[k].width) here.push_back(k);
    std::sort(here.begin(), here.end(), [&](size_t p, size_t q) {
      if (b.talls[p].height != b.talls[q].height) return b.talls[p].height > b.talls[q].height;
      return p < q;
    });
    int64_t y = 0;
    for (size_t k : here) {
      b.talls[k].bottoms[c - b.talls[k].x] = y;
      y += b.talls[k].height;
    }
  }
}

// Items x c a y b d e g f h z of the assignment fixture, heights in percent of the box.
TvBox assignment_fixture() {
  TvBox b = empty_box(9, 100, 100, Rational(0));
  b.talls = {piece(0, 0, 1, 47), piece(1, 0, 2, 25), piece(2, 0, 1, 25), piece(3, 1, 1, 49),
             piece(4, 1, 2, 26), piece(5, 2, 2, 60), piece(6, 3, 3, 27), piece(7, 4, 4, 33),
             piece(8, 4, 2, 28), piece(9, 6, 2, 53), piece(10, 8, 1, 85)};
  stack_tallest_first(b);
  return b;
}

TvBox random_box(std::mt19937_64& rng, int bucket) {
  TvBox t = empty_box(2 + rng() % 12, 0, 64, Rational(1, 4));
  t.height = bucket == 0 ? 20 + rng() % 13 : bucket == 1 ? 33 + rng() % 16 : 49 + rng() % 40;
  std::vector<int64_t> sky(t.width, 0);
  size_t id = 0;
  for (int tries = 0; tries < 30; ++tries) {
    int64_t w = 1 + rng() % 4, x = static_cast<int64_t>(rng() % (t.width + 2)) - 1;
    int64_t h = 32 + rng() % 33;
    bool border = x < 0 || x + w > t.width;
    if (border && rng() % 2) continue;
    if (x >= t.width || x + w <= 0) continue;
    TallPiece p = piece(id, x, w, h);
    int64_t top = 0;
    for (int64_t c = std::max<int64_t>(x, 0); c < std::min(x + w, t.width); ++c) top = std::max(top, sky[c]);
    bool ok = true;
    for (int64_t c = std::max<int64_t>(x, 0); c < std::min(x + w, t.width); ++c) {
      int64_t y = border ? top : sky[c];
      p.bottoms[c - x] = y;
      if (y + h > t.height) ok = false;
    }
    if (border) {
      p.immovable = true;
      std::fill(p.bottoms.begin(), p.bottoms.end(), top);
    }
    if (!ok) continue;
    for (int64_t c = std::max<int64_t>(x, 0); c < std::min(x + w, t.width); ++c)
      sky[c] = (border ? top : sky[c]) + h;
    t.talls.push_back(p);
    ++id;
  }
  for (int64_t c = 0; c < t.width; ++c) {
    int64_t room = t.height - sky[c];
    if (room <= 0) continue;
    int64_t v = rng() % (room + 1);
    if (v) t.columns[c].push_back({id, v});
  }
  return t;
}

int64_t tall_area(const ReorderResult& r) {
  int64_t a = 0;
  for (const PlacedTall& p : r.talls) a += p.width * p.height;
  return a;
}

}  // namespace

TEST_CASE("buckets") {
  CHECK(bucket_of(32, 64) == BoxBucket::kQuarter);
  CHECK(bucket_of(33, 64) == BoxBucket::kHalf);
  CHECK(bucket_of(48, 64) == BoxBucket::kHalf);
  CHECK(bucket_of(49, 64) == BoxBucket::kTall);
  CHECK(std::string(bucket_name(BoxBucket::kHalf)) == "half");
}

TEST_CASE("quarter box with one tall item") {
  TvBox b = empty_box(4, 32, 64, Rational(1, 4));
  b.talls = {piece(0, 1, 2, 32)};
  ReorderResult r = reorder_quarter_box(b);
  CHECK(r.tall_boxes.size() == 1);
  CHECK(r.extension == 0);
  CHECK(audit_reorder(b, r).empty());
}

TEST_CASE("quarter box with two rounded heights") {
  TvBox b = empty_box(8, 32, 64, Rational(1, 8));
  b.talls = {piece(0, 0, 1, 24), piece(1, 2, 2, 28), piece(2, 5, 1, 24), piece(3, 7, 1, 28)};
  b.columns[1] = {{4, 8}};
  ReorderResult r = reorder_quarter_box(b);
  CHECK(r.tall_boxes.size() == 2);
  CHECK(static_cast<int64_t>(r.tall_boxes.size()) <= r.tall_bound);
  CHECK(static_cast<int64_t>(r.vertical_boxes.size()) <= r.vertical_bound);
  for (const SubBox& s : r.tall_boxes) CHECK(s.y == 0);
  CHECK(audit_reorder(b, r).empty());
}

TEST_CASE("quarter box keeps border items") {
  TvBox b = empty_box(6, 32, 64, Rational(1, 8));
  TallPiece left = piece(0, -1, 2, 28);
  left.immovable = true;
  b.talls = {left, piece(1, 3, 1, 24)};
  ReorderResult r = reorder_quarter_box(b);
  CHECK(audit_reorder(b, r).empty());
  bool kept = false;
  for (const PlacedTall& p : r.talls)
    if (p.item == 0) kept = p.x == -1 && p.y == 0 && p.immovable;
  CHECK(kept);
}

TEST_CASE("bucket mismatch is rejected") {
  TvBox b = empty_box(4, 40, 64, Rational(1, 4));
  b.talls = {piece(0, 0, 1, 36)};
  CHECK_THROWS_AS(reorder_quarter_box(b), PreconditionViolated);
  TvBox q = empty_box(4, 30, 64, Rational(1, 4));
  CHECK_THROWS_AS(reorder_half_box(q), PreconditionViolated);
  TvBox low = empty_box(4, 40, 64, Rational(1, 4));
  low.talls = {piece(0, 0, 1, 20)};
  CHECK_THROWS_AS(reorder_half_box(low), PreconditionViolated);
}

TEST_CASE("half box plain sort") {
  TvBox b = empty_box(6, 44, 64, Rational(1, 4));
  b.talls = {piece(0, 0, 1, 36, 8), piece(1, 1, 2, 40), piece(2, 4, 1, 33, 4), piece(3, 5, 1, 40, 2)};
  b.columns[0] = {{9, 8}};
  ReorderResult r = reorder_half_box(b);
  CHECK(audit_reorder(b, r).empty());
  CHECK_FALSE(r.fallback);
  for (const SubBox& s : r.tall_boxes) {
    int64_t h = -1;
    for (const PlacedTall& p : r.talls)
      if (std::find(s.items.begin(), s.items.end(), p.item) != s.items.end()) {
        if (h < 0) h = p.height;
        CHECK(p.height == h);
      }
  }
}

TEST_CASE("half box with equal heights") {
  TvBox b = empty_box(6, 40, 64, Rational(1, 4));
  b.talls = {piece(0, 0, 2, 36), piece(1, 2, 1, 36, 4), piece(2, 4, 2, 36, 2)};
  ReorderResult r = reorder_half_box(b);
  CHECK(audit_reorder(b, r).empty());
  CHECK(r.iterations == 1);
  CHECK(r.tall_boxes.size() <= 2);
}

TEST_CASE("assignment of a single full height item") {
  TvBox b = empty_box(3, 64, 64, Rational(1, 4));
  b.talls = {piece(0, 1, 1, 64)};
  RegionAssignment a = assign_regions(b);
  CHECK(a.machines == std::vector<uint8_t>{7});
  CHECK(a.region_of(0) == (kBottom | kMiddle | kTop));
}

TEST_CASE("three machine assignment fixture") {
  RegionAssignment a = assign_regions(assignment_fixture());
  std::vector<uint8_t> want(11);
  want[0] = kBottom;            // x
  want[1] = kMiddle;            // c
  want[2] = kTop;               // a
  want[3] = kBottom;            // y
  want[4] = kTop;               // b
  want[5] = kBottom | kMiddle;  // d
  want[6] = kTop;               // e
  want[7] = kBottom;            // g
  want[8] = kMiddle;            // f
  want[9] = kMiddle | kTop;     // h
  want[10] = kBottom | kMiddle | kTop;  // z
  for (size_t k = 0; k < a.items.size(); ++k) {
    CAPTURE(k);
    CHECK(a.regions[k] == want[a.items[k]]);
    bool pinned = a.items[k] == 4 || a.items[k] == 6 || a.items[k] == 7;
    CHECK(a.immovable[k] == pinned);
  }
  CHECK(a.swaps == 1);
  CHECK(a.conflicts == 0);
}

TEST_CASE("tall box of full height items") {
  TvBox b = empty_box(4, 60, 64, Rational(1, 4));
  b.talls = {piece(0, 0, 2, 60), piece(1, 3, 1, 60)};
  ReorderResult r = reorder_tall_box(b, assign_regions(b));
  CHECK(audit_reorder(b, r).empty());
  CHECK(r.iterations == 0);
  CHECK_FALSE(r.fallback);
  for (const PlacedTall& p : r.talls) {
    const TallPiece& in = b.talls[p.item];
    CHECK(p.x == in.x);
    CHECK(p.y == 0);
  }
}

TEST_CASE("tall box without items crossing the upper line") {
  TvBox b = empty_box(6, 64, 64, Rational(1, 4));
  b.talls = {piece(0, 0, 2, 34), piece(1, 3, 1, 40), piece(2, 5, 1, 33)};
  b.columns[2] = {{7, 30}};
  ReorderResult r = reorder_tall_box(b, assign_regions(b));
  CHECK(audit_reorder(b, r).empty());
  CHECK(r.extension <= 16);
}

TEST_CASE("reorder audits on random boxes") {
  std::mt19937_64 rng(1);
  int fallbacks = 0;
  for (int it = 0; it < 900; ++it) {
    TvBox t = random_box(rng, it % 3);
    int64_t area_in = 0;
    for (const TallPiece& p : t.talls) area_in += p.width * p.height;
    ReorderResult r = reorder_box(t);
    CAPTURE(it);
    CHECK(audit_reorder(t, r).empty());
    CHECK(tall_area(r) == area_in);
    CHECK(static_cast<int64_t>(r.tall_boxes.size()) <= r.tall_bound);
    CHECK(static_cast<int64_t>(r.vertical_boxes.size()) <= r.vertical_bound);
    if (!r.fallback) CHECK(r.extension <= (t.height > 48 ? 16 : 0));
    int64_t free_area = 0;
    for (const SubBox& s : r.vertical_boxes) free_area += s.width * s.height;
    CHECK(free_area >= t.vertical_area());
    if (r.fallback) ++fallbacks;
  }
  MESSAGE("stacking fallbacks: " << fallbacks);
  CHECK(fallbacks < 90);
}
