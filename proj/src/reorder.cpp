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

#include "dspkit/reorder.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "dspkit/errors.hpp"

namespace dspkit {

BoxBucket bucket_of(int64_t box_height, int64_t opt) {
  if (2 * box_height <= opt) return BoxBucket::kQuarter;
  if (4 * box_height <= 3 * opt) return BoxBucket::kHalf;
  return BoxBucket::kTall;
}

const char* bucket_name(BoxBucket b) {
  switch (b) {
    case BoxBucket::kQuarter: return "quarter";
    case BoxBucket::kHalf: return "half";
    case BoxBucket::kTall: return "tall";
  }
  return "?";
}

int64_t TvBox::vertical_load(int64_t c) const {
  int64_t s = 0;
  for (const auto& v : columns[c]) s += v.height;
  return s;
}

int64_t TvBox::vertical_area() const {
  int64_t s = 0;
  for (int64_t c = 0; c < width; ++c) s += vertical_load(c);
  return s;
}

uint8_t RegionAssignment::region_of(size_t item) const {
  for (size_t k = 0; k < items.size(); ++k) {
    if (items[k] == item) return regions[k];
  }
  throw InvalidInput("item " + std::to_string(item) + " has no region");
}

TvBox make_tv_box(const RoundedPacking& rounded, const Box& box,
                  const Classification& classification, const EpsParams& params) {
  const Instance& inst = rounded.instance;
  TvBox tv;
  tv.x0 = box.x;
  tv.width = box.width;
  tv.height = box.height;
  tv.opt = params.opt_scaled();
  tv.eps = params.eps;
  tv.columns.assign(box.width, {});
  for (size_t i : box.items) {
    if (classification.of_item[i] != ItemClass::kTall) continue;
    TallPiece p;
    p.item = i;
    p.x = rounded.packing.starts[i] - box.x;
    p.width = inst.item(i).width;
    p.height = inst.item(i).height;
    p.bottoms.assign(p.width, 0);
    if (p.x < 0 || p.x + p.width > box.width) {
      throw PreconditionViolated("tall item '" + inst.item(i).id + "' crosses a box border");
    }
    tv.talls.push_back(std::move(p));
  }
  for (int64_t c = 0; c < box.width; ++c) {
    std::vector<std::pair<int64_t, size_t>> here;  // (rounded bottom, piece)
    for (size_t k = 0; k < tv.talls.size(); ++k) {
      const auto& p = tv.talls[k];
      if (c >= p.x && c < p.x + p.width) {
        here.push_back({rounded.packing.bottoms[p.item][c - p.x], k});
      }
    }
    std::sort(here.begin(), here.end());
    int64_t y = 0;
    for (auto [b, k] : here) {
      tv.talls[k].bottoms[c - tv.talls[k].x] = y;
      y += tv.talls[k].height;
    }
    const int64_t col = box.x + c;
    for (size_t i : classification.V) {
      int64_t s = rounded.packing.starts[i];
      if (col >= s && col < s + inst.item(i).width) {
        tv.columns[c].push_back({i, inst.item(i).height});
      }
    }
  }
  return tv;
}

namespace {

bool x_overlap(int64_t ax, int64_t aw, int64_t bx, int64_t bw) {
  return ax < bx + bw && bx < ax + aw;
}

bool overlap(const PlacedTall& a, const PlacedTall& b) {
  return x_overlap(a.x, a.width, b.x, b.width) && x_overlap(a.y, a.height, b.y, b.height);
}

void check_box(const TvBox& box, BoxBucket expected) {
  if (box.width < 1 || box.height < 0 || box.opt < 1) {
    throw InvalidInput("box dimensions must be positive");
  }
  if (static_cast<int64_t>(box.columns.size()) != box.width) {
    throw InvalidInput("box column list does not match its width");
  }
  if (bucket_of(box.height, box.opt) != expected) {
    throw PreconditionViolated(std::string("bucket mismatch: box height belongs to bucket ") +
                               bucket_name(bucket_of(box.height, box.opt)) + ", expected " +
                               bucket_name(expected));
  }
  const Rational tall_min = (Rational(1, 4) + box.eps) * box.opt;
  std::set<size_t> seen;
  for (const auto& p : box.talls) {
    if (!seen.insert(p.item).second) throw InvalidInput("tall item listed twice");
    if (Rational(p.height) < tall_min) {
      throw PreconditionViolated("item " + std::to_string(p.item) + " is below the tall threshold");
    }
    if (static_cast<int64_t>(p.bottoms.size()) != p.width) {
      throw InvalidInput("tall piece bottoms do not match its width");
    }
    bool inside = p.x >= 0 && p.x + p.width <= box.width;
    if (!p.immovable && !inside) {
      throw PreconditionViolated("movable tall item " + std::to_string(p.item) +
                                 " crosses a box border");
    }
    if (p.immovable &&
        std::any_of(p.bottoms.begin(), p.bottoms.end(), [&](int64_t b) { return b != p.bottoms[0]; })) {
      throw PreconditionViolated("immovable tall item " + std::to_string(p.item) + " is sliced");
    }
  }
  for (int64_t c = 0; c < box.width; ++c) {
    int64_t load = box.vertical_load(c);
    std::vector<std::pair<int64_t, int64_t>> iv;
    for (const auto& p : box.talls) {
      if (c >= p.x && c < p.x + p.width) {
        load += p.height;
        int64_t b = p.bottoms[c - p.x];
        iv.push_back({b, b + p.height});
      }
    }
    if (load > box.height) {
      throw PreconditionViolated("column " + std::to_string(c) + " holds more than the box height");
    }
    std::sort(iv.begin(), iv.end());
    for (size_t k = 0; k < iv.size(); ++k) {
      if (iv[k].first < 0 || iv[k].second > box.height ||
          (k > 0 && iv[k].first < iv[k - 1].second)) {
        throw PreconditionViolated("tall slices overlap or leave the box in column " +
                                   std::to_string(c));
      }
    }
  }
}

PlacedTall placed(const TallPiece& p, int64_t x, int64_t y) {
  return {p.item, x, y, p.width, p.height, p.immovable};
}

// Immovable items plus every movable item connected to them by x-overlap.
std::vector<char> fixed_mask(const TvBox& box) {
  std::vector<char> fixed(box.talls.size(), 0);
  for (size_t k = 0; k < box.talls.size(); ++k) fixed[k] = box.talls[k].immovable;
  bool grown = true;
  while (grown) {
    grown = false;
    for (size_t k = 0; k < box.talls.size(); ++k) {
      if (fixed[k]) continue;
      for (size_t j = 0; j < box.talls.size(); ++j) {
        if (!fixed[j]) continue;
        const auto &a = box.talls[k], &b = box.talls[j];
        if (x_overlap(a.x, a.width, b.x, b.width)) {
          fixed[k] = 1;
          grown = true;
          break;
        }
      }
    }
  }
  return fixed;
}

int64_t lowest_free_y(const std::vector<PlacedTall>& done, int64_t x, int64_t w) {
  int64_t y = 0;
  for (const auto& d : done) {
    if (x_overlap(d.x, d.width, x, w)) y = std::max(y, d.y + d.height);
  }
  return y;
}

// Immovables keep their position; items cascaded from them keep their x and
// are stacked above whatever already occupies their columns.
std::vector<PlacedTall> place_fixed(const TvBox& box, const std::vector<char>& fixed) {
  std::vector<PlacedTall> out;
  for (size_t k = 0; k < box.talls.size(); ++k) {
    if (box.talls[k].immovable) out.push_back(placed(box.talls[k], box.talls[k].x, box.talls[k].bottoms[0]));
  }
  std::vector<size_t> cascaded;
  for (size_t k = 0; k < box.talls.size(); ++k) {
    if (fixed[k] && !box.talls[k].immovable) cascaded.push_back(k);
  }
  std::sort(cascaded.begin(), cascaded.end(), [&](size_t a, size_t b) {
    auto ma = *std::min_element(box.talls[a].bottoms.begin(), box.talls[a].bottoms.end());
    auto mb = *std::min_element(box.talls[b].bottoms.begin(), box.talls[b].bottoms.end());
    return std::tie(ma, box.talls[a].x, box.talls[a].item) < std::tie(mb, box.talls[b].x, box.talls[b].item);
  });
  for (size_t k : cascaded) {
    const auto& p = box.talls[k];
    out.push_back(placed(p, p.x, lowest_free_y(out, p.x, p.width)));
  }
  return out;
}

// Maximal column ranges inside the box not covered by fixed items.
std::vector<std::pair<int64_t, int64_t>> free_intervals(const TvBox& box,
                                                        const std::vector<char>& fixed) {
  std::vector<char> covered(box.width, 0);
  for (size_t k = 0; k < box.talls.size(); ++k) {
    if (!fixed[k]) continue;
    const auto& p = box.talls[k];
    for (int64_t c = std::max<int64_t>(0, p.x); c < std::min(box.width, p.x + p.width); ++c) {
      covered[c] = 1;
    }
  }
  std::vector<std::pair<int64_t, int64_t>> out;
  int64_t c = 0;
  while (c < box.width) {
    if (covered[c]) {
      ++c;
      continue;
    }
    int64_t s = c;
    while (c < box.width && !covered[c]) ++c;
    out.push_back({s, c});
  }
  return out;
}

std::vector<size_t> movable_in(const TvBox& box, const std::vector<char>& fixed, int64_t l,
                               int64_t r) {
  std::vector<size_t> out;
  for (size_t k = 0; k < box.talls.size(); ++k) {
    if (!fixed[k] && box.talls[k].x >= l && box.talls[k].x + box.talls[k].width <= r) {
      out.push_back(k);
    }
  }
  return out;
}

bool placement_ok(const std::vector<PlacedTall>& talls, int64_t height) {
  for (size_t a = 0; a < talls.size(); ++a) {
    if (talls[a].y < 0 || talls[a].y + talls[a].height > height) return false;
    for (size_t b = a + 1; b < talls.size(); ++b) {
      if (overlap(talls[a], talls[b])) return false;
    }
  }
  return true;
}

// Stacks movable items over the fixed ones; always overlap-free.
std::vector<PlacedTall> stacking_fallback(const TvBox& box, const std::vector<char>& fixed,
                                          const std::vector<int64_t>& priority) {
  auto out = place_fixed(box, fixed);
  std::vector<size_t> order;
  for (size_t k = 0; k < box.talls.size(); ++k) {
    if (!fixed[k]) order.push_back(k);
  }
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto &pa = box.talls[a], &pb = box.talls[b];
    return std::make_tuple(priority[a], -pa.height, pa.x, pa.item) <
           std::make_tuple(priority[b], -pb.height, pb.x, pb.item);
  });
  for (size_t k : order) {
    const auto& p = box.talls[k];
    out.push_back(placed(p, p.x, lowest_free_y(out, p.x, p.width)));
  }
  return out;
}

int64_t max_top(const std::vector<PlacedTall>& talls) {
  int64_t t = 0;
  for (const auto& p : talls) t = std::max(t, p.y + p.height);
  return t;
}

void extract_sub_boxes(int64_t width, ReorderResult& r) {
  r.tall_boxes.clear();
  r.vertical_boxes.clear();
  std::vector<PlacedTall> in;
  for (auto p : r.talls) {
    int64_t l = std::max<int64_t>(0, p.x), e = std::min(width, p.x + p.width);
    if (l >= e) continue;
    p.width = e - l;
    p.x = l;
    in.push_back(p);
  }
  std::sort(in.begin(), in.end(), [](const PlacedTall& a, const PlacedTall& b) {
    return std::tie(a.y, a.height, a.x) < std::tie(b.y, b.height, b.x);
  });
  for (const auto& p : in) {
    if (!r.tall_boxes.empty()) {
      auto& last = r.tall_boxes.back();
      if (last.y == p.y && last.height == p.height && last.x + last.width == p.x) {
        last.width += p.width;
        last.items.push_back(p.item);
        continue;
      }
    }
    SubBox b;
    b.kind = SubBoxKind::kTall;
    b.x = p.x;
    b.y = p.y;
    b.width = p.width;
    b.height = p.height;
    b.items = {p.item};
    r.tall_boxes.push_back(b);
  }
  std::vector<std::vector<std::pair<int64_t, int64_t>>> free(width);
  for (int64_t c = 0; c < width; ++c) {
    std::vector<std::pair<int64_t, int64_t>> occ;
    for (const auto& p : in) {
      if (c >= p.x && c < p.x + p.width) occ.push_back({p.y, p.y + p.height});
    }
    std::sort(occ.begin(), occ.end());
    int64_t y = 0;
    for (auto [a, b] : occ) {
      if (a > y) free[c].push_back({y, a});
      y = std::max(y, b);
    }
    if (y < r.height) free[c].push_back({y, r.height});
  }
  int64_t c = 0;
  while (c < width) {
    int64_t s = c;
    while (c + 1 < width && free[c + 1] == free[s]) ++c;
    ++c;
    for (auto [a, b] : free[s]) {
      SubBox v;
      v.kind = SubBoxKind::kVertical;
      v.x = s;
      v.y = a;
      v.width = c - s;
      v.height = b - a;
      r.vertical_boxes.push_back(v);
    }
  }
}

int64_t distinct_heights(const TvBox& box, const std::vector<char>* only_movable) {
  std::set<int64_t> h;
  for (size_t k = 0; k < box.talls.size(); ++k) {
    if (only_movable && (*only_movable)[k]) continue;
    h.insert(box.talls[k].height);
  }
  return static_cast<int64_t>(h.size());
}

void finish(const TvBox& box, ReorderResult& r) {
  std::sort(r.talls.begin(), r.talls.end(),
            [](const PlacedTall& a, const PlacedTall& b) { return a.item < b.item; });
  r.height = std::max(r.height, max_top(r.talls));
  r.extension = r.height - box.height;
  extract_sub_boxes(box.width, r);
}

}  // namespace

ReorderResult reorder_quarter_box(const TvBox& box) {
  check_box(box, BoxBucket::kQuarter);
  ReorderResult r;
  r.procedure = "quarter";
  r.height = box.height;
  auto fixed = fixed_mask(box);
  r.talls = place_fixed(box, fixed);
  for (auto [l, rr] : free_intervals(box, fixed)) {
    ++r.iterations;
    auto mov = movable_in(box, fixed, l, rr);
    std::sort(mov.begin(), mov.end(), [&](size_t a, size_t b) {
      const auto &pa = box.talls[a], &pb = box.talls[b];
      return std::make_tuple(-pa.height, pa.x, pa.item) < std::make_tuple(-pb.height, pb.x, pb.item);
    });
    std::vector<char> under(rr - l, 0);
    int64_t x = l;
    for (size_t k : mov) {
      const auto& p = box.talls[k];
      r.talls.push_back(placed(p, x, 0));
      PseudoItem ps;
      ps.x = x;
      ps.width = p.width;
      for (int64_t c = p.x; c < p.x + p.width; ++c) {
        under[c - l] = 1;
        ps.height = std::max(ps.height, box.vertical_load(c));
        for (const auto& v : box.columns[c]) ps.constituents.push_back(v);
      }
      if (ps.height > 0) {
        ps.height = std::min(ps.height, box.height - p.height);
        r.pseudo_items.push_back(std::move(ps));
      }
      x += p.width;
    }
    PseudoItem gap;
    gap.x = x;
    for (int64_t c = l; c < rr; ++c) {
      if (under[c - l]) continue;
      gap.width += 1;
      gap.height = std::max(gap.height, box.vertical_load(c));
      for (const auto& v : box.columns[c]) gap.constituents.push_back(v);
    }
    if (gap.width > 0 && gap.height > 0) r.pseudo_items.push_back(std::move(gap));
  }
  if (!placement_ok(r.talls, box.height)) {
    r.fallback = true;
    r.talls = stacking_fallback(box, fixed, std::vector<int64_t>(box.talls.size(), 0));
  }
  finish(box, r);
  int64_t d = distinct_heights(box, &fixed);
  r.tall_bound = d + 2;
  r.vertical_bound = d + 3;
  return r;
}

ReorderResult reorder_half_box(const TvBox& box) {
  check_box(box, BoxBucket::kHalf);
  ReorderResult r;
  r.procedure = "half";
  r.height = box.height;
  auto fixed = fixed_mask(box);
  r.talls = place_fixed(box, fixed);
  std::vector<int64_t> bottom_first(box.talls.size(), 1);
  for (auto [l, rr] : free_intervals(box, fixed)) {
    ++r.iterations;
    auto mov = movable_in(box, fixed, l, rr);
    std::sort(mov.begin(), mov.end(), [&](size_t a, size_t b) {
      return std::tie(box.talls[a].x, box.talls[a].item) < std::tie(box.talls[b].x, box.talls[b].item);
    });
    // Two colours suffice: at most two tall items share a column.
    std::vector<int> colour(box.talls.size(), -1);
    for (size_t k : mov) {
      const auto& p = box.talls[k];
      bool lowest = true;
      for (size_t j : mov) {
        const auto& o = box.talls[j];
        if (j == k || !(p.x >= o.x && p.x < o.x + o.width)) continue;
        if (o.bottoms[p.x - o.x] < p.bottoms[0]) lowest = false;
      }
      int want = lowest ? 0 : 1;
      bool used[2] = {false, false};
      for (size_t j : mov) {
        if (colour[j] >= 0 && x_overlap(p.x, p.width, box.talls[j].x, box.talls[j].width)) {
          used[colour[j]] = true;
        }
      }
      colour[k] = used[want] ? 1 - want : want;
      bottom_first[k] = colour[k];
    }
    std::vector<size_t> top, bottom;
    for (size_t k : mov) (colour[k] == 0 ? bottom : top).push_back(k);
    auto key = [&](size_t k) { return std::make_tuple(box.talls[k].x, box.talls[k].item); };
    std::sort(top.begin(), top.end(), [&](size_t a, size_t b) {
      if (box.talls[a].height != box.talls[b].height) return box.talls[a].height > box.talls[b].height;
      return key(a) < key(b);
    });
    std::sort(bottom.begin(), bottom.end(), [&](size_t a, size_t b) {
      if (box.talls[a].height != box.talls[b].height) return box.talls[a].height < box.talls[b].height;
      return key(a) < key(b);
    });
    int64_t x = l;
    for (size_t k : top) {
      r.talls.push_back(placed(box.talls[k], x, box.height - box.talls[k].height));
      x += box.talls[k].width;
    }
    int64_t total = 0;
    for (size_t k : bottom) total += box.talls[k].width;
    x = rr - total;
    for (size_t k : bottom) {
      r.talls.push_back(placed(box.talls[k], x, 0));
      x += box.talls[k].width;
    }
  }
  if (!placement_ok(r.talls, box.height)) {
    r.fallback = true;
    r.talls = stacking_fallback(box, fixed, bottom_first);
  }
  finish(box, r);
  std::set<int64_t> pt;
  for (const auto& p : box.talls) pt.insert(p.height);
  for (const auto& v : r.vertical_boxes) pt.insert(v.height);
  int64_t st = distinct_heights(box, nullptr);
  r.tall_bound = 4 * st * static_cast<int64_t>(pt.size()) + 3;
  r.vertical_bound = r.tall_bound;
  return r;
}

RegionAssignment assign_regions(const TvBox& box) {
  check_box(box, BoxBucket::kTall);
  RegionAssignment a;
  const size_t n = box.talls.size();
  const Rational lines[3] = {Rational(box.opt, 4), Rational(box.height, 2),
                             Rational(box.height) - Rational(box.opt, 4)};
  std::vector<int64_t> first_bottom(n, -1);
  std::vector<int64_t> first_col(n);
  for (size_t k = 0; k < n; ++k) first_col[k] = std::max<int64_t>(0, box.talls[k].x);
  for (int64_t c = 0; c < box.width; ++c) {
    std::vector<size_t> here;
    for (size_t k = 0; k < n; ++k) {
      const auto& p = box.talls[k];
      if (c >= p.x && c < p.x + p.width) here.push_back(k);
    }
    std::sort(here.begin(), here.end(), [&](size_t x, size_t y) {
      if (box.talls[x].height != box.talls[y].height) return box.talls[x].height > box.talls[y].height;
      return box.talls[x].item < box.talls[y].item;
    });
    int64_t y = 0;
    for (size_t k : here) {
      if (c == first_col[k]) first_bottom[k] = y;
      y += box.talls[k].height;
    }
  }
  a.items.resize(n);
  a.initial_machines.assign(n, 0);
  for (size_t k = 0; k < n; ++k) {
    a.items[k] = box.talls[k].item;
    const Rational y(first_bottom[k]), top(first_bottom[k] + box.talls[k].height);
    uint8_t m = 0;
    for (int l = 0; l < 3; ++l) {
      if (y <= lines[l] && lines[l] < top) m |= uint8_t(1u << l);
    }
    if (m == 0) m = kMiddle;
    a.initial_machines[k] = m;
  }
  a.machines = a.initial_machines;
  a.immovable.assign(n, false);
  std::vector<char> done(n, 0);
  auto count = [](uint8_t m) { return __builtin_popcount(m); };
  auto ov = [&](size_t i, size_t j) {
    return x_overlap(box.talls[i].x, box.talls[i].width, box.talls[j].x, box.talls[j].width);
  };
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return std::tie(box.talls[i].x, a.initial_machines[i], box.talls[i].item) <
           std::tie(box.talls[j].x, a.initial_machines[j], box.talls[j].item);
  });
  for (size_t k : order) {
    if (count(a.machines[k]) == 3) done[k] = 1;
  }
  for (size_t d : order) {
    if (count(a.initial_machines[d]) != 2) continue;
    std::vector<size_t> parallel;
    for (size_t p : order) {
      if (p != d && count(a.initial_machines[p]) == 1 && ov(p, d)) parallel.push_back(p);
    }
    auto clash = [&](uint8_t orient) {
      const uint8_t f = uint8_t(7 & ~orient);
      for (size_t p : parallel) {
        if (done[p] && a.machines[p] != f) return true;
      }
      for (size_t o : order) {
        if (o == d || !done[o] || !ov(o, d)) continue;
        if (std::find(parallel.begin(), parallel.end(), o) != parallel.end()) continue;
        if (a.machines[o] & orient) return true;
      }
      for (size_t p : parallel) {
        for (size_t o : order) {
          if (o == p || o == d || !done[o] || !ov(o, p)) continue;
          if (std::find(parallel.begin(), parallel.end(), o) != parallel.end()) continue;
          if (a.machines[o] & f) return true;
        }
      }
      return false;
    };
    uint8_t orient = a.initial_machines[d];
    if (clash(orient)) {
      uint8_t other = orient == (kBottom | kMiddle) ? uint8_t(kMiddle | kTop) : uint8_t(kBottom | kMiddle);
      if (!clash(other)) {
        orient = other;
        ++a.swaps;
      } else {
        ++a.conflicts;
      }
    }
    a.machines[d] = orient;
    done[d] = 1;
    for (size_t p : parallel) {
      if (done[p]) continue;
      a.machines[p] = uint8_t(7 & ~orient);
      a.immovable[p] = true;
      done[p] = 1;
    }
  }
  for (size_t k : order) {
    if (done[k]) continue;
    uint8_t used = 0;
    for (size_t o : order) {
      if (o != k && done[o] && ov(o, k)) used |= a.machines[o];
    }
    if (!(used & a.initial_machines[k])) {
      a.machines[k] = a.initial_machines[k];
    } else {
      uint8_t pick = 0;
      for (uint8_t m : {uint8_t(kBottom), uint8_t(kTop), uint8_t(kMiddle)}) {
        if (!(used & m)) {
          pick = m;
          break;
        }
      }
      if (pick == 0) {
        ++a.conflicts;
        pick = a.initial_machines[k];
      }
      a.machines[k] = pick;
    }
    done[k] = 1;
  }
  a.regions = a.machines;
  return a;
}

ReorderResult reorder_tall_box(const TvBox& box, const RegionAssignment& assignment) {
  check_box(box, BoxBucket::kTall);
  if (assignment.items.size() != box.talls.size()) {
    throw InvalidInput("assignment does not match the box");
  }
  ReorderResult r;
  r.procedure = "tall";
  const int64_t q = ceil_div(box.opt, 4);
  r.height = box.height + q;
  auto fixed = fixed_mask(box);
  auto base = place_fixed(box, fixed);
  std::vector<int64_t> y(box.talls.size(), 0), priority(box.talls.size(), 0);
  for (size_t k = 0; k < box.talls.size(); ++k) {
    const auto& p = box.talls[k];
    uint8_t reg = assignment.region_of(p.item);
    if (reg & kBottom) {
      y[k] = 0;
      priority[k] = 0;
    } else if (reg & kTop) {
      y[k] = box.height + q - p.height;
      priority[k] = 2;
    } else {
      y[k] = std::max<int64_t>(0, box.height - q - p.height);
      priority[k] = 1;
    }
  }
  std::vector<PlacedTall> step1 = base;
  for (size_t k = 0; k < box.talls.size(); ++k) {
    if (!fixed[k]) step1.push_back(placed(box.talls[k], box.talls[k].x, y[k]));
  }
  bool all_full = true;
  for (const auto& p : box.talls) {
    all_full = all_full && assignment.region_of(p.item) == (kBottom | kMiddle | kTop);
  }
  if (!placement_ok(step1, r.height)) {
    r.fallback = true;
    r.talls = stacking_fallback(box, fixed, priority);
  } else if (all_full) {
    r.talls = step1;
  } else {
    // Clusters of x-connected movable items move as units; equal clusters end up adjacent.
    r.talls = base;
    for (auto [l, rr] : free_intervals(box, fixed)) {
      ++r.iterations;
      auto mov = movable_in(box, fixed, l, rr);
      std::sort(mov.begin(), mov.end(), [&](size_t a, size_t b) {
        return std::tie(box.talls[a].x, box.talls[a].item) < std::tie(box.talls[b].x, box.talls[b].item);
      });
      struct Cluster {
        int64_t x = 0, end = 0;
        std::vector<size_t> members;
        std::vector<std::tuple<int64_t, int64_t, int64_t, int64_t>> sig;
        int64_t tallest = 0;
      };
      std::vector<Cluster> cl;
      for (size_t k : mov) {
        const auto& p = box.talls[k];
        if (cl.empty() || p.x >= cl.back().end) cl.push_back({p.x, p.x, {}, {}, 0});
        auto& c = cl.back();
        c.end = std::max(c.end, p.x + p.width);
        c.members.push_back(k);
      }
      for (auto& c : cl) {
        for (size_t k : c.members) {
          const auto& p = box.talls[k];
          c.sig.push_back({y[k], p.height, p.x - c.x, p.width});
          c.tallest = std::max(c.tallest, p.height);
        }
        std::sort(c.sig.begin(), c.sig.end());
      }
      std::stable_sort(cl.begin(), cl.end(), [](const Cluster& a, const Cluster& b) {
        if (a.tallest != b.tallest) return a.tallest > b.tallest;
        return a.sig < b.sig;
      });
      int64_t x = l;
      for (const auto& c : cl) {
        for (size_t k : c.members) {
          r.talls.push_back(placed(box.talls[k], x + (box.talls[k].x - c.x), y[k]));
        }
        x += c.end - c.x;
      }
    }
    if (!placement_ok(r.talls, r.height)) {
      r.fallback = true;
      r.talls = stacking_fallback(box, fixed, priority);
    }
  }
  finish(box, r);
  int64_t n = box.eps.get_den().get_si();
  n *= n;
  r.tall_bound = 2 * n * n + ceil_div(14 * n, 4) + 8;
  r.vertical_bound = 4 * n * n + ceil_div(41 * n, 4) + 5;
  return r;
}

ReorderResult reorder_box(const TvBox& box) {
  switch (bucket_of(box.height, box.opt)) {
    case BoxBucket::kQuarter: return reorder_quarter_box(box);
    case BoxBucket::kHalf: return reorder_half_box(box);
    case BoxBucket::kTall: return reorder_tall_box(box, assign_regions(box));
  }
  throw InternalError("unknown bucket");
}

std::vector<std::string> audit_reorder(const TvBox& box, const ReorderResult& result) {
  std::vector<std::string> issues;
  std::map<size_t, const TallPiece*> want;
  for (const auto& p : box.talls) want[p.item] = &p;
  std::set<size_t> seen;
  for (const auto& t : result.talls) {
    auto it = want.find(t.item);
    if (it == want.end()) {
      issues.push_back("unknown tall item " + std::to_string(t.item));
      continue;
    }
    if (!seen.insert(t.item).second) issues.push_back("tall item placed twice");
    if (t.width != it->second->width || t.height != it->second->height) {
      issues.push_back("tall item " + std::to_string(t.item) + " changed size");
    }
    if (it->second->immovable && (t.x != it->second->x || t.y != it->second->bottoms[0])) {
      issues.push_back("immovable item " + std::to_string(t.item) + " moved");
    }
    if (!it->second->immovable && (t.x < 0 || t.x + t.width > box.width)) {
      issues.push_back("tall item " + std::to_string(t.item) + " left the box");
    }
  }
  if (seen.size() != want.size()) issues.push_back("tall items lost");
  if (!placement_ok(result.talls, result.height)) issues.push_back("tall items overlap or exceed the box");
  int64_t area = 0;
  size_t in_boxes = 0;
  for (const auto& b : result.tall_boxes) {
    area += b.width * b.height;
    in_boxes += b.items.size();
  }
  for (const auto& b : result.vertical_boxes) area += b.width * b.height;
  if (area != box.width * result.height) issues.push_back("sub-boxes do not tile the box");
  int64_t free_area = 0;
  for (const auto& b : result.vertical_boxes) free_area += b.width * b.height;
  if (free_area < box.vertical_area()) issues.push_back("vertical sub-boxes lack area");
  (void)in_boxes;
  return issues;
}

}  // namespace dspkit
