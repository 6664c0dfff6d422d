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

#include "dspkit/approx.hpp"

#include <algorithm>
#include <numeric>

#include "dspkit/errors.hpp"
#include "dspkit/oracle.hpp"
#include "dspkit/rational.hpp"

namespace dspkit {

int64_t lower_bound(const Instance& instance) {
  if (instance.empty()) return 0;
  int64_t w = instance.strip_width();
  return std::max(instance.max_height(), ceil_div(instance.total_area(), w));
}

int64_t NfdhResult::used_height() const {
  if (shelves.empty()) return 0;
  return shelves.back().y + shelves.back().height;
}

NfdhResult nfdh_pack(const std::vector<Item>& items, int64_t box_width, int64_t box_height,
                     NfdhOrder order) {
  NfdhResult r;
  r.position.assign(items.size(), std::nullopt);
  std::vector<size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    const Item& x = items[a];
    const Item& y = items[b];
    if (order == NfdhOrder::kWidth && x.width != y.width) return x.width > y.width;
    if (x.height != y.height) return x.height > y.height;
    if (x.width != y.width) return x.width > y.width;
    return x.id < y.id;
  });
  int64_t cursor = 0;
  for (size_t i : idx) {
    const Item& it = items[i];
    if (it.width > box_width || it.height > box_height) {
      r.leftover.push_back(i);
      continue;
    }
    if (!r.shelves.empty()) {
      Shelf& s = r.shelves.back();
      if (cursor + it.width <= box_width && it.height <= s.height) {
        r.position[i] = Placement{cursor, s.y};
        s.items.push_back(i);
        cursor += it.width;
        r.placed.push_back(i);
        continue;
      }
    }
    int64_t y = r.shelves.empty() ? 0 : r.shelves.back().y + r.shelves.back().height;
    if (y + it.height > box_height) {
      r.leftover.push_back(i);
      continue;
    }
    r.shelves.push_back({y, it.height, {i}});
    r.position[i] = Placement{0, y};
    cursor = it.width;
    r.placed.push_back(i);
  }
  return r;
}

namespace {

struct RPlace {
  size_t item;
  Rational x, y;
};

Rational pos(const Rational& v) { return v > 0 ? v : Rational(0); }

// Recursive packing into a container of width u and height v. Every
// procedure only recurses into sub-containers that satisfy the
// Steinberg packing condition, which is checked exactly.
class Steinberg {
 public:
  explicit Steinberg(const Instance& inst) : inst_(inst) {}

  int64_t calls = 0;
  static constexpr int64_t kCallBudget = 400000;

  struct Stats {
    Rational alpha, beta, area;
  };

  Stats stats(const std::vector<size_t>& list) const {
    Stats s{0, 0, 0};
    for (size_t i : list) {
      const Item& it = inst_.item(i);
      if (it.width > s.alpha) s.alpha = it.width;
      if (it.height > s.beta) s.beta = it.height;
      s.area += it.area();
    }
    return s;
  }

  static bool condition(const Stats& s, const Rational& u, const Rational& v) {
    if (s.alpha > u || s.beta > v) return false;
    return 2 * s.area <= u * v - pos(2 * s.alpha - u) * pos(2 * s.beta - v);
  }

  // Smallest width u1 with condition(s, u1, v).
  static Rational min_width(const Stats& s, const Rational& v) {
    Rational d = 2 * s.beta - v;
    if (d <= 0) return std::max(s.alpha, Rational(2 * s.area / v));
    Rational c = (2 * s.area + 2 * s.alpha * d) / (v + d);
    if (c <= 2 * s.alpha) return std::max(s.alpha, c);
    return std::max(Rational(2 * s.alpha), Rational(2 * s.area / v));
  }

  bool pack(const std::vector<size_t>& list, const Rational& x, const Rational& y,
            const Rational& u, const Rational& v) {
    if (list.empty()) return true;
    if (++calls > kCallBudget) return false;
    Stats s = stats(list);
    if (!condition(s, u, v)) return false;
    if (list.size() == 1) {
      out_.push_back({list[0], x, y});
      return true;
    }
    const size_t mark = out_.size();
    auto undo = [&]() { out_.resize(mark); };

    // P1: the widest item, if it spans half the container, goes to the bottom.
    size_t wide = *std::max_element(list.begin(), list.end(), [&](size_t a, size_t b) {
      return key_w(a) < key_w(b);
    });
    if (2 * inst_.item(wide).width >= u) {
      auto rest = without(list, wide);
      Rational h = inst_.item(wide).height;
      if (stats(rest).beta <= v - h && pack(rest, x, y + h, u, v - h)) {
        out_.push_back({wide, x, y});
        return true;
      }
      undo();
    }
    // P-1: the tallest item, if it spans half the container, goes to the left.
    size_t tall = *std::max_element(list.begin(), list.end(), [&](size_t a, size_t b) {
      return key_h(a) < key_h(b);
    });
    if (2 * inst_.item(tall).height >= v) {
      auto rest = without(list, tall);
      Rational w = inst_.item(tall).width;
      if (stats(rest).alpha <= u - w && pack(rest, x + w, y, u - w, v)) {
        out_.push_back({tall, x, y});
        return true;
      }
      undo();
    }
    // P3 / P-3: split the list into two side-by-side (or stacked) containers.
    for (int orient = 0; orient < 2; ++orient) {
      for (int key = 0; key < 3; ++key) {
        auto sorted = list;
        std::stable_sort(sorted.begin(), sorted.end(), [&](size_t a, size_t b) {
          return order_key(a, key, orient) > order_key(b, key, orient);
        });
        for (size_t k = 1; k < sorted.size(); ++k) {
          std::vector<size_t> first(sorted.begin(), sorted.begin() + k);
          std::vector<size_t> second(sorted.begin() + k, sorted.end());
          if (orient == 0) {
            Rational u1 = min_width(stats(first), v);
            if (u1 >= u || !condition(stats(second), u - u1, v)) continue;
            if (pack(first, x, y, u1, v) && pack(second, x + u1, y, u - u1, v)) return true;
          } else {
            Stats a = transposed(stats(first));
            Rational v1 = min_width(a, u);
            if (v1 >= v || !condition(stats(second), u, v - v1)) continue;
            if (pack(first, x, y, u, v1) && pack(second, x, y + v1, u, v - v1)) return true;
          }
          undo();
          if (calls > kCallBudget) return false;
        }
      }
    }
    // Last resort inside this container: shelves.
    if (shelves(list, x, y, u, v)) return true;
    undo();
    return false;
  }

  const std::vector<RPlace>& placements() const { return out_; }

 private:
  static Stats transposed(const Stats& s) { return {s.beta, s.alpha, s.area}; }

  std::tuple<int64_t, int64_t, std::string> key_w(size_t i) const {
    const Item& it = inst_.item(i);
    return {it.width, it.height, it.id};
  }
  std::tuple<int64_t, int64_t, std::string> key_h(size_t i) const {
    const Item& it = inst_.item(i);
    return {it.height, it.width, it.id};
  }

  int64_t order_key(size_t i, int key, int orient) const {
    const Item& it = inst_.item(i);
    int64_t along = orient == 0 ? it.width : it.height;
    int64_t across = orient == 0 ? it.height : it.width;
    switch (key) {
      case 0:
        return along;
      case 1:
        return across;
      default:
        return it.area();
    }
  }

  static std::vector<size_t> without(const std::vector<size_t>& list, size_t drop) {
    std::vector<size_t> r;
    r.reserve(list.size() - 1);
    for (size_t i : list) {
      if (i != drop) r.push_back(i);
    }
    return r;
  }

  bool shelves(const std::vector<size_t>& list, const Rational& x, const Rational& y,
               const Rational& u, const Rational& v) {
    auto sorted = list;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](size_t a, size_t b) { return key_h(a) > key_h(b); });
    Rational shelf_y = 0, shelf_h = 0, cursor = 0;
    bool open = false;
    for (size_t i : sorted) {
      const Item& it = inst_.item(i);
      if (open && cursor + it.width <= u) {
        out_.push_back({i, x + cursor, y + shelf_y});
        cursor += it.width;
        continue;
      }
      Rational ny = open ? shelf_y + shelf_h : Rational(0);
      if (ny + it.height > v || it.width > u) return false;
      shelf_y = ny;
      shelf_h = it.height;
      cursor = it.width;
      open = true;
      out_.push_back({i, x, y + shelf_y});
    }
    return true;
  }

  const Instance& inst_;
  std::vector<RPlace> out_;
};

}  // namespace

SteinbergResult steinberg_pack(const Instance& instance) {
  SteinbergResult r;
  r.bounds.lower = lower_bound(instance);
  r.solution.placements.assign(instance.size(), {});
  if (instance.empty()) return r;
  const int64_t target = 2 * r.bounds.lower;
  Steinberg st(instance);
  std::vector<size_t> all(instance.size());
  std::iota(all.begin(), all.end(), size_t{0});
  bool ok = st.pack(all, 0, 0, instance.strip_width(), target);
  r.calls = st.calls;
  if (ok) {
    for (const auto& p : st.placements()) {
      // Integer widths and heights keep floored coordinates disjoint.
      r.solution.placements[p.item] = {floor_to_int(p.x), floor_to_int(p.y)};
    }
  } else {
    // The packing condition holds for (W, 2 * lower), so an exact search
    // bounded by that height always succeeds.
    OracleLimits lim;
    lim.max_items = static_cast<int64_t>(instance.size());
    lim.max_width = instance.strip_width();
    lim.max_states = int64_t{1} << 40;
    auto s = sp_decide(instance, target, lim);
    if (!s) throw InternalError("no packing within twice the lower bound");
    r.solution = *s;
    r.used_exact_fallback = true;
  }
  r.height = sp_height(instance, r.solution);
  r.bounds.upper = r.height;
  return r;
}

}  // namespace dspkit
