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

#include "dspkit/place.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "dspkit/approx.hpp"
#include "dspkit/errors.hpp"

namespace dspkit {

size_t RationalLp::cols() const {
  size_t n = cost.size();
  for (const auto& r : a) n = std::max(n, r.size());
  return n;
}

void RationalLp::add_row(std::vector<Rational> coeffs, LpSense s, Rational b) {
  a.push_back(std::move(coeffs));
  sense.push_back(s);
  rhs.push_back(std::move(b));
}

namespace {

struct Tableau {
  std::vector<std::vector<Rational>> t;  // rows, then the objective row last
  std::vector<size_t> basis;
  size_t cols = 0;  // excluding the rhs column
  int64_t pivots = 0;

  Rational& rhs(size_t i) { return t[i][cols]; }

  void pivot(size_t r, size_t c) {
    const Rational p = t[r][c];
    for (auto& v : t[r]) v /= p;
    for (size_t i = 0; i < t.size(); ++i) {
      if (i == r || sgn(t[i][c]) == 0) continue;
      const Rational f = t[i][c];
      for (size_t j = 0; j <= cols; ++j) {
        if (sgn(t[r][j]) != 0) t[i][j] -= f * t[r][j];
      }
    }
    basis[r] = c;
    ++pivots;
  }

  // Bland's rule on the objective row; columns with allowed[j] false never enter.
  void optimise(const std::vector<char>& allowed) {
    const size_t m = basis.size();
    for (;;) {
      size_t enter = cols;
      for (size_t j = 0; j < cols; ++j) {
        if (allowed[j] && sgn(t[m][j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return;
      size_t leave = m;
      Rational best;
      for (size_t i = 0; i < m; ++i) {
        if (sgn(t[i][enter]) <= 0) continue;
        Rational ratio = t[i][cols] / t[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) throw InvalidInput("linear program is unbounded");
      pivot(leave, enter);
    }
  }

  void set_objective(const std::vector<Rational>& c) {
    const size_t m = basis.size();
    auto& z = t[m];
    for (size_t j = 0; j <= cols; ++j) z[j] = j < c.size() ? c[j] : Rational(0);
    for (size_t i = 0; i < m; ++i) {
      const Rational cb = basis[i] < c.size() ? c[basis[i]] : Rational(0);
      if (sgn(cb) == 0) continue;
      for (size_t j = 0; j <= cols; ++j) z[j] -= cb * t[i][j];
    }
  }
};

}  // namespace

LpSolution solve_config_lp(const RationalLp& lp) {
  const size_t m = lp.rows(), n = lp.cols();
  if (lp.sense.size() != m || lp.rhs.size() != m) throw InvalidInput("malformed linear program");
  std::vector<int> sign(m, 1);
  std::vector<LpSense> sense = lp.sense;
  for (size_t i = 0; i < m; ++i) {
    if (sgn(lp.rhs[i]) < 0) {
      sign[i] = -1;
      if (sense[i] == LpSense::kLe) {
        sense[i] = LpSense::kGe;
      } else if (sense[i] == LpSense::kGe) {
        sense[i] = LpSense::kLe;
      }
    }
  }
  size_t extra = 0, arts = 0;
  for (size_t i = 0; i < m; ++i) {
    if (sense[i] != LpSense::kEq) ++extra;
    if (sense[i] != LpSense::kLe) ++arts;
  }
  Tableau tb;
  tb.cols = n + extra + arts;
  tb.t.assign(m + 1, std::vector<Rational>(tb.cols + 1));
  tb.basis.assign(m, 0);
  size_t s = n, a = n + extra;
  std::vector<char> is_art(tb.cols, 0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < lp.a[i].size(); ++j) tb.t[i][j] = sign[i] * lp.a[i][j];
    tb.rhs(i) = sign[i] * lp.rhs[i];
    if (sense[i] == LpSense::kLe) {
      tb.t[i][s] = 1;
      tb.basis[i] = s++;
    } else {
      if (sense[i] == LpSense::kGe) tb.t[i][s++] = -1;
      tb.t[i][a] = 1;
      is_art[a] = 1;
      tb.basis[i] = a++;
    }
  }
  std::vector<char> allowed(tb.cols, 1);
  if (arts > 0) {
    std::vector<Rational> c1(tb.cols);
    for (size_t j = 0; j < tb.cols; ++j) c1[j] = is_art[j] ? 1 : 0;
    tb.set_objective(c1);
    tb.optimise(allowed);
    if (sgn(tb.t[m][tb.cols]) != 0) throw Infeasible("linear program is infeasible");
    for (size_t i = 0; i < m; ++i) {
      if (!is_art[tb.basis[i]]) continue;
      for (size_t j = 0; j < n + extra; ++j) {
        if (sgn(tb.t[i][j]) != 0) {
          tb.pivot(i, j);
          break;
        }
      }
    }
    for (size_t j = 0; j < tb.cols; ++j) allowed[j] = !is_art[j];
  }
  std::vector<Rational> c2(lp.cost.begin(), lp.cost.end());
  tb.set_objective(c2);
  tb.optimise(allowed);
  LpSolution out;
  out.x.assign(n, 0);
  for (size_t i = 0; i < m; ++i) {
    if (tb.basis[i] < n) out.x[tb.basis[i]] = tb.rhs(i);
  }
  for (size_t j = 0; j < n; ++j) {
    if (sgn(out.x[j]) != 0) ++out.nonzeros;
    if (j < lp.cost.size()) out.objective += lp.cost[j] * out.x[j];
  }
  out.pivots = tb.pivots;
  return out;
}

Rational lp_residual(const RationalLp& lp, const std::vector<Rational>& x) {
  Rational worst = 0;
  for (const auto& v : x) worst = std::max(worst, Rational(-v));
  for (size_t i = 0; i < lp.rows(); ++i) {
    Rational lhs = 0;
    for (size_t j = 0; j < lp.a[i].size() && j < x.size(); ++j) lhs += lp.a[i][j] * x[j];
    Rational d = lhs - lp.rhs[i];
    Rational viol = lp.sense[i] == LpSense::kLe ? d : lp.sense[i] == LpSense::kGe ? Rational(-d) : Rational(abs(d));
    worst = std::max(worst, viol);
  }
  return worst;
}

int64_t Configuration::size(const std::vector<int64_t>& dims) const {
  int64_t s = 0;
  for (size_t d = 0; d < counts.size(); ++d) s += counts[d] * dims[d];
  return s;
}

int64_t Configuration::items() const {
  return std::accumulate(counts.begin(), counts.end(), int64_t{0});
}

std::vector<Configuration> enumerate_configurations(const std::vector<int64_t>& dims,
                                                    const std::vector<int64_t>& caps,
                                                    int64_t capacity, size_t max_configs,
                                                    bool maximal_only) {
  if (caps.size() != dims.size()) throw InvalidInput("configuration caps do not match dims");
  for (int64_t d : dims) {
    if (d <= 0) throw InvalidInput("configuration dimensions must be positive");
  }
  std::vector<Configuration> out;
  Configuration cur;
  cur.counts.assign(dims.size(), 0);
  std::function<void(size_t, int64_t)> rec = [&](size_t d, int64_t left) {
    if (d == dims.size()) {
      if (cur.items() == 0) return;
      if (maximal_only) {
        for (size_t e = 0; e < dims.size(); ++e) {
          if (cur.counts[e] < caps[e] && dims[e] <= left) return;
        }
      }
      if (out.size() >= max_configs) {
        throw LimitExceeded("more than " + std::to_string(max_configs) + " configurations");
      }
      out.push_back(cur);
      return;
    }
    const int64_t most = std::min(caps[d], left / dims[d]);
    for (int64_t k = most; k >= 0; --k) {
      cur.counts[d] = k;
      rec(d + 1, left - k * dims[d]);
    }
    cur.counts[d] = 0;
  };
  rec(0, capacity);
  return out;
}

namespace {

// Fills lanes of a configuration: a lane takes items while its filled length is
// below the real lane extent; items ending past the integral extent overflow.
struct LaneFill {
  std::vector<std::pair<size_t, int64_t>> placed;  // (item, offset)
  int64_t used = 0;
  std::vector<size_t> overflow;
};

LaneFill fill_lane(std::vector<size_t>& queue, size_t& head, const Rational& extent,
                   int64_t integral, const std::function<int64_t(size_t)>& length) {
  LaneFill f;
  int64_t pos = 0;
  while (head < queue.size() && Rational(pos) < extent) {
    size_t i = queue[head++];
    if (pos + length(i) <= integral) {
      f.placed.push_back({i, pos});
      f.used = pos + length(i);
    } else {
      f.overflow.push_back(i);
    }
    pos += length(i);
  }
  return f;
}

// Stacks items of total height at most `span` into boxes of height hx: one box
// per band of height hx plus one box per item crossing a band border.
std::vector<ExtraBox> band_boxes(const Instance& inst, const std::vector<size_t>& items,
                                 int64_t hx, int64_t width) {
  std::vector<ExtraBox> bands, crossers;
  int64_t pos = 0;
  for (size_t i : items) {
    const int64_t h = inst.item(i).height;
    const int64_t band = pos / hx;
    if (pos + h <= (band + 1) * hx) {
      while (static_cast<int64_t>(bands.size()) <= band) bands.push_back({width, hx, {}});
      bands[band].items.push_back({i, -1, 0, pos - band * hx});
    } else {
      crossers.push_back({width, hx, {{i, -1, 0, 0}}});
    }
    pos += h;
  }
  std::vector<ExtraBox> out;
  for (auto& b : bands) {
    if (!b.items.empty()) out.push_back(std::move(b));
  }
  for (auto& b : crossers) out.push_back(std::move(b));
  return out;
}

std::vector<size_t> sorted_by_id(std::vector<size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

VerticalPlacement place_vertical(const std::vector<Rect>& boxes, const Instance& instance,
                                 const std::vector<size_t>& items, int64_t extra_width,
                                 const PlaceOptions& options) {
  VerticalPlacement out;
  std::map<int64_t, int64_t, std::greater<>> width_of, count_of;
  int64_t max_h = 0, max_box = 0;
  for (size_t i : items) {
    const auto& it = instance.item(i);
    if (it.width > extra_width) {
      throw InvalidInput("vertical item '" + it.id + "' is wider than the extra box width");
    }
    width_of[it.height] += it.width;
    count_of[it.height] += 1;
    max_h = std::max(max_h, it.height);
  }
  for (const auto& b : boxes) {
    if (b.width < 0 || b.height < 0) throw InvalidInput("negative box dimensions");
    max_box = std::max(max_box, b.height);
  }
  std::vector<int64_t> caps;
  for (auto [h, c] : count_of) {
    out.heights.push_back(h);
    caps.push_back(c);
  }
  const size_t nh = out.heights.size();
  out.extra_bound = 7 * (nh + boxes.size());
  if (items.empty()) {
    for (const auto& b : boxes) {
      if (b.area() > 0) out.empty.push_back(b);
    }
    return out;
  }

  // Columns: x_{C,B} for every box and configuration, then one slack per height.
  std::map<int64_t, std::vector<size_t>> configs_for_height;
  std::vector<std::pair<size_t, size_t>> var;  // (box, configuration)
  for (size_t b = 0; b < boxes.size(); ++b) {
    if (boxes[b].area() == 0) continue;
    auto it = configs_for_height.find(boxes[b].height);
    if (it == configs_for_height.end()) {
      std::vector<size_t> ids;
      for (auto& c : enumerate_configurations(out.heights, caps, boxes[b].height,
                                              options.max_configs)) {
        ids.push_back(out.configurations.size());
        out.configurations.push_back(std::move(c));
      }
      it = configs_for_height.emplace(boxes[b].height, std::move(ids)).first;
    }
    for (size_t c : it->second) var.push_back({b, c});
  }
  const size_t nv = var.size() + nh;
  RationalLp& lp = out.system;
  lp.cost.assign(nv, 0);
  for (size_t h = 0; h < nh; ++h) lp.cost[var.size() + h] = 1;
  for (size_t b = 0; b < boxes.size(); ++b) {
    if (boxes[b].area() == 0) continue;
    std::vector<Rational> row(nv);
    for (size_t v = 0; v < var.size(); ++v) {
      if (var[v].first == b) row[v] = 1;
    }
    lp.add_row(std::move(row), LpSense::kLe, boxes[b].width);
  }
  for (size_t h = 0; h < nh; ++h) {
    std::vector<Rational> row(nv);
    for (size_t v = 0; v < var.size(); ++v) row[v] = out.configurations[var[v].second].counts[h];
    row[var.size() + h] = 1;
    lp.add_row(std::move(row), LpSense::kGe, width_of[out.heights[h]]);
  }
  out.lp = solve_config_lp(lp);
  for (size_t h = 0; h < nh; ++h) {
    out.shortfall += ceil_to_int(out.lp.x[var.size() + h]);
  }

  std::vector<std::vector<size_t>> queue(nh);
  std::vector<size_t> head(nh, 0);
  for (size_t i : sorted_by_id(items)) {
    size_t h = std::find(out.heights.begin(), out.heights.end(), instance.item(i).height) -
               out.heights.begin();
    queue[h].push_back(i);
  }
  auto width = [&](size_t i) { return instance.item(i).width; };
  std::vector<std::vector<size_t>> overflow_groups;
  std::vector<int64_t> cursor(boxes.size());
  for (size_t b = 0; b < boxes.size(); ++b) cursor[b] = boxes[b].x;
  for (size_t v = 0; v < var.size(); ++v) {
    const Rational& x = out.lp.x[v];
    if (sgn(x) == 0) continue;
    ++out.nonzero_configurations;
    const auto [b, c] = var[v];
    const Rect& box = boxes[b];
    const int64_t lane_w = floor_to_int(x);
    const int64_t X = cursor[b];
    int64_t y = 0;
    std::vector<size_t> over;
    for (size_t h = 0; h < nh; ++h) {
      for (int64_t k = 0; k < out.configurations[c].counts[h]; ++k) {
        auto f = fill_lane(queue[h], head[h], x, lane_w, width);
        for (auto [i, off] : f.placed) out.placed.push_back({i, int64_t(b), X + off, box.y + y});
        over.insert(over.end(), f.overflow.begin(), f.overflow.end());
        if (f.used < lane_w) out.empty.push_back({X + f.used, box.y + y, lane_w - f.used, out.heights[h]});
        y += out.heights[h];
      }
    }
    if (y < box.height && lane_w > 0) out.empty.push_back({X, box.y + y, lane_w, box.height - y});
    if (!over.empty()) overflow_groups.push_back(std::move(over));
    cursor[b] = X + lane_w;
  }
  for (size_t b = 0; b < boxes.size(); ++b) {
    const Rect& box = boxes[b];
    if (box.area() > 0 && cursor[b] < box.x + box.width) {
      out.empty.push_back({cursor[b], box.y, box.x + box.width - cursor[b], box.height});
    }
  }
  std::vector<size_t> missed;
  for (size_t h = 0; h < nh; ++h) {
    for (size_t k = head[h]; k < queue[h].size(); ++k) missed.push_back(queue[h][k]);
  }
  if (!missed.empty()) overflow_groups.push_back(std::move(missed));
  out.extra_height = std::max(ceil_div(max_box, 4), max_h);
  for (const auto& g : overflow_groups) {
    for (auto& e : band_boxes(instance, g, out.extra_height, extra_width)) {
      out.extra.push_back(std::move(e));
    }
    for (size_t i : g) out.extra_pool.push_back({i, -1, 0, 0});
  }
  if (out.extra.empty()) out.extra_height = 0;
  return out;
}

HorizontalPlacement place_horizontal(const std::vector<Rect>& boxes, const Instance& instance,
                                     const std::vector<size_t>& items, int64_t group_height,
                                     const PlaceOptions& options) {
  if (group_height <= 0) throw InvalidInput("group height must be positive");
  HorizontalPlacement out;
  out.rounded_width.assign(instance.size(), 0);
  out.top.width = instance.strip_width();
  std::vector<size_t> order = items;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (instance.item(a).width != instance.item(b).width) {
      return instance.item(a).width > instance.item(b).width;
    }
    return a < b;
  });
  int64_t pos = 0;
  int64_t group = -1;
  std::vector<size_t> rest;
  for (size_t i : order) {
    const int64_t g = pos / group_height;
    if (g != group) {
      group = g;
      out.group_widths.push_back(instance.item(i).width);
    }
    out.rounded_width[i] = out.group_widths.back();
    (g == 0 ? out.exiled : rest).push_back(i);
    pos += instance.item(i).height;
  }
  std::map<int64_t, int64_t, std::greater<>> height_of, count_of;
  for (size_t i : rest) {
    height_of[out.rounded_width[i]] += instance.item(i).height;
    count_of[out.rounded_width[i]] += 1;
  }
  std::vector<int64_t> dims, caps;
  for (auto [w, c] : count_of) {
    dims.push_back(w);
    caps.push_back(c);
  }
  const size_t nw = dims.size();
  std::vector<std::vector<size_t>> queue(nw);
  std::vector<size_t> head(nw, 0);
  for (size_t i : rest) {
    queue[std::find(dims.begin(), dims.end(), out.rounded_width[i]) - dims.begin()].push_back(i);
  }
  std::vector<Configuration> configs;
  std::map<int64_t, std::vector<size_t>> configs_for_width;
  std::vector<std::pair<size_t, size_t>> var;
  if (nw > 0) {
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (boxes[b].area() == 0) continue;
      auto it = configs_for_width.find(boxes[b].width);
      if (it == configs_for_width.end()) {
        std::vector<size_t> ids;
        for (auto& c : enumerate_configurations(dims, caps, boxes[b].width, options.max_configs)) {
          ids.push_back(configs.size());
          configs.push_back(std::move(c));
        }
        it = configs_for_width.emplace(boxes[b].width, std::move(ids)).first;
      }
      for (size_t c : it->second) var.push_back({b, c});
    }
    const size_t nv = var.size() + nw;
    RationalLp& lp = out.system;
    lp.cost.assign(nv, 0);
    for (size_t w = 0; w < nw; ++w) lp.cost[var.size() + w] = 1;
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (boxes[b].area() == 0) continue;
      std::vector<Rational> row(nv);
      for (size_t v = 0; v < var.size(); ++v) {
        if (var[v].first == b) row[v] = 1;
      }
      lp.add_row(std::move(row), LpSense::kLe, boxes[b].height);
    }
    for (size_t w = 0; w < nw; ++w) {
      std::vector<Rational> row(nv);
      for (size_t v = 0; v < var.size(); ++v) row[v] = configs[var[v].second].counts[w];
      row[var.size() + w] = 1;
      lp.add_row(std::move(row), LpSense::kGe, height_of[dims[w]]);
    }
    out.lp = solve_config_lp(lp);
    for (size_t w = 0; w < nw; ++w) out.shortfall += ceil_to_int(out.lp.x[var.size() + w]);
  }
  auto height = [&](size_t i) { return instance.item(i).height; };
  std::vector<int64_t> cursor(boxes.size(), 0);
  for (size_t v = 0; v < var.size(); ++v) {
    const Rational& x = out.lp.x[v];
    if (sgn(x) == 0) continue;
    const auto [b, c] = var[v];
    const Rect& box = boxes[b];
    const int64_t lane_h = floor_to_int(x);
    const int64_t Y = cursor[b];
    int64_t X = box.x;
    for (size_t w = 0; w < nw; ++w) {
      for (int64_t k = 0; k < configs[c].counts[w]; ++k) {
        auto f = fill_lane(queue[w], head[w], x, lane_h, height);
        HorizontalSubBox sb{int64_t(b), X, Y, dims[w], lane_h, dims[w], {}};
        for (auto [i, off] : f.placed) {
          out.placed.push_back({i, int64_t(b), X, Y + off});
          sb.items.push_back(i);
          out.rounded_area += Rational(dims[w]) * instance.item(i).height;
        }
        out.overflow.insert(out.overflow.end(), f.overflow.begin(), f.overflow.end());
        if (f.used < lane_h) out.empty.push_back({int64_t(b), {X, Y + f.used, dims[w], lane_h - f.used}});
        if (lane_h > 0) out.sub_boxes.push_back(std::move(sb));
        X += dims[w];
      }
    }
    if (X < box.x + box.width && lane_h > 0) {
      out.empty.push_back({int64_t(b), {X, Y, box.x + box.width - X, lane_h}});
    }
    cursor[b] = Y + lane_h;
  }
  for (size_t b = 0; b < boxes.size(); ++b) {
    const Rect& box = boxes[b];
    if (box.area() > 0 && cursor[b] < box.height) {
      out.empty.push_back({int64_t(b), {box.x, cursor[b], box.width, box.height - cursor[b]}});
    }
  }
  for (size_t w = 0; w < nw; ++w) {
    for (size_t k = head[w]; k < queue[w].size(); ++k) out.overflow.push_back(queue[w][k]);
  }
  std::vector<size_t> top = out.exiled;
  top.insert(top.end(), out.overflow.begin(), out.overflow.end());
  std::vector<Item> list;
  for (size_t i : top) list.push_back(instance.item(i));
  auto nf = nfdh_pack(list, instance.strip_width(), std::numeric_limits<int64_t>::max() / 4);
  if (!nf.leftover.empty()) throw InternalError("horizontal item wider than the strip");
  for (size_t k = 0; k < top.size(); ++k) {
    out.top.items.push_back({top[k], -1, nf.position[k]->x, nf.position[k]->y});
  }
  out.top.height = nf.used_height();
  return out;
}

SmallPlacement place_small(const std::vector<Rect>& boxes, const Instance& instance,
                           const std::vector<size_t>& items, int64_t min_width, int64_t min_height,
                           int64_t strip_width) {
  SmallPlacement out;
  out.leftover.width = strip_width;
  std::vector<size_t> pending = sorted_by_id(items);
  for (size_t b = 0; b < boxes.size(); ++b) {
    const Rect& r = boxes[b];
    if (r.width < min_width || r.height < min_height || r.area() == 0) {
      out.discarded_boxes.push_back(b);
      continue;
    }
    if (pending.empty()) continue;
    std::vector<Item> list;
    for (size_t i : pending) list.push_back(instance.item(i));
    auto nf = nfdh_pack(list, r.width, r.height);
    int64_t used = 0;
    for (size_t k : nf.placed) {
      out.placed.push_back({pending[k], int64_t(b), r.x + nf.position[k]->x, nf.position[k]->y});
      used += list[k].area();
    }
    out.used_boxes.push_back(b);
    out.waste.push_back(r.area() - used);
    std::vector<size_t> rest;
    for (size_t k : nf.leftover) rest.push_back(pending[k]);
    pending.swap(rest);
  }
  if (!pending.empty()) {
    std::vector<Item> list;
    for (size_t i : pending) list.push_back(instance.item(i));
    auto st = steinberg_pack(Instance(strip_width, list));
    for (size_t k = 0; k < pending.size(); ++k) {
      const auto& p = st.solution.placements[k];
      out.leftover.items.push_back({pending[k], -1, p.x, p.y});
    }
    out.leftover.height = st.height;
  }
  return out;
}

ExtraBox place_medium(const Instance& instance, const std::vector<size_t>& items,
                      int64_t strip_width, const Rational* area_cap) {
  ExtraBox out;
  out.width = strip_width;
  int64_t area = 0;
  for (size_t i : items) area += instance.item(i).area();
  if (area_cap && Rational(area) > *area_cap) {
    throw PreconditionViolated("medium area " + std::to_string(area) + " exceeds " +
                               to_string(*area_cap));
  }
  std::vector<size_t> order = sorted_by_id(items);
  std::vector<Item> list;
  for (size_t i : order) list.push_back(instance.item(i));
  auto nf = nfdh_pack(list, strip_width, std::numeric_limits<int64_t>::max() / 4);
  if (!nf.leftover.empty()) throw InvalidInput("medium item wider than the strip");
  for (size_t k = 0; k < order.size(); ++k) {
    out.items.push_back({order[k], -1, nf.position[k]->x, nf.position[k]->y});
  }
  out.height = nf.used_height();
  return out;
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string msg = std::string(name) + ": " + e.what();
    switch (e.kind()) {
      case ErrorKind::kInvalidInput: throw InvalidInput(msg);
      case ErrorKind::kInfeasible: throw Infeasible(msg);
      case ErrorKind::kLimitExceeded: throw LimitExceeded(msg);
      case ErrorKind::kPrecondition: throw PreconditionViolated(msg);
      case ErrorKind::kInternal: throw InternalError(msg);
    }
    throw;
  }
}

// Column-wise stacking of sliceable boxes above the tall/vertical boxes.
struct Layout {
  std::vector<int64_t> top;  // current column height
  std::vector<int64_t> top_unshifted;

  std::vector<int64_t> stack(int64_t x, int64_t w, int64_t h, int64_t h_unshifted) {
    std::vector<int64_t> bottoms(w);
    for (int64_t c = 0; c < w; ++c) {
      bottoms[c] = top[x + c];
      top[x + c] += h;
      top_unshifted[x + c] += h_unshifted;
    }
    return bottoms;
  }
};

int64_t grid_shift(int64_t h, int64_t opt, int64_t grid) {
  return 2 * h > opt ? ceil_div(h, grid) * grid : h;
}

}  // namespace

PipelineResult restructure_pipeline(const Instance& instance, const SlicedPacking& packing,
                                    const EpsParams& params, const PlaceOptions& options) {
  PipelineResult r;
  r.params = params;
  const int64_t U = params.opt_scaled();
  const int64_t W = instance.strip_width();
  const Rational& eps = params.eps;
  r.classification = stage("classify", [&] { return classify(instance, params); });
  r.rounded = stage("round", [&] { return round_heights(instance, packing, params); });
  r.partition = stage("partition",
                      [&] { return partition_into_boxes(r.rounded, r.classification, params); });
  const Instance& ri = r.rounded.instance;
  r.instance = ri;
  const size_t n = ri.size();
  const int64_t grid = U / (params.E * params.E);
  int64_t unit = U;
  for (int64_t k = 0; k <= params.delta_exponent; ++k) unit /= params.E;

  r.packing.starts.assign(n, 0);
  r.packing.bottoms.assign(n, {});
  for (size_t i = 0; i < n; ++i) r.packing.bottoms[i].assign(ri.item(i).width, 0);
  std::vector<char> done(n, 0);
  auto put_uniform = [&](size_t i, int64_t x, int64_t y) {
    if (done[i]) throw InternalError("item '" + ri.item(i).id + "' placed twice");
    done[i] = 1;
    r.packing.starts[i] = x;
    std::fill(r.packing.bottoms[i].begin(), r.packing.bottoms[i].end(), y);
  };

  Layout lay;
  lay.top.assign(W, 0);
  lay.top_unshifted.assign(W, 0);
  std::vector<Rect> vertical_boxes;
  stage("reorder", [&] {
    for (const auto& box : r.partition.B_TV) {
      TvBox tv = make_tv_box(r.rounded, box, r.classification, params);
      ReorderResult rr = reorder_box(tv);
      auto issues = audit_reorder(tv, rr);
      if (!issues.empty()) throw InternalError("box at column " + std::to_string(box.x) + ": " + issues[0]);
      const int64_t h = grid_shift(rr.height, U, grid);
      for (const auto& t : rr.talls) put_uniform(t.item, box.x + t.x, t.y);
      for (const auto& v : rr.vertical_boxes) {
        vertical_boxes.push_back({box.x + v.x, v.y, v.width, v.height});
      }
      if (h > rr.height) vertical_boxes.push_back({box.x, rr.height, box.width, h - rr.height});
      for (int64_t c = 0; c < box.width; ++c) {
        lay.top[box.x + c] = h;
        lay.top_unshifted[box.x + c] = rr.height;
      }
      r.tall_sub_boxes += static_cast<int64_t>(rr.tall_boxes.size());
      r.vertical_sub_boxes += static_cast<int64_t>(rr.vertical_boxes.size());
      r.reorder_fallbacks += rr.fallback ? 1 : 0;
      r.reorders.push_back(std::move(rr));
    }
    return 0;
  });
  for (const auto& box : r.partition.B_L) {
    const size_t i = box.items[0];
    auto bottoms = lay.stack(box.x, box.width, grid_shift(box.height, U, grid), box.height);
    if (done[i]) throw InternalError("large item placed twice");
    done[i] = 1;
    r.packing.starts[i] = box.x;
    r.packing.bottoms[i] = bottoms;
  }
  std::vector<Rect> h_rects;
  std::vector<std::vector<int64_t>> h_bottoms;
  for (const auto& box : r.partition.B_H) {
    h_rects.push_back({box.x, 0, box.width, box.height});
    h_bottoms.push_back(lay.stack(box.x, box.width, grid_shift(box.height, U, grid), box.height));
  }
  const int64_t stacked = *std::max_element(lay.top.begin(), lay.top.end());
  const int64_t stacked_unshifted =
      *std::max_element(lay.top_unshifted.begin(), lay.top_unshifted.end());

  auto put_in_h_box = [&](size_t i, int64_t b, int64_t x, int64_t y) {
    if (done[i]) throw InternalError("item '" + ri.item(i).id + "' placed twice");
    done[i] = 1;
    r.packing.starts[i] = x;
    for (int64_t c = 0; c < ri.item(i).width; ++c) {
      r.packing.bottoms[i][c] = h_bottoms[b][x + c - h_rects[b].x] + y;
    }
  };

  const int64_t extra_width = floor_to_int(params.mu * W);
  r.vertical = stage("place_vertical", [&] {
    return place_vertical(vertical_boxes, ri, r.classification.V, std::max<int64_t>(extra_width, 1),
                          options);
  });
  for (const auto& p : r.vertical.placed) put_uniform(p.item, p.x, p.y);
  r.horizontal = stage("place_horizontal", [&] {
    return place_horizontal(h_rects, ri, r.classification.H, unit,
                            options);
  });
  for (const auto& p : r.horizontal.placed) put_in_h_box(p.item, p.box, p.x, p.y);

  std::vector<Rect> empty = r.vertical.empty;
  const size_t n_vertical_empty = empty.size();
  for (const auto& [b, rect] : r.horizontal.empty) empty.push_back(rect);
  r.small = stage("place_small", [&] {
    return place_small(empty, ri, r.classification.S, ceil_to_int(params.mu * W),
                       ceil_to_int(params.mu * U), W);
  });
  for (const auto& p : r.small.placed) {
    const Rect& rect = empty[p.box];
    if (static_cast<size_t>(p.box) < n_vertical_empty) {
      put_uniform(p.item, p.x, rect.y + p.y);
    } else {
      put_in_h_box(p.item, r.horizontal.empty[p.box - n_vertical_empty].first, p.x, rect.y + p.y);
    }
  }
  r.medium = stage("place_medium", [&] { return place_medium(ri, r.classification.M, W); });

  // Extra layers, each spanning the strip.
  int64_t y = stacked;
  int64_t vertical_layer = 0;
  if (!r.vertical.extra.empty()) {
    const int64_t ew = std::max<int64_t>(extra_width, 1);
    const int64_t per_row = std::max<int64_t>(W / ew, 1);
    const int64_t hx = r.vertical.extra_height;
    for (size_t k = 0; k < r.vertical.extra.size(); ++k) {
      const int64_t row = static_cast<int64_t>(k) / per_row, col = static_cast<int64_t>(k) % per_row;
      for (const auto& p : r.vertical.extra[k].items) {
        put_uniform(p.item, col * ew + p.x, y + row * hx + p.y);
      }
    }
    vertical_layer = ceil_div(static_cast<int64_t>(r.vertical.extra.size()), per_row) * hx;
  }
  y += vertical_layer;
  for (const ExtraBox* box : {&r.horizontal.top, &r.small.leftover, &r.medium}) {
    for (const auto& p : box->items) put_uniform(p.item, p.x, y + p.y);
    y += box->height;
  }
  for (size_t i = 0; i < n; ++i) {
    if (!done[i]) throw InternalError("item '" + ri.item(i).id + "' was not placed");
  }

  const int64_t rounded_height = packing_height(ri, r.rounded.packing);
  int64_t running = 0;
  auto add = [&](const char* name, int64_t level, Rational nominal) {
    LedgerEntry e;
    e.name = name;
    e.increment = std::max<int64_t>(0, level - running);
    e.nominal = nominal;
    e.within_nominal = Rational(e.increment) <= nominal * U;
    running += e.increment;
    r.ledger.push_back(std::move(e));
  };
  add("opt_guess", U, 1);
  add("rounding", rounded_height, 2 * eps);
  add("box_extension", stacked_unshifted, Rational(1, 4) * (1 + 2 * eps) + eps);
  add("grid_shift", stacked, 2 * (eps + eps * eps));
  add("vertical_extra", running + vertical_layer, 0);
  add("horizontal_extra", running + r.horizontal.top.height, pow(eps, 9));
  add("small_extra", running + r.small.leftover.height, 2 * pow(eps, 6));
  add("medium", running + r.medium.height, 2 * eps);
  r.total = running;
  r.core_total = running - r.horizontal.top.height - r.small.leftover.height - r.medium.height;
  r.core_bound = (Rational(5, 4) + 5 * eps) * U;
  r.bound = r.core_bound + (pow(eps, 9) + 2 * pow(eps, 6) + 2 * eps) * U;
  auto report = validate_sliced(ri, r.packing, r.total);
  if (!report.ok()) throw InternalError("validate: " + report.summary());
  return r;
}

std::vector<std::string> audit_pipeline(const Instance& instance, const PipelineResult& r) {
  std::vector<std::string> issues;
  if (r.instance.size() != instance.size()) {
    issues.push_back("item count changed");
    return issues;
  }
  std::multiset<std::string> in, out;
  for (const auto& it : instance.items()) in.insert(it.id);
  for (const auto& it : r.instance.items()) out.insert(it.id);
  if (in != out) issues.push_back("item multiset changed");
  for (size_t i = 0; i < instance.size(); ++i) {
    if (r.instance.item(i).width != instance.item(i).width) issues.push_back("item width changed");
  }
  auto report = validate_sliced(r.instance, r.packing, r.total);
  if (!report.ok()) issues.push_back("packing invalid at the ledger total: " + report.summary());
  if (packing_height(r.instance, r.packing) > r.total) issues.push_back("height exceeds ledger total");
  for (size_t i : r.classification.T) {
    if (!is_unsliced(r.packing, i)) issues.push_back("tall item '" + instance.item(i).id + "' is sliced");
  }
  if (!r.within_bound()) {
    issues.push_back("ledger total " + std::to_string(r.total) + " exceeds " + to_string(r.bound));
  }
  const auto& p = r.partition;
  if (p.B_L.size() != r.classification.L.size() + r.classification.Mv.size()) {
    issues.push_back("|B_L| differs from |L| + |M_v|");
  }
  if (Rational(static_cast<int64_t>(p.B_H.size())) > p.bound_B_H) issues.push_back("|B_H| above its bound");
  if (Rational(static_cast<int64_t>(p.B_TV.size())) > p.bound_B_TV) issues.push_back("|B_TV| above its bound");
  for (const auto& rr : r.reorders) {
    if (static_cast<int64_t>(rr.tall_boxes.size()) > rr.tall_bound) {
      issues.push_back(rr.procedure + " box: tall sub-boxes above bound");
    }
    if (static_cast<int64_t>(rr.vertical_boxes.size()) > rr.vertical_bound) {
      issues.push_back(rr.procedure + " box: vertical sub-boxes above bound");
    }
  }
  if (r.vertical.extra.size() > r.vertical.extra_bound) issues.push_back("too many vertical extra boxes");
  for (const auto& sb : r.horizontal.sub_boxes) {
    for (size_t i : sb.items) {
      if (r.horizontal.rounded_width[i] != sb.rounded_width || r.instance.item(i).width > sb.width) {
        issues.push_back("horizontal sub-box width not uniform");
      }
    }
  }
  Rational box_area = 0, empty_area = 0;
  for (const auto& b : p.B_H) box_area += b.width * b.height;
  for (const auto& [b, rect] : r.horizontal.empty) empty_area += rect.area();
  if (empty_area != box_area - r.horizontal.rounded_area) issues.push_back("horizontal empty area identity fails");
  return issues;
}

}  // namespace dspkit
