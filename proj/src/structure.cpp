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

#include "dspkit/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "dspkit/errors.hpp"

namespace dspkit {

Rational eps_prime_of(const Rational& eps) {
  if (eps <= 0) throw InvalidInput("eps must be positive");
  Rational ratio = Rational(10) / eps;
  Rational inv(1, ceil_to_int(ratio));
  inv.canonicalize();
  Rational quarter(1, 4);
  return inv < quarter ? inv : quarter;
}

namespace {

int64_t ipow(int64_t base, int64_t exp) {
  int64_t r = 1;
  for (int64_t i = 0; i < exp; ++i) {
    if (r > (int64_t{1} << 62) / base) throw LimitExceeded("scale overflows 64-bit integers");
    r *= base;
  }
  return r;
}

// x with eps^x == value, or nullopt.
std::optional<int64_t> exact_power(const Rational& value, const Rational& eps) {
  Rational p(1);
  for (int64_t x = 0; x < 64; ++x) {
    if (p == value) return x;
    if (p < value) return std::nullopt;
    p *= eps;
  }
  return std::nullopt;
}

}  // namespace

EpsParams make_params(const Rational& eps, const Rational& delta, const Rational& mu,
                      int64_t H_guess, int64_t k) {
  if (eps <= 0 || eps.get_num() != 1) throw InvalidInput("eps must have the form 1/E");
  if (eps > Rational(1, 4)) throw InvalidInput("eps must be at most 1/4");
  if (!(mu > 0 && mu < delta && delta < eps)) {
    throw InvalidInput("parameters must satisfy 0 < mu < delta < eps");
  }
  if (H_guess < 1) throw InvalidInput("height guess must be positive");
  if (k < 1) throw InvalidInput("k must be positive");
  auto x = exact_power(delta, eps);
  if (!x) throw InvalidInput("delta must be a power of eps");
  EpsParams p;
  p.eps = eps;
  p.eps_prime = eps_prime_of(eps);
  p.k = k;
  p.delta = delta;
  p.mu = mu;
  p.H_guess = H_guess;
  p.E = to_int(eps.get_den());
  p.N = p.E * p.E;
  p.delta_exponent = *x;
  p.scale = std::lcm(int64_t{4}, ipow(p.E, *x + 2));
  if (H_guess > (int64_t{1} << 40) / p.scale) {
    throw LimitExceeded("height guess too large for the integer scale");
  }
  return p;
}

const char* class_name(ItemClass c) {
  switch (c) {
    case ItemClass::kLarge: return "L";
    case ItemClass::kTall: return "T";
    case ItemClass::kVertical: return "V";
    case ItemClass::kMediumVertical: return "Mv";
    case ItemClass::kHorizontal: return "H";
    case ItemClass::kSmall: return "S";
    case ItemClass::kMedium: return "M";
  }
  return "?";
}

const std::vector<size_t>& Classification::members(ItemClass c) const {
  switch (c) {
    case ItemClass::kLarge: return L;
    case ItemClass::kTall: return T;
    case ItemClass::kVertical: return V;
    case ItemClass::kMediumVertical: return Mv;
    case ItemClass::kHorizontal: return H;
    case ItemClass::kSmall: return S;
    case ItemClass::kMedium: return M;
  }
  return M;
}

ItemClass classify_item(const Item& item, int64_t W, const Rational& eps, const Rational& delta,
                        const Rational& mu, int64_t H_guess) {
  const Rational h(item.height), w(item.width);
  const Rational muH = mu * H_guess, deltaH = delta * H_guess;
  const Rational muW = mu * W, deltaW = delta * W;
  if (h <= muH) {
    if (w >= deltaW) return ItemClass::kHorizontal;
    if (w <= muW) return ItemClass::kSmall;
    return ItemClass::kMedium;
  }
  if (h <= deltaH) return ItemClass::kMedium;
  if (w >= deltaW) return ItemClass::kLarge;
  if (h >= (Rational(1, 4) + eps) * H_guess) return ItemClass::kTall;
  if (w <= muW) return ItemClass::kVertical;
  if (h >= eps * H_guess) return ItemClass::kMediumVertical;
  return ItemClass::kMedium;
}

Classification classify(const Instance& instance, const Rational& eps, const Rational& delta,
                        const Rational& mu, int64_t H_guess) {
  Classification c;
  c.of_item.reserve(instance.size());
  for (size_t i = 0; i < instance.size(); ++i) {
    auto k = classify_item(instance.item(i), instance.strip_width(), eps, delta, mu, H_guess);
    c.of_item.push_back(k);
    switch (k) {
      case ItemClass::kLarge: c.L.push_back(i); break;
      case ItemClass::kTall: c.T.push_back(i); break;
      case ItemClass::kVertical: c.V.push_back(i); break;
      case ItemClass::kMediumVertical: c.Mv.push_back(i); break;
      case ItemClass::kHorizontal: c.H.push_back(i); break;
      case ItemClass::kSmall: c.S.push_back(i); break;
      case ItemClass::kMedium: c.M.push_back(i); break;
    }
  }
  return c;
}

Classification classify(const Instance& instance, const EpsParams& params) {
  return classify(instance, params.eps, params.delta, params.mu, params.H_guess);
}

int64_t medium_area(const Instance& instance, const Classification& c) {
  int64_t a = 0;
  for (size_t i : c.M) a += instance.item(i).area();
  for (size_t i : c.Mv) a += instance.item(i).area();
  return a;
}

DeltaMuChoice select_delta_mu(const Instance& instance, const Rational& eps, int64_t k,
                              int64_t opt, std::optional<Rational> f_override,
                              int64_t max_exponent) {
  if (eps <= 0 || eps.get_num() != 1) throw InvalidInput("eps must have the form 1/E");
  if (k < 1) throw InvalidInput("k must be positive");
  if (opt < 1) throw InvalidInput("OPT must be positive");
  Rational f = f_override ? *f_override : pow(eps, 13) / k;
  f.canonicalize();
  if (f <= 0 || f >= 1 || f.get_num() != 1) {
    throw PreconditionViolated("1/f(eps) must be an integer greater than 1");
  }
  const int64_t inv_f = to_int(BigInt(f.get_den()));
  const Rational bound = f * instance.strip_width() * opt;
  DeltaMuChoice out;
  out.f = f;
  out.area_bound = bound;
  for (int64_t i = 0; i <= 2 * inv_f - 1; ++i) {
    int64_t e_delta = (int64_t{1} << (i + 1)) - 1;
    int64_t e_mu = (int64_t{1} << (i + 2)) - 1;
    if (i + 2 >= 62 || e_mu > max_exponent) {
      throw LimitExceeded("sigma exponent exceeds limit at index " + std::to_string(i));
    }
    Rational delta = pow(f, static_cast<unsigned>(e_delta));
    Rational mu = pow(f, static_cast<unsigned>(e_mu));
    auto c = classify(instance, eps, delta, mu, opt);
    int64_t area = medium_area(instance, c);
    if (Rational(area) <= bound) {
      out.index = i;
      out.sigma_delta = delta;
      out.mu = mu;
      out.medium_area = area;
      Rational p(1);
      int64_t x = 0;
      while (p > delta) {
        p *= eps;
        ++x;
      }
      out.delta = p;
      out.delta_exponent = x;
      return out;
    }
  }
  throw InternalError("no sigma index met the medium-area bound");
}

RoundedPacking round_heights(const Instance& instance, const SlicedPacking& packing,
                             const EpsParams& params) {
  auto report = validate_sliced(instance, packing, params.H_guess);
  if (!report.ok()) {
    throw Infeasible("input packing infeasible at the height guess: " + report.summary());
  }
  const int64_t S = params.scale, E = params.E, H = params.H_guess, U = params.opt_scaled();
  RoundedPacking out;
  out.scale = S;
  out.budget = U / E * (E + 2);
  out.packing.starts = packing.starts;
  out.packing.bottoms.resize(instance.size());
  out.info.resize(instance.size());
  std::vector<Item> items;
  items.reserve(instance.size());
  const int64_t delta_den = ipow(E, params.delta_exponent);
  for (size_t i = 0; i < instance.size(); ++i) {
    const Item& it = instance.item(i);
    const int64_t hs = it.height * S;
    auto& info = out.info[i];
    auto stretch = [&](int64_t y) { return y * S / E * (E + 2); };
    if (it.height * delta_den >= H) {
      int64_t ell = 0, p = 1;
      while (it.height * p < H) {
        p *= E;
        ++ell;
      }
      int64_t g = U / (p * E);
      int64_t k = ceil_div(hs, g);
      if (k == E * E) {
        --ell;
        g *= E;
        k = E;
      }
      info.rounded = true;
      info.ell = ell;
      info.grid = g;
      info.k = k;
      const int64_t hr = k * g;
      items.push_back({it.id, it.width, hr});
      for (int64_t yb : packing.bottoms[i]) {
        const int64_t top_bar = stretch(yb) + hs / E * (E + 2);
        const int64_t top = floor_div(top_bar, g) * g;
        out.packing.bottoms[i].push_back(top - hr);
      }
    } else {
      items.push_back({it.id, it.width, hs});
      for (int64_t yb : packing.bottoms[i]) out.packing.bottoms[i].push_back(stretch(yb));
    }
  }
  out.instance = Instance(instance.strip_width(), std::move(items));
  auto check = validate_sliced(out.instance, out.packing, out.budget);
  if (!check.ok()) throw InternalError("rounded packing invalid: " + check.summary());
  return out;
}

const char* box_kind_name(BoxKind k) {
  switch (k) {
    case BoxKind::kLarge: return "L";
    case BoxKind::kHorizontal: return "H";
    case BoxKind::kTallVertical: return "TV";
  }
  return "?";
}

BoxPartition partition_into_boxes(const RoundedPacking& rounded,
                                  const Classification& classification, const EpsParams& params,
                                  bool allow_start_reduction) {
  const Instance& inst = rounded.instance;
  const int64_t W = inst.strip_width();
  const int64_t E = params.E;
  const int64_t unit = params.opt_scaled() / ipow(E, params.delta_exponent + 1);
  if (classification.of_item.size() != inst.size()) {
    throw InvalidInput("classification does not match the instance");
  }
  BoxPartition out;
  out.discarded_small = classification.S;
  out.discarded_medium = classification.M;
  const Rational ed2 = params.eps * params.delta * params.delta;
  out.bound_B_H = (1 + 2 * params.eps) / ed2 - 2;
  out.bound_B_TV = 2 * (1 + 2 * params.eps) / ed2;

  auto start = [&](size_t i) { return rounded.packing.starts[i]; };

  for (const auto* group : {&classification.L, &classification.Mv}) {
    for (size_t i : *group) {
      Box b;
      b.kind = BoxKind::kLarge;
      b.x = start(i);
      b.width = inst.item(i).width;
      b.height = inst.item(i).height;
      b.items = {i};
      out.B_L.push_back(b);
    }
  }
  std::sort(out.B_L.begin(), out.B_L.end(),
            [](const Box& a, const Box& b) { return a.items[0] < b.items[0]; });

  // Horizontal start points.
  out.horizontal_starts_used.assign(inst.size(), 0);
  std::set<int64_t> starts;
  for (size_t i : classification.H) {
    out.horizontal_starts_used[i] = start(i);
    starts.insert(start(i));
  }
  out.horizontal_start_bound = ipow(E, params.delta_exponent + 1);
  out.horizontal_starts = static_cast<int64_t>(starts.size());
  if (out.horizontal_starts > out.horizontal_start_bound) {
    if (!allow_start_reduction) {
      throw PreconditionViolated("horizontal items use " + std::to_string(out.horizontal_starts) +
                                 " start points, bound is " +
                                 std::to_string(out.horizontal_start_bound));
    }
    const int64_t q = ceil_div(W, out.horizontal_start_bound);
    starts.clear();
    for (size_t i : classification.H) {
      out.horizontal_starts_used[i] = start(i) / q * q;
      starts.insert(out.horizontal_starts_used[i]);
    }
    out.start_reduction_applied = true;
    out.horizontal_starts = static_cast<int64_t>(starts.size());
  }

  // Widest-first horizontal boxes of height eps*delta*OPT.
  std::vector<size_t> pending = classification.H;
  auto hx = [&](size_t i) { return out.horizontal_starts_used[i]; };
  while (!pending.empty()) {
    int64_t s = hx(pending[0]);
    for (size_t i : pending) s = std::min(s, hx(i));
    size_t j = pending[0];
    bool found = false;
    for (size_t i : pending) {
      if (hx(i) != s) continue;
      if (!found || inst.item(i).width > inst.item(j).width ||
          (inst.item(i).width == inst.item(j).width && i < j)) {
        j = i;
        found = true;
      }
    }
    Box b;
    b.kind = BoxKind::kHorizontal;
    b.x = s;
    b.width = inst.item(j).width;
    b.height = unit;
    std::vector<size_t> cand;
    for (size_t i : pending) {
      if (hx(i) >= s && hx(i) + inst.item(i).width <= s + b.width) cand.push_back(i);
    }
    std::stable_sort(cand.begin(), cand.end(), [&](size_t a, size_t c) {
      return inst.item(a).width > inst.item(c).width;
    });
    std::vector<int64_t> load(b.width, 0);
    std::vector<char> taken(cand.size(), 0);
    for (size_t ci = 0; ci < cand.size(); ++ci) {
      size_t i = cand[ci];
      int64_t off = hx(i) - s, h = inst.item(i).height;
      bool fits = true;
      for (int64_t c = 0; c < inst.item(i).width; ++c) fits = fits && load[off + c] + h <= unit;
      if (!fits) continue;
      for (int64_t c = 0; c < inst.item(i).width; ++c) load[off + c] += h;
      b.items.push_back(i);
      taken[ci] = 1;
    }
    std::vector<char> covered(b.width, 0);
    for (size_t ci = 0; ci < cand.size(); ++ci) {
      if (taken[ci]) continue;
      size_t i = cand[ci];
      int64_t off = hx(i) - s;
      bool free = true;
      for (int64_t c = 0; c < inst.item(i).width; ++c) free = free && !covered[off + c];
      if (!free) continue;
      for (int64_t c = 0; c < inst.item(i).width; ++c) covered[off + c] = 1;
      b.overlap_items.push_back(i);
      taken[ci] = 1;
    }
    std::vector<size_t> rest;
    std::set<size_t> used(b.items.begin(), b.items.end());
    used.insert(b.overlap_items.begin(), b.overlap_items.end());
    for (size_t i : pending) {
      if (!used.count(i)) rest.push_back(i);
    }
    pending.swap(rest);
    out.B_H.push_back(std::move(b));
  }

  out.profile.assign(W, 0);
  for (const auto* boxes : {&out.B_L, &out.B_H}) {
    for (const auto& b : *boxes) {
      for (int64_t c = 0; c < b.width; ++c) out.profile[b.x + c] += b.height;
    }
  }
  out.tv_load.assign(W, 0);
  for (const auto* group : {&classification.T, &classification.V}) {
    for (size_t i : *group) {
      for (int64_t c = 0; c < inst.item(i).width; ++c) {
        out.tv_load[start(i) + c] += inst.item(i).height;
      }
    }
  }

  // Cut at profile changes, then drop cuts that would split a tall item.
  std::vector<char> cut(W + 1, 0);
  cut[0] = cut[W] = 1;
  for (int64_t x = 1; x < W; ++x) cut[x] = out.profile[x] != out.profile[x - 1];
  for (size_t i : classification.T) {
    for (int64_t x = start(i) + 1; x < start(i) + inst.item(i).width; ++x) cut[x] = 0;
  }
  int64_t a = 0;
  for (int64_t x = 1; x <= W; ++x) {
    if (!cut[x]) continue;
    int64_t need = 0;
    for (int64_t c = a; c < x; ++c) need = std::max(need, out.tv_load[c]);
    if (need > 0) {
      Box b;
      b.kind = BoxKind::kTallVertical;
      b.x = a;
      b.width = x - a;
      b.height = ceil_div(need, unit) * unit;
      b.y = 0;
      b.sliceable = false;
      for (const auto* group : {&classification.T, &classification.V}) {
        for (size_t i : *group) {
          if (start(i) >= a && start(i) < x) b.items.push_back(i);
        }
      }
      std::sort(b.items.begin(), b.items.end());
      out.B_TV.push_back(std::move(b));
    }
    a = x;
  }
  return out;
}

}  // namespace dspkit
