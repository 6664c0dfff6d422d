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

#ifndef DSPKIT_RATIONAL_HPP_
#define DSPKIT_RATIONAL_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace dspkit {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "p/q" or an integer literal.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

Rational make_rational(int64_t num, int64_t den = 1);
Rational pow(const Rational& base, unsigned exponent);

int64_t floor_to_int(const Rational& r);
int64_t ceil_to_int(const Rational& r);
bool is_integer(const Rational& r);
int64_t to_int(const BigInt& z);

inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

}  // namespace dspkit

#endif  // DSPKIT_RATIONAL_HPP_
