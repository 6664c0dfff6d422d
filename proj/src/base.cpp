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

#include "dspkit/errors.hpp"
#include "dspkit/rational.hpp"


namespace dspkit {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
    case ErrorKind::kPrecondition:
      return 2;
    case ErrorKind::kInfeasible:
      return 3;
    case ErrorKind::kLimitExceeded:
      return 4;
    case ErrorKind::kInternal:
      return 1;
  }
  return 1;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return InvalidInput("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits = [](const std::string& t, bool allow_sign) {
    if (t.empty()) return false;
    size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false)) throw bad();
  if (num[0] == '+') num = num.substr(1);
  BigInt n(num), d(den);
  if (d == 0) throw InvalidInput("zero denominator in '" + s + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational make_rational(int64_t num, int64_t den) {
  Rational r(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

int64_t to_int(const BigInt& z) {
  if (!mpz_fits_slong_p(z.get_mpz_t())) throw LimitExceeded("integer overflow converting " + z.get_str());
  return static_cast<int64_t>(mpz_get_si(z.get_mpz_t()));
}

int64_t floor_to_int(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return to_int(q);
}

int64_t ceil_to_int(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return to_int(q);
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace dspkit
