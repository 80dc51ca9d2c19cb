#include "maximin/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace maximin {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos)
      throw std::invalid_argument("malformed rational literal: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string scale = "1" + std::string(s.size() - dot - 1, '0');
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("malformed rational literal: " + s);
    try {
      Rational r{mpz_class(digits), mpz_class(scale)};
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("malformed rational literal: " + s);
    }
  }

  Rational r;
  if (r.set_str(s, 10) != 0 || r.get_den() == 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

long long floor_int(const Rational& value) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q.get_si();
}

long long ceil_int(const Rational& value) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q.get_si();
}

Rational approximate(double value, long long max_denominator) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot approximate a non-finite value");
  const Rational exact(value);
  // convergents h/k of the continued fraction of `exact`
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  mpz_class num = exact.get_num(), den = exact.get_den();
  const mpz_class limit(std::to_string(max_denominator));
  while (den != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const mpz_class k2 = a * k1 + k0;
    if (k2 > limit) break;
    const mpz_class h2 = a * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const mpz_class r = num - a * den;
    num = den;
    den = r;
  }
  Rational out{h1, k1};
  out.canonicalize();
  return out;
}

}  // namespace maximin
