#include "radsum/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace radsum {

std::optional<std::int64_t> checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
  return r;
}

std::optional<std::int64_t> checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
  return r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a == std::numeric_limits<std::int64_t>::min() ||
      b == std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("gcd64: INT64_MIN operand");
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::optional<std::int64_t> checked_lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  std::int64_t g = gcd64(a, b);
  return checked_mul(a / g, b < 0 ? -b : b);
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (num == std::numeric_limits<std::int64_t>::min() ||
      den == std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("Rational: INT64_MIN component");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = gcd64(num == 0 ? 1 : num, den);
  num_ = num / g;
  den_ = den / g;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  // trim
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
  }

  auto parse_uint = [](std::string_view s) -> std::optional<std::int64_t> {
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      auto shifted = checked_mul(v, 10);
      if (!shifted) return std::nullopt;
      auto next = checked_add(*shifted, c - '0');
      if (!next) return std::nullopt;
      v = *next;
    }
    return v;
  };

  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto p = parse_uint(text.substr(0, slash));
    auto q = parse_uint(text.substr(slash + 1));
    if (!p || !q || *q == 0) return std::nullopt;
    return Rational(negative ? -*p : *p, *q);
  }

  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    auto p = parse_uint(text);
    if (!p) return std::nullopt;
    return Rational(negative ? -*p : *p, 1);
  }

  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  auto w = whole.empty() ? std::optional<std::int64_t>(0) : parse_uint(whole);
  auto f = frac.empty() ? std::optional<std::int64_t>(0) : parse_uint(frac);
  if (!w || !f) return std::nullopt;
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) {
    auto d = checked_mul(den, 10);
    if (!d) return std::nullopt;
    den = *d;
  }
  auto scaled = checked_mul(*w, den);
  if (!scaled) return std::nullopt;
  auto num = checked_add(*scaled, *f);
  if (!num) return std::nullopt;
  return Rational(negative ? -*num : *num, den);
}

std::optional<Rational> Rational::from_double_exact(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational();
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  std::int64_t m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  while (m != 0 && (m & 1) == 0) {
    m >>= 1;
    ++exp;
  }
  if (exp >= 0) {
    if (exp > 62) return std::nullopt;
    auto num = checked_mul(m, std::int64_t{1} << exp);
    if (!num) return std::nullopt;
    return Rational(*num, 1);
  }
  if (exp < -62) return std::nullopt;
  return Rational(m, std::int64_t{1} << -exp);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator+(const Rational& o) const {
  auto r = try_add(o);
  if (!r) throw std::overflow_error("Rational addition overflow");
  return *r;
}

Rational Rational::operator-(const Rational& o) const { return *this + o.negated(); }

Rational Rational::operator*(const Rational& o) const {
  auto r = try_mul(o);
  if (!r) throw std::overflow_error("Rational multiplication overflow");
  return *r;
}

std::optional<Rational> Rational::try_add(const Rational& o) const {
  std::int64_t g = gcd64(den_, o.den_);
  std::int64_t ld = den_ / g;
  std::int64_t rd = o.den_ / g;
  auto den = checked_mul(den_, rd);
  auto a = checked_mul(num_, rd);
  auto b = checked_mul(o.num_, ld);
  if (!den || !a || !b) return std::nullopt;
  auto num = checked_add(*a, *b);
  if (!num) return std::nullopt;
  return Rational(*num, *den);
}

std::optional<Rational> Rational::try_mul(const Rational& o) const {
  // cross-reduce first to keep intermediates small
  std::int64_t g1 = gcd64(num_ == 0 ? 1 : num_, o.den_);
  std::int64_t g2 = gcd64(o.num_ == 0 ? 1 : o.num_, den_);
  auto num = checked_mul(num_ / g1, o.num_ / g2);
  auto den = checked_mul(den_ / g2, o.den_ / g1);
  if (!num || !den) return std::nullopt;
  return Rational(*num, *den);
}

int Rational::compare(const Rational& o) const {
  __int128 lhs = static_cast<__int128>(num_) * o.den_;
  __int128 rhs = static_cast<__int128>(o.num_) * den_;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

}  // namespace radsum
