#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace radsum {

/// Exact rational p/q over int64, always normalized (gcd 1, q > 0).
///
/// Arithmetic is overflow-checked: operators throw std::overflow_error,
/// the try_* variants return nullopt instead. Comparisons never overflow
/// (cross-multiplication is done in 128-bit).
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t num, std::int64_t den);
  static Rational integer(std::int64_t n) { return Rational(n, 1); }

  /// Parses "p/q", "p", or a terminating decimal like "-0.125".
  /// Returns nullopt for anything else (including values that do not fit).
  static std::optional<Rational> parse(std::string_view text);

  /// Exact dyadic representation of a double, when num/den fit in int64.
  static std::optional<Rational> from_double_exact(double x);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  Rational negated() const { return Rational(-num_, den_, already_normalized_tag{}); }
  Rational abs() const { return num_ < 0 ? negated() : *this; }
  std::string to_string() const;

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  std::optional<Rational> try_add(const Rational& o) const;
  std::optional<Rational> try_mul(const Rational& o) const;

  /// Three-way exact comparison, -1/0/+1.
  int compare(const Rational& o) const;
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return compare(o) < 0; }
  bool operator<=(const Rational& o) const { return compare(o) <= 0; }
  bool operator>(const Rational& o) const { return compare(o) > 0; }
  bool operator>=(const Rational& o) const { return compare(o) >= 0; }

 private:
  struct already_normalized_tag {};
  Rational(std::int64_t num, std::int64_t den, already_normalized_tag)
      : num_(num), den_(den) {}

  std::int64_t num_;
  std::int64_t den_;
};

/// Checked int64 helpers shared by the exact enumeration engines.
std::optional<std::int64_t> checked_add(std::int64_t a, std::int64_t b);
std::optional<std::int64_t> checked_mul(std::int64_t a, std::int64_t b);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::optional<std::int64_t> checked_lcm(std::int64_t a, std::int64_t b);

}  // namespace radsum
