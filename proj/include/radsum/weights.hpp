#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "radsum/rational.hpp"

namespace radsum {

/// One ingested weight: the double value plus whatever exactness survived
/// ingestion. A rational weight p/q carries both `exact` and `exact_sq`
/// (p^2/q^2, when it fits); a squared-rational weight sq:p/q carries only
/// `exact_sq`; a plain decimal-with-exponent or computed weight carries
/// neither.
struct WeightEntry {
  double value = 0.0;
  std::optional<Rational> exact;
  std::optional<Rational> exact_sq;
};

/// The weight sequence (v_1, ..., v_n) with exactness metadata.
class WeightVector {
 public:
  static WeightVector from_doubles(std::vector<double> values);
  static WeightVector from_rationals(const std::vector<Rational>& values);
  /// Weights given by their squares: v_i = sqrt(sq_i), sq_i >= 0.
  static WeightVector from_squared_rationals(const std::vector<Rational>& squares);
  static WeightVector from_entries(std::vector<WeightEntry> entries);

  /// One weight per line: decimal ("0.25"), rational ("1/4"), or
  /// squared-rational ("sq:1/20" meaning v = sqrt(1/20)). '#' starts a
  /// comment; blank lines are skipped. Throws std::runtime_error carrying
  /// the offending line number on malformed input.
  static WeightVector parse(std::istream& in, const std::string& source_name = "<stream>");
  static WeightVector load_file(const std::string& path);

  std::size_t size() const { return entries_.size(); }
  const WeightEntry& entry(std::size_t i) const { return entries_[i]; }
  double value(std::size_t i) const { return entries_[i].value; }
  const std::vector<WeightEntry>& entries() const { return entries_; }
  std::vector<double> values() const;

  /// True iff every weight was ingested as a rational or terminating decimal.
  bool exact_mode() const;
  /// True iff every weight carries an exact square.
  bool squared_exact_mode() const;

  double norm_sq() const { return norm_sq_; }
  double sum_abs() const { return sum_abs_; }

 private:
  explicit WeightVector(std::vector<WeightEntry> entries);

  std::vector<WeightEntry> entries_;
  double norm_sq_ = 0.0;
  double sum_abs_ = 0.0;
};

}  // namespace radsum
