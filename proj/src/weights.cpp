#include "radsum/weights.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace radsum {

namespace {

WeightEntry entry_from_rational(const Rational& r) {
  WeightEntry e;
  e.value = r.value();
  e.exact = r;
  auto sq = r.try_mul(r);
  if (sq) e.exact_sq = *sq;
  return e;
}

WeightEntry entry_from_square(const Rational& sq) {
  if (sq.is_negative()) throw std::domain_error("squared weight must be >= 0");
  WeightEntry e;
  e.value = std::sqrt(sq.value());
  e.exact_sq = sq;
  // a perfect dyadic square would also admit an exact value, but detecting
  // rational square roots buys nothing: the sqrt engine is already exact
  return e;
}

}  // namespace

WeightVector::WeightVector(std::vector<WeightEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::domain_error("WeightVector: needs at least one weight");
  long double nsq = 0.0L, sabs = 0.0L;
  for (const auto& e : entries_) {
    if (!std::isfinite(e.value)) throw std::domain_error("WeightVector: non-finite weight");
    nsq += static_cast<long double>(e.value) * e.value;
    sabs += std::fabs(static_cast<long double>(e.value));
  }
  norm_sq_ = static_cast<double>(nsq);
  sum_abs_ = static_cast<double>(sabs);
}

WeightVector WeightVector::from_doubles(std::vector<double> values) {
  std::vector<WeightEntry> es;
  es.reserve(values.size());
  for (double v : values) es.push_back(WeightEntry{v, std::nullopt, std::nullopt});
  return WeightVector(std::move(es));
}

WeightVector WeightVector::from_rationals(const std::vector<Rational>& values) {
  std::vector<WeightEntry> es;
  es.reserve(values.size());
  for (const auto& r : values) es.push_back(entry_from_rational(r));
  return WeightVector(std::move(es));
}

WeightVector WeightVector::from_squared_rationals(const std::vector<Rational>& squares) {
  std::vector<WeightEntry> es;
  es.reserve(squares.size());
  for (const auto& r : squares) es.push_back(entry_from_square(r));
  return WeightVector(std::move(es));
}

WeightVector WeightVector::from_entries(std::vector<WeightEntry> entries) {
  return WeightVector(std::move(entries));
}

std::vector<double> WeightVector::values() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.value);
  return out;
}

bool WeightVector::exact_mode() const {
  for (const auto& e : entries_)
    if (!e.exact) return false;
  return true;
}

bool WeightVector::squared_exact_mode() const {
  for (const auto& e : entries_)
    if (!e.exact_sq) return false;
  return true;
}

WeightVector WeightVector::parse(std::istream& in, const std::string& source_name) {
  std::vector<WeightEntry> es;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string tok = line.substr(b, e - b + 1);

    auto fail = [&](const std::string& why) {
      std::ostringstream os;
      os << source_name << ":" << lineno << ": " << why << ": '" << tok << "'";
      throw std::runtime_error(os.str());
    };

    if (tok.rfind("sq:", 0) == 0) {
      auto r = Rational::parse(tok.substr(3));
      if (!r) fail("malformed squared-rational weight");
      if (r->is_negative()) fail("squared weight must be >= 0");
      es.push_back(entry_from_square(*r));
      continue;
    }
    if (auto r = Rational::parse(tok)) {
      es.push_back(entry_from_rational(*r));
      continue;
    }
    // fall back to a plain double (exponent notation, or digits overflowing
    // the exact representation)
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v)) fail("malformed weight");
    es.push_back(WeightEntry{v, std::nullopt, std::nullopt});
  }
  if (es.empty())
    throw std::runtime_error(source_name + ": no weights found");
  return WeightVector(std::move(es));
}

WeightVector WeightVector::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  return parse(in, path);
}

}  // namespace radsum
