#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chorale/rational.hpp"

namespace chorale {

enum class SupportKind : std::uint8_t { numeric, categorical };

std::string_view to_string(SupportKind kind) noexcept;

/// Raw observation counts, the unit of corpus pooling.
using NumericCounts = std::map<Rational, std::int64_t>;
using CategoricalCounts = std::map<std::string, std::int64_t>;

/// Normalized probability mass over an ordered numeric support or a set of
/// category labels. Entries are unique and sorted (numerically or lexically);
/// a non-empty distribution sums to 1 within 1e-12.
class Distribution {
 public:
  using NumericEntry = std::pair<Rational, double>;
  using CategoricalEntry = std::pair<std::string, double>;

  static constexpr double kMassTolerance = 1e-12;

  explicit Distribution(SupportKind kind = SupportKind::numeric) : kind_(kind) {}

  static Distribution from_counts(const NumericCounts& counts);
  static Distribution from_counts(const CategoricalCounts& counts);

  /// Validating constructors for masses read back from a file. Throws Error
  /// when entries are unsorted, duplicated, negative or do not sum to 1.
  static Distribution from_masses(std::vector<NumericEntry> entries);
  static Distribution from_masses(std::vector<CategoricalEntry> entries);

  SupportKind kind() const noexcept { return kind_; }
  bool empty() const noexcept { return numeric_.empty() && categorical_.empty(); }
  std::size_t size() const noexcept { return numeric_.size() + categorical_.size(); }

  const std::vector<NumericEntry>& numeric_entries() const noexcept { return numeric_; }
  const std::vector<CategoricalEntry>& categorical_entries() const noexcept { return categorical_; }

  /// Mass at a value; 0 when absent or of the other kind.
  double mass(const Rational& value) const noexcept;
  double mass(const std::string& label) const noexcept;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  SupportKind kind_;
  std::vector<NumericEntry> numeric_;
  std::vector<CategoricalEntry> categorical_;
};

template <typename Counts>
void add_counts(Counts& into, const Counts& from) {
  for (const auto& [value, n] : from) into[value] += n;
}

}  // namespace chorale
