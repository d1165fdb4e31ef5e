#include "chorale/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "chorale/errors.hpp"

namespace chorale {

namespace {

template <typename Value, typename Counts>
std::vector<std::pair<Value, double>> normalize(const Counts& counts) {
  std::int64_t total = 0;
  for (const auto& [_, n] : counts) {
    if (n < 0) throw Error("negative observation count");
    total += n;
  }
  std::vector<std::pair<Value, double>> out;
  if (total == 0) return out;
  for (const auto& [value, n] : counts) {
    if (n > 0) out.emplace_back(value, static_cast<double>(n) / static_cast<double>(total));
  }
  return out;
}

template <typename Entries>
void validate(const Entries& entries) {
  double sum = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double m = entries[i].second;
    if (!(m >= 0.0 && m <= 1.0)) throw Error("distribution mass outside [0, 1]");
    if (i > 0 && !(entries[i - 1].first < entries[i].first)) {
      throw Error("distribution support must be strictly increasing");
    }
    sum += m;
  }
  if (!entries.empty() && std::abs(sum - 1.0) > Distribution::kMassTolerance) {
    throw Error("distribution masses sum to " + std::to_string(sum));
  }
}

template <typename Entries, typename Value>
double lookup(const Entries& entries, const Value& value) noexcept {
  auto it = std::lower_bound(entries.begin(), entries.end(), value,
                             [](const auto& e, const Value& v) { return e.first < v; });
  return it != entries.end() && it->first == value ? it->second : 0.0;
}

}  // namespace

std::string_view to_string(SupportKind kind) noexcept {
  return kind == SupportKind::numeric ? "numeric" : "categorical";
}

Distribution Distribution::from_counts(const NumericCounts& counts) {
  Distribution d(SupportKind::numeric);
  d.numeric_ = normalize<Rational>(counts);
  return d;
}

Distribution Distribution::from_counts(const CategoricalCounts& counts) {
  Distribution d(SupportKind::categorical);
  d.categorical_ = normalize<std::string>(counts);
  return d;
}

Distribution Distribution::from_masses(std::vector<NumericEntry> entries) {
  validate(entries);
  Distribution d(SupportKind::numeric);
  d.numeric_ = std::move(entries);
  return d;
}

Distribution Distribution::from_masses(std::vector<CategoricalEntry> entries) {
  validate(entries);
  Distribution d(SupportKind::categorical);
  d.categorical_ = std::move(entries);
  return d;
}

double Distribution::mass(const Rational& value) const noexcept { return lookup(numeric_, value); }
double Distribution::mass(const std::string& label) const noexcept { return lookup(categorical_, label); }

}  // namespace chorale
