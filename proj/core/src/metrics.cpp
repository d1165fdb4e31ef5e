#include "chorale/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "chorale/errors.hpp"

namespace chorale {

double wasserstein_numeric(const Distribution& p, const Distribution& q) {
  if (p.kind() != SupportKind::numeric || q.kind() != SupportKind::numeric) {
    throw SupportMismatchError("numeric Wasserstein requires two numeric distributions");
  }
  if (p.empty() || q.empty()) throw SupportMismatchError("numeric Wasserstein of an empty distribution");

  const auto& pe = p.numeric_entries();
  const auto& qe = q.numeric_entries();
  std::size_t i = 0;
  std::size_t j = 0;
  double cdf_p = 0;
  double cdf_q = 0;
  double total = 0;
  // Sweep the merged support; between consecutive support points the CDF
  // difference is constant.
  while (i < pe.size() || j < qe.size()) {
    Rational x;
    if (j == qe.size() || (i < pe.size() && pe[i].first <= qe[j].first)) {
      x = pe[i].first;
    } else {
      x = qe[j].first;
    }
    if (i < pe.size() && pe[i].first == x) cdf_p += pe[i++].second;
    if (j < qe.size() && qe[j].first == x) cdf_q += qe[j++].second;

    const bool more = i < pe.size() || j < qe.size();
    if (!more) break;
    Rational next = i == pe.size()                 ? qe[j].first
                    : j == qe.size()               ? pe[i].first
                                                   : std::min(pe[i].first, qe[j].first);
    total += std::abs(cdf_p - cdf_q) * (next - x).to_double();
  }
  return total;
}

double wasserstein_categorical(const Distribution& p, const Distribution& q) {
  if (p.kind() != SupportKind::categorical || q.kind() != SupportKind::categorical) {
    throw SupportMismatchError("categorical Wasserstein requires two categorical distributions");
  }
  const auto& pe = p.categorical_entries();
  const auto& qe = q.categorical_entries();
  std::size_t i = 0;
  std::size_t j = 0;
  double sum = 0;
  while (i < pe.size() || j < qe.size()) {
    if (j == qe.size() || (i < pe.size() && pe[i].first < qe[j].first)) {
      sum += pe[i++].second;
    } else if (i == pe.size() || qe[j].first < pe[i].first) {
      sum += qe[j++].second;
    } else {
      sum += std::abs(pe[i++].second - qe[j++].second);
    }
  }
  return 0.5 * sum;
}

double wasserstein(const Distribution& p, const Distribution& q) {
  if (p.kind() != q.kind()) throw SupportMismatchError("distributions of different support kinds");
  return p.kind() == SupportKind::numeric ? wasserstein_numeric(p, q) : wasserstein_categorical(p, q);
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0) return 1.0;
  double sum = 0;
  double sign = 1;
  for (int k = 1; k < 1'000'000; ++k) {
    const double kk = static_cast<double>(k);
    const double term = 2.0 * std::exp(-2.0 * kk * kk * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) return std::clamp(sum, 0.0, 1.0);
    sign = -sign;
  }
  // Only reachable for lambda below ~3e-6, where the tail is 1 to double precision.
  return 1.0;
}

KSResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw InsufficientSamplesError("Kolmogorov-Smirnov test needs at least two samples per side");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  KSResult r;
  r.statistic = d;
  r.n_a = sa.size();
  r.n_b = sb.size();
  const double ne = na * nb / (na + nb);
  r.approximate = ne < 4.0;
  const double sq = std::sqrt(ne);
  r.p_value = kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d);
  return r;
}

}  // namespace chorale
