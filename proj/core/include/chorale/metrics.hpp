#pragma once

#include <cstddef>
#include <span>

#include "chorale/distribution.hpp"

namespace chorale {

/// 1-D Wasserstein-1 distance: the integral of |F_p - F_q| over the merged
/// sorted support. Throws SupportMismatchError unless both are numeric and
/// non-empty.
double wasserstein_numeric(const Distribution& p, const Distribution& q);

/// Wasserstein distance under the discrete ground metric 1[x != y], i.e.
/// total variation: 0.5 * sum |p_i - q_i| over the union of labels.
/// Throws SupportMismatchError unless both are categorical.
double wasserstein_categorical(const Distribution& p, const Distribution& q);

/// Dispatches on the support kind.
double wasserstein(const Distribution& p, const Distribution& q);

struct KSResult {
  double statistic = 0;
  double p_value = 1;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  bool approximate = false;  // effective sample size below 4
};

/// Asymptotic Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2),
/// clamped to [0, 1].
double kolmogorov_tail(double lambda);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value and the
/// usual small-sample correction to lambda. Throws InsufficientSamplesError
/// for fewer than two samples on either side.
KSResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace chorale
