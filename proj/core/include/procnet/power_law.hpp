#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace procnet {

struct PowerLawFit {
  double alpha = 0.0;
  std::int64_t xmin = 1;
  std::size_t n_tail = 0;
  double ks_distance = 0.0;
};

/// Hurwitz zeta function sum_{k>=0} (k+q)^-s for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

/// Discrete maximum-likelihood alpha for observations >= xmin.
double discrete_power_law_mle(std::span<const std::int64_t> sorted_tail, std::int64_t xmin);

/// Discrete power-law fit: for each candidate xmin (distinct observed values
/// leaving at least `min_tail` observations in the tail) the exact discrete MLE
/// of alpha is found numerically, and the xmin minimizing the KS distance
/// between empirical and fitted tail CDFs wins. Ties go to the smaller xmin.
///
/// Throws DataError("no tail to fit") for constant or too-short sequences and
/// for non-positive values.
PowerLawFit fit_power_law(std::span<const std::int64_t> values, std::size_t min_tail = 10);

}  // namespace procnet
