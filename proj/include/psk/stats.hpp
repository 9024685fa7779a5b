#pragma once

#include <cstddef>
#include <span>

namespace psk {

/// Exact (Clopper-Pearson) one-sided upper confidence bound for a binomial
/// proportion with `successes` out of `trials` at the given confidence.
double clopper_pearson_upper(std::size_t successes, std::size_t trials, double confidence);

struct MeanEstimate {
  double mean = 0.0;
  double stddev = 0.0;
  /// stddev / sqrt(n).
  double standard_error = 0.0;
};

MeanEstimate mean_estimate(std::span<const double> values);

struct NormalityTest {
  /// A^2 with mean and variance estimated from the data.
  double statistic = 0.0;
  /// Small-sample adjusted A^2 (1 + 0.75/n + 2.25/n^2).
  double adjusted = 0.0;
  double p_value = 0.0;
};

/// Anderson-Darling test of normality with estimated parameters. Needs n >= 8.
NormalityTest anderson_darling_normal(std::span<const double> values);

}  // namespace psk
