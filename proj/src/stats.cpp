#include "psk/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace psk {

double clopper_pearson_upper(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw std::invalid_argument("clopper_pearson_upper: no trials");
  if (successes > trials) throw std::invalid_argument("clopper_pearson_upper: successes > trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("clopper_pearson_upper: confidence must lie in (0, 1)");
  }
  if (successes == trials) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(successes) + 1.0,
                                static_cast<double>(trials - successes), confidence);
}

MeanEstimate mean_estimate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_estimate: empty sample");
  const double n = static_cast<double>(values.size());
  MeanEstimate e;
  for (double v : values) e.mean += v;
  e.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.stddev = std::sqrt(ss / (n - 1.0));
  }
  e.standard_error = e.stddev / std::sqrt(n);
  return e;
}

NormalityTest anderson_darling_normal(std::span<const double> values) {
  if (values.size() < 8) throw std::invalid_argument("anderson_darling_normal: need n >= 8");
  const auto est = mean_estimate(values);
  if (!(est.stddev > 0.0)) throw std::invalid_argument("anderson_darling_normal: zero variance");
  std::vector<double> z(values.begin(), values.end());
  for (double& v : z) v = (v - est.mean) / est.stddev;
  std::sort(z.begin(), z.end());
  const std::size_t n = z.size();
  const auto log_cdf = [](double x) { return std::log(0.5 * std::erfc(-x / std::sqrt(2.0))); };
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 2.0 * static_cast<double>(i) + 1.0;
    acc += w * (log_cdf(z[i]) + log_cdf(-z[n - 1 - i]));
  }
  const double nd = static_cast<double>(n);
  NormalityTest t;
  t.statistic = -nd - acc / nd;
  t.adjusted = t.statistic * (1.0 + 0.75 / nd + 2.25 / (nd * nd));
  const double a = t.adjusted;
  if (a >= 0.6) {
    t.p_value = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
  } else if (a >= 0.34) {
    t.p_value = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
  } else if (a >= 0.2) {
    t.p_value = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
  } else {
    t.p_value = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
  }
  t.p_value = std::clamp(t.p_value, 0.0, 1.0);
  return t;
}

}  // namespace psk
