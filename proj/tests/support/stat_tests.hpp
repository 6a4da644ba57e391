#ifndef WARDTRANS_TESTS_STAT_TESTS_HPP
#define WARDTRANS_TESTS_STAT_TESTS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <gsl/gsl_cdf.h>

namespace wardtrans::testsupport {

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::fabs((i + 1) / n - f));
    d = std::max(d, std::fabs(f - i / n));
  }
  return d;
}

// Asymptotic Kolmogorov p-value with the small-sample correction from
// Numerical Recipes.
inline double ks_pvalue(double d, std::size_t n) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  double sum = 0;
  double sign = 1;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline double ks_test_pvalue(std::vector<double> sample,
                             const std::function<double(double)>& cdf) {
  const std::size_t n = sample.size();
  return ks_pvalue(ks_statistic(std::move(sample), cdf), n);
}

// Pearson chi-square p-value for observed counts against expected counts.
inline double chi_square_pvalue(const std::vector<double>& observed,
                                const std::vector<double>& expected) {
  double stat = 0;
  int dof = -1;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) continue;
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    ++dof;
  }
  if (dof <= 0) return 1.0;
  return gsl_cdf_chisq_Q(stat, static_cast<double>(dof));
}

inline double beta_cdf(double x, double a, double b) {
  return gsl_cdf_beta_P(x, a, b);
}

inline double exponential_rate_cdf(double x, double rate) {
  return x <= 0 ? 0.0 : 1.0 - std::exp(-rate * x);
}

}  // namespace wardtrans::testsupport

#endif
