#ifndef WARDTRANS_STATS_HPP
#define WARDTRANS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wardtrans {

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double sum = 0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance needs >= 2 values");
  const double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

inline double sample_sd(const std::vector<double>& xs) {
  return std::sqrt(sample_variance(xs));
}

// Linear-interpolation quantile (R type 7) of an unsorted sample.
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
  if (q < 0 || q > 1) throw std::invalid_argument("quantile level outside [0,1]");
  std::sort(xs.begin(), xs.end());
  const double h = q * (static_cast<double>(xs.size()) - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  return xs[lo] + (h - lo) * (xs[lo + 1] - xs[lo]);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

struct CredibleInterval {
  double lower = 0, upper = 0;
  bool contains(double x) const { return lower <= x && x <= upper; }
};

inline CredibleInterval credible_interval_95(const std::vector<double>& xs) {
  return {quantile(xs, 0.025), quantile(xs, 0.975)};
}

}  // namespace wardtrans

#endif
