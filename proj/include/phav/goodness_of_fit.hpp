#pragma once

// Goodness-of-fit statistics used by the statistical checks on the sampler.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace phav::gof {

/// One-sample Kolmogorov-Smirnov statistic D_n = sup |F_n(x) - F(x)|.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic Kolmogorov survival function P(K > x), K = sqrt(n) D_n.
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.3) {
    // Series in 1/x converges faster for small arguments.
    const double pi = 3.14159265358979323846;
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double t = (2.0 * k - 1.0) * pi / (2.0 * x);
      s += std::exp(-0.5 * t * t);
    }
    return 1.0 - std::sqrt(2.0 * pi) / x * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

inline KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  KsResult r;
  r.n = samples.size();
  r.statistic = ks_statistic(std::move(samples), cdf);
  // Stephens' small-sample correction of the asymptotic argument.
  const double sn = std::sqrt(static_cast<double>(r.n));
  r.p_value = kolmogorov_survival((sn + 0.12 + 0.11 / sn) * r.statistic);
  return r;
}

struct ChiSquareResult {
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
};

/// Pearson chi-square test of observed counts against expected probabilities.
/// Categories with zero expected probability must have zero observations and
/// do not contribute degrees of freedom.
inline ChiSquareResult chi_square_test(const std::vector<std::size_t>& observed,
                                       const std::vector<double>& probabilities) {
  if (observed.size() != probabilities.size() || observed.empty())
    throw std::invalid_argument("chi_square_test: size mismatch");
  double n = 0.0;
  for (auto o : observed) n += static_cast<double>(o);
  double p_total = 0.0;
  for (double p : probabilities) p_total += p;

  ChiSquareResult r;
  std::size_t categories = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double p = probabilities[i] / p_total;
    if (p <= 0.0) {
      if (observed[i] != 0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        return r;
      }
      continue;
    }
    const double expected = n * p;
    const double diff = static_cast<double>(observed[i]) - expected;
    r.statistic += diff * diff / expected;
    ++categories;
  }
  r.degrees_of_freedom = static_cast<double>(categories) - 1.0;
  if (r.degrees_of_freedom < 1.0) return r;
  boost::math::chi_squared dist(r.degrees_of_freedom);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace phav::gof
