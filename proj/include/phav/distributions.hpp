#pragma once

// Primitive samplers behind every stochastic choice of the scenario model:
// triangular, categorical, Bernoulli and bounded uniform.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "phav/rng.hpp"

namespace phav {

/// Triangular distribution on [lower, upper] with most likely value `mode`.
/// Degenerate modes (mode == lower or mode == upper) are allowed; an empty
/// support (lower == upper) is not.
class TriangularParams {
 public:
  TriangularParams(double lower, double upper, double mode) : a_(lower), b_(upper), c_(mode) {
    if (!std::isfinite(a_) || !std::isfinite(b_) || !std::isfinite(c_))
      throw std::invalid_argument("triangular: non-finite parameter");
    if (!(a_ < b_))
      throw std::invalid_argument("triangular: lower must be < upper (got " + std::to_string(a_) +
                                  ", " + std::to_string(b_) + ")");
    if (c_ < a_ || c_ > b_)
      throw std::invalid_argument("triangular: mode outside [lower, upper]");
  }

  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  double mode() const noexcept { return c_; }
  double mean() const noexcept { return (a_ + b_ + c_) / 3.0; }

  bool operator==(const TriangularParams&) const = default;

 private:
  double a_, b_, c_;
};

/// Piecewise density with the x == mode branch evaluated explicitly.
inline double triangular_pdf(const TriangularParams& p, double x) {
  const double a = p.lower(), b = p.upper(), c = p.mode();
  if (x < a) return 0.0;
  if (x < c) return 2.0 * (x - a) / ((b - a) * (c - a));
  if (x == c) return 2.0 / (b - a);
  if (x <= b) return 2.0 * (b - x) / ((b - a) * (b - c));
  return 0.0;
}

inline double triangular_cdf(const TriangularParams& p, double x) {
  const double a = p.lower(), b = p.upper(), c = p.mode();
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  if (x <= c) return (x - a) * (x - a) / ((b - a) * (c - a));
  return 1.0 - (b - x) * (b - x) / ((b - a) * (b - c));
}

/// Inverse CDF. u is clamped to [0, 1].
inline double triangular_quantile(const TriangularParams& p, double u) {
  const double a = p.lower(), b = p.upper(), c = p.mode();
  u = std::clamp(u, 0.0, 1.0);
  const double split = (c - a) / (b - a);
  if (u < split) return a + std::sqrt(u * (b - a) * (c - a));
  return b - std::sqrt((1.0 - u) * (b - a) * (b - c));
}

inline double triangular_sample(const TriangularParams& p, RngStream& rng) {
  return triangular_quantile(p, rng.uniform01());
}

/// Non-negative weights of a categorical distribution; normalized on use.
class CategoricalWeights {
 public:
  CategoricalWeights() = default;

  explicit CategoricalWeights(std::vector<double> weights) : w_(std::move(weights)) {
    bool any_positive = false;
    for (double w : w_) {
      if (!std::isfinite(w) || w < 0.0)
        throw std::invalid_argument("categorical: weights must be finite and non-negative");
      any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) throw std::invalid_argument("categorical: all weights are zero");
  }

  std::size_t size() const noexcept { return w_.size(); }
  const std::vector<double>& weights() const noexcept { return w_; }
  double total() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }
  double probability(std::size_t i) const { return w_.at(i) / total(); }

 private:
  std::vector<double> w_;
};

/// Draws index i with probability w_i / sum(w). Zero-weight indices are never
/// returned, including under floating-point edge cases at the upper end.
inline std::size_t categorical_sample(const CategoricalWeights& w, RngStream& rng) {
  const auto& ws = w.weights();
  if (ws.empty()) throw std::invalid_argument("categorical: no weights");
  const double u = rng.uniform01() * w.total();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (ws[i] <= 0.0) continue;
    cumulative += ws[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

inline bool bernoulli_sample(double prob, RngStream& rng) {
  if (!(prob >= 0.0 && prob <= 1.0))
    throw std::invalid_argument("bernoulli: probability must lie in [0, 1]");
  if (prob == 0.0) return false;
  if (prob == 1.0) return true;
  return rng.uniform01() < prob;
}

/// Closed bounded interval used for configurable parameter ranges.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool valid() const noexcept { return std::isfinite(lo) && std::isfinite(hi) && lo <= hi; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool operator==(const Range&) const = default;
};

inline double uniform_sample(const Range& r, RngStream& rng) {
  if (!r.valid()) throw std::invalid_argument("uniform: invalid range");
  return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi);
}

}  // namespace phav
