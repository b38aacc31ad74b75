#pragma once

// Segmental consensus, the two-head multi-task softmax loss with its analytic
// gradient, a finite-difference checker and mixed real/virtual minibatch
// planning.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "phav/motion.hpp"
#include "phav/rng.hpp"

namespace phav::cooltsn {

using json = nlohmann::json;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Source { real, virtual_ };

inline const char* to_string(Source s) { return s == Source::real ? "real" : "virtual"; }

inline Source parse_source(const std::string& s) {
  if (s == "real") return Source::real;
  if (s == "virtual") return Source::virtual_;
  throw std::invalid_argument("unknown source '" + s + "'");
}

/// Per-head K x |C_z| segment scores.
struct SegmentScores {
  MatrixXd real;
  MatrixXd virtual_;
};

/// Per-head vectors: consensus scores, or loss gradients.
struct HeadVectors {
  VectorXd real;
  VectorXd virtual_;

  VectorXd& head(Source s) { return s == Source::real ? real : virtual_; }
  const VectorXd& head(Source s) const { return s == Source::real ? real : virtual_; }
};

struct MultiTaskLabel {
  Source source = Source::real;
  std::size_t cls = 0;
};

struct LossWeights {
  double real = 1.0;
  double virtual_ = 1.0;
  double of(Source s) const { return s == Source::real ? real : virtual_; }
};

/// Mean of the K rows. Rows are summed in order, then divided by K.
inline VectorXd segmental_consensus(const MatrixXd& scores) {
  if (scores.rows() < 1) throw std::invalid_argument("segmental_consensus: K must be at least 1");
  if (!scores.allFinite()) throw std::invalid_argument("segmental_consensus: non-finite score");
  VectorXd g = VectorXd::Zero(scores.cols());
  for (Eigen::Index k = 0; k < scores.rows(); ++k)
    for (Eigen::Index c = 0; c < scores.cols(); ++c) g[c] += scores(k, c);
  for (Eigen::Index c = 0; c < scores.cols(); ++c) g[c] /= static_cast<double>(scores.rows());
  return g;
}

inline HeadVectors segmental_consensus(const SegmentScores& s) {
  HeadVectors g;
  g.real = s.real.size() ? segmental_consensus(s.real) : VectorXd();
  g.virtual_ = s.virtual_.size() ? segmental_consensus(s.virtual_) : VectorXd();
  return g;
}

inline double log_sum_exp(const VectorXd& g) {
  const double m = g.maxCoeff();
  return m + std::log((g.array() - m).exp().sum());
}

inline VectorXd softmax(const VectorXd& g) {
  const VectorXd e = (g.array() - g.maxCoeff()).exp();
  return e / e.sum();
}

namespace detail {

inline const VectorXd& labeled_head(const HeadVectors& g, const MultiTaskLabel& y) {
  const VectorXd& h = g.head(y.source);
  if (h.size() == 0) throw std::invalid_argument(std::string("multitask_loss: empty ") + to_string(y.source) + " head");
  if (y.cls >= static_cast<std::size_t>(h.size()))
    throw std::out_of_range("multitask_loss: class " + std::to_string(y.cls) + " outside the " +
                            to_string(y.source) + " head of size " + std::to_string(h.size()));
  return h;
}

}  // namespace detail

/// w_z * L_z(y, G_z) for the head of the label's source; the other head
/// contributes nothing.
inline double multitask_loss(const HeadVectors& g, const MultiTaskLabel& y, const LossWeights& w) {
  const VectorXd& h = detail::labeled_head(g, y);
  return w.of(y.source) * (log_sum_exp(h) - h[static_cast<Eigen::Index>(y.cls)]);
}

/// Cross entropy without max subtraction; overflows for large scores.
inline double naive_cross_entropy(const VectorXd& g, std::size_t cls) {
  const double z = g.array().exp().sum();
  return -std::log(std::exp(g[static_cast<Eigen::Index>(cls)]) / z);
}

inline HeadVectors loss_gradient(const HeadVectors& g, const MultiTaskLabel& y, const LossWeights& w) {
  const VectorXd& h = detail::labeled_head(g, y);
  HeadVectors d;
  d.real = VectorXd::Zero(g.real.size());
  d.virtual_ = VectorXd::Zero(g.virtual_.size());
  VectorXd& out = d.head(y.source);
  out = w.of(y.source) * softmax(h);
  out[static_cast<Eigen::Index>(y.cls)] -= w.of(y.source);
  return d;
}

struct GradientCheck {
  double max_relative_error = 0.0;
  HeadVectors analytic;
  HeadVectors numeric;
};

namespace detail {

/// Labeled-head loss with entry `i` of head `s` shifted by `delta`, evaluated
/// in extended precision so the finite difference is not dominated by
/// rounding in the log-sum-exp.
inline long double shifted_loss(const HeadVectors& g, const MultiTaskLabel& y, const LossWeights& w, Source s,
                                Eigen::Index i, long double delta) {
  const VectorXd& h = labeled_head(g, y);
  if (s != y.source) return 0.0L;
  std::vector<long double> v(static_cast<std::size_t>(h.size()));
  for (Eigen::Index k = 0; k < h.size(); ++k) v[static_cast<std::size_t>(k)] = h[k];
  v[static_cast<std::size_t>(i)] += delta;
  const long double m = *std::max_element(v.begin(), v.end());
  long double sum = 0.0L;
  for (long double x : v) sum += std::exp(x - m);
  return static_cast<long double>(w.of(y.source)) * (m + std::log(sum) - v[y.cls]);
}

}  // namespace detail

/// Central differences with step h on every entry of both heads, evaluated in
/// extended precision. The relative error |a - n| / max(|a|, |n|) is floored
/// in the denominator at `floor` so entries that are exactly zero on both
/// sides count as exact.
inline GradientCheck check_gradient(const HeadVectors& g, const MultiTaskLabel& y, const LossWeights& w,
                                    double h = 1e-5, double floor = 1e-8) {
  GradientCheck r;
  r.analytic = loss_gradient(g, y, w);
  r.numeric = HeadVectors{VectorXd::Zero(g.real.size()), VectorXd::Zero(g.virtual_.size())};
  const long double step = h;
  for (Source s : {Source::real, Source::virtual_}) {
    for (Eigen::Index i = 0; i < g.head(s).size(); ++i) {
      const long double diff =
          detail::shifted_loss(g, y, w, s, i, step) - detail::shifted_loss(g, y, w, s, i, -step);
      const double n = static_cast<double>(diff / (2.0L * step));
      r.numeric.head(s)[i] = n;
      const double a = r.analytic.head(s)[i];
      const double denom = std::max({std::abs(a), std::abs(n), floor});
      r.max_relative_error = std::max(r.max_relative_error, std::abs(a - n) / denom);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Mixed minibatches

struct SampleRef {
  Source source = Source::real;
  std::string id;
  bool operator==(const SampleRef&) const = default;
};

struct BatchLayout {
  std::size_t blocks = 8;
  std::size_t block_size = 32;
  std::size_t virtual_per_block = 10;

  std::size_t batch_size() const { return blocks * block_size; }
  std::size_t real_per_block() const { return block_size - virtual_per_block; }
};

struct MixedBatchPlan {
  std::vector<std::vector<SampleRef>> blocks;
  double w_real = 0.0;
  double w_virtual = 0.0;
  bool real_with_replacement = false;
  bool virtual_with_replacement = false;

  std::size_t count(Source s) const {
    std::size_t n = 0;
    for (const auto& b : blocks)
      n += static_cast<std::size_t>(std::count_if(b.begin(), b.end(), [s](const SampleRef& r) { return r.source == s; }));
    return n;
  }
  LossWeights weights() const { return {w_real, w_virtual}; }
};

namespace detail {

/// `n` draws from `pool`: without replacement when the pool is large enough.
inline std::vector<std::string> draw(const std::vector<std::string>& pool, std::size_t n, RngStream& rng,
                                     bool& with_replacement) {
  std::vector<std::string> out;
  out.reserve(n);
  with_replacement = pool.size() < n;
  if (with_replacement) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(pool[rng.uniform_index(pool.size())]);
  } else {
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + rng.uniform_index(idx.size() - i);
      std::swap(idx[i], idx[j]);
      out.push_back(pool[idx[i]]);
    }
  }
  return out;
}

}  // namespace detail

/// Batch-level weights w_z = (samples of z) / (batch size).
inline MixedBatchPlan build_minibatch(const std::vector<std::string>& real_pool,
                                      const std::vector<std::string>& virtual_pool, RngStream& rng,
                                      const BatchLayout& layout = {}) {
  if (real_pool.empty()) throw std::invalid_argument("build_minibatch: empty real pool");
  if (virtual_pool.empty()) throw std::invalid_argument("build_minibatch: empty virtual pool");
  if (layout.blocks == 0 || layout.virtual_per_block > layout.block_size)
    throw std::invalid_argument("build_minibatch: bad layout");
  MixedBatchPlan plan;
  const auto reals = detail::draw(real_pool, layout.blocks * layout.real_per_block(), rng, plan.real_with_replacement);
  const auto virts =
      detail::draw(virtual_pool, layout.blocks * layout.virtual_per_block, rng, plan.virtual_with_replacement);
  std::size_t ri = 0, vi = 0;
  for (std::size_t b = 0; b < layout.blocks; ++b) {
    std::vector<SampleRef> block;
    block.reserve(layout.block_size);
    for (std::size_t k = 0; k < layout.virtual_per_block; ++k) block.push_back({Source::virtual_, virts[vi++]});
    for (std::size_t k = 0; k < layout.real_per_block(); ++k) block.push_back({Source::real, reals[ri++]});
    rng.shuffle(std::span<SampleRef>(block));
    plan.blocks.push_back(std::move(block));
  }
  const double total = static_cast<double>(layout.batch_size());
  plan.w_real = static_cast<double>(plan.count(Source::real)) / total;
  plan.w_virtual = static_cast<double>(plan.count(Source::virtual_)) / total;
  return plan;
}

// ---------------------------------------------------------------------------
// loss-check input

struct LossProblem {
  HeadVectors consensus;
  MultiTaskLabel label;
  LossWeights weights;
};

namespace detail {

/// A K x C matrix (reduced by consensus) or a plain C-vector.
inline VectorXd head_from_json(const json& j, const char* name) {
  if (j.is_null()) return {};
  if (!j.is_array()) throw ParseError(std::string("scores.") + name + " must be an array");
  if (j.empty()) return {};
  if (j.front().is_array()) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
        throw ParseError(std::string("scores.") + name + ": ragged matrix");
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return segmental_consensus(m);
  }
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

}  // namespace detail

/// {"scores": {"real": [[..]..], "virtual": [[..]..]},
///  "label": {"source": "real", "class": 0},
///  "weights": {"real": 1, "virtual": 1}}
inline LossProblem loss_problem_from_json(const json& j) {
  LossProblem p;
  try {
    const json& s = j.at("scores");
    p.consensus.real = detail::head_from_json(s.value("real", json()), "real");
    p.consensus.virtual_ = detail::head_from_json(s.value("virtual", json()), "virtual");
    p.label.source = parse_source(j.at("label").at("source").get<std::string>());
    p.label.cls = j.at("label").at("class").get<std::size_t>();
    if (j.contains("weights")) {
      p.weights.real = j["weights"].value("real", 1.0);
      p.weights.virtual_ = j["weights"].value("virtual", 1.0);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("loss problem: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("loss problem: ") + e.what());
  }
  return p;
}

inline json vector_to_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace phav::cooltsn
