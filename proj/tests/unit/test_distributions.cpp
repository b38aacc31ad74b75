#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "phav/distributions.hpp"
#include "phav/goodness_of_fit.hpp"
#include "phav/rng.hpp"

using namespace phav;

namespace {

// Composite Simpson rule over [lo, hi].
template <typename F>
double simpson(F f, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST(Rng, SameSeedAndStreamGiveSameSequence) {
  RngStream a(123, "world"), b(123, "world");
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentTagsDiverge) {
  RngStream a(123, "world"), b(123, "scene");
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, ForkDoesNotAdvanceParent) {
  RngStream a(9, "root"), b(9, "root");
  auto child = a.fork("child");
  child.next_u64();
  EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.fork("x").next_u64(), RngStream(9, "root").fork("x").next_u64());
}

TEST(Rng, Uniform01InUnitInterval) {
  RngStream r(1, 2);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, UniformIntCoversInclusiveRange) {
  RngStream r(5, 5);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform_int(-2, 3);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 3);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_THROW(r.uniform_int(3, 2), std::invalid_argument);
  EXPECT_THROW(r.uniform_index(0), std::invalid_argument);
}

TEST(Rng, ShuffleIsAPermutation) {
  RngStream r(77, "shuffle");
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  r.shuffle(std::span<int>(w));
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Rng, MixSeedSeparatesIndices) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 10000; ++i) seeds.insert(mix_seed(42, i));
  EXPECT_EQ(seeds.size(), 10000u);
}

TEST(Triangular, RejectsBadParameters) {
  EXPECT_THROW(TriangularParams(1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(TriangularParams(2.0, 1.0, 1.5), std::invalid_argument);
  EXPECT_THROW(TriangularParams(0.0, 1.0, 1.5), std::invalid_argument);
  EXPECT_THROW(TriangularParams(0.0, NAN, 0.5), std::invalid_argument);
  EXPECT_NO_THROW(TriangularParams(0.0, 1.0, 0.0));
  EXPECT_NO_THROW(TriangularParams(0.0, 1.0, 1.0));
}

TEST(Triangular, PdfPeakAndSupport) {
  const TriangularParams p(7.0, 10.0, 9.0);
  EXPECT_DOUBLE_EQ(triangular_pdf(p, 9.0), 2.0 / 3.0);
  EXPECT_EQ(triangular_pdf(p, 6.999), 0.0);
  EXPECT_EQ(triangular_pdf(p, 10.001), 0.0);
  EXPECT_DOUBLE_EQ(triangular_pdf(p, 8.0), 2.0 * 1.0 / (3.0 * 2.0));
  EXPECT_DOUBLE_EQ(triangular_pdf(p, 9.5), 2.0 * 0.5 / (3.0 * 1.0));
}

TEST(Triangular, PdfIntegratesToOneAndMatchesCdf) {
  for (const auto& p : {TriangularParams(7, 10, 9), TriangularParams(0, 1, 0), TriangularParams(0, 1, 1),
                        TriangularParams(-3, 5, 0.25)}) {
    const auto pdf = [&](double x) { return triangular_pdf(p, x); };
    // Integrate piecewise so Simpson never straddles the kink.
    const double left = p.mode() > p.lower() ? simpson(pdf, p.lower(), p.mode()) : 0.0;
    const double right = p.upper() > p.mode() ? simpson(pdf, p.mode(), p.upper()) : 0.0;
    EXPECT_NEAR(left + right, 1.0, 1e-9);
    EXPECT_NEAR(triangular_cdf(p, p.mode()), left, 1e-9);
  }
}

TEST(Triangular, CdfAtModeIsSplitFraction) {
  const TriangularParams p(7.0, 10.0, 9.0);
  EXPECT_DOUBLE_EQ(triangular_cdf(p, 9.0), 2.0 / 3.0);
  EXPECT_EQ(triangular_cdf(p, 7.0), 0.0);
  EXPECT_EQ(triangular_cdf(p, 10.0), 1.0);
  EXPECT_EQ(triangular_cdf(p, -100.0), 0.0);
  EXPECT_EQ(triangular_cdf(p, 100.0), 1.0);
}

TEST(Triangular, QuantileInvertsCdf) {
  RngStream r(3, "q");
  for (const auto& p : {TriangularParams(7, 10, 9), TriangularParams(0, 2, 0), TriangularParams(0, 2, 2)}) {
    for (int i = 0; i < 2000; ++i) {
      const double u = r.uniform01();
      const double x = triangular_quantile(p, u);
      ASSERT_GE(x, p.lower());
      ASSERT_LE(x, p.upper());
      ASSERT_NEAR(triangular_cdf(p, x), u, 1e-12);
    }
  }
}

TEST(Triangular, SampleMeanAndKs) {
  const TriangularParams p(1.0, 10.0, 5.0);
  RngStream r(11, "tri");
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i) xs.push_back(triangular_sample(p, r));
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  // Variance of the triangular law (a^2+b^2+c^2-ab-ac-bc)/18.
  const double var = (1 + 100 + 25 - 10 - 5 - 50) / 18.0;
  EXPECT_NEAR(mean, 16.0 / 3.0, 4.0 * std::sqrt(var / xs.size()));
  const auto ks = gof::ks_test(xs, [&](double x) { return triangular_cdf(p, x); });
  EXPECT_GT(ks.p_value, 0.01);
}

TEST(GoodnessOfFit, KsRejectsWrongDistribution) {
  RngStream r(12, "ks");
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) xs.push_back(r.uniform(7.0, 10.0));
  const TriangularParams p(7.0, 10.0, 9.0);
  EXPECT_LT(gof::ks_test(xs, [&](double x) { return triangular_cdf(p, x); }).p_value, 1e-6);
}

TEST(GoodnessOfFit, KsStatisticOfTinySample) {
  // Single point at 0.5 against U(0,1): D = max(1 - 0.5, 0.5 - 0) = 0.5.
  EXPECT_DOUBLE_EQ(gof::ks_statistic({0.5}, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.5);
}

TEST(GoodnessOfFit, KolmogorovSurvivalKnownValues) {
  // Tabulated critical values of the Kolmogorov distribution.
  EXPECT_NEAR(gof::kolmogorov_survival(1.358), 0.05, 5e-4);
  EXPECT_NEAR(gof::kolmogorov_survival(1.628), 0.01, 2e-4);
  EXPECT_NEAR(gof::kolmogorov_survival(0.0), 1.0, 1e-12);
  EXPECT_LT(gof::kolmogorov_survival(5.0), 1e-15);
}

TEST(GoodnessOfFit, ChiSquareTwoDegreesOfFreedomIsExponential) {
  // Three equiprobable categories, n = 300: survival of chi2(2) is exp(-x/2).
  const std::vector<std::size_t> obs{120, 90, 90};
  const auto r = gof::chi_square_test(obs, {1, 1, 1});
  EXPECT_DOUBLE_EQ(r.degrees_of_freedom, 2.0);
  EXPECT_NEAR(r.statistic, (400.0 + 100.0 + 100.0) / 100.0, 1e-12);
  EXPECT_NEAR(r.p_value, std::exp(-r.statistic / 2.0), 1e-12);
}

TEST(GoodnessOfFit, ChiSquareZeroProbabilityCategory) {
  EXPECT_EQ(gof::chi_square_test({10, 10, 0}, {1, 1, 0}).degrees_of_freedom, 1.0);
  EXPECT_EQ(gof::chi_square_test({10, 10, 1}, {1, 1, 0}).p_value, 0.0);
  EXPECT_THROW(gof::chi_square_test({1, 2}, {1.0}), std::invalid_argument);
}

TEST(Categorical, RejectsDegenerateWeights) {
  EXPECT_THROW(CategoricalWeights({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(CategoricalWeights({1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(CategoricalWeights({1.0, INFINITY}), std::invalid_argument);
}

TEST(Categorical, FrequenciesMatchWeights) {
  const CategoricalWeights w({1.0, 2.0, 0.0, 5.0});
  RngStream r(8, "cat");
  std::vector<std::size_t> counts(4, 0);
  for (int i = 0; i < 40000; ++i) ++counts[categorical_sample(w, r)];
  EXPECT_EQ(counts[2], 0u);
  EXPECT_GT(gof::chi_square_test(counts, w.weights()).p_value, 0.001);
  EXPECT_DOUBLE_EQ(w.probability(3), 5.0 / 8.0);
}

TEST(Categorical, ZeroWeightTailIsNeverReturned) {
  const CategoricalWeights w({1.0, 0.0, 0.0});
  RngStream r(8, "tail");
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(categorical_sample(w, r), 0u);
}

TEST(Bernoulli, EdgeProbabilities) {
  RngStream r(4, "b");
  for (int i = 0; i < 100; ++i) {
    ASSERT_FALSE(bernoulli_sample(0.0, r));
    ASSERT_TRUE(bernoulli_sample(1.0, r));
  }
  EXPECT_THROW(bernoulli_sample(1.5, r), std::invalid_argument);
}

TEST(Uniform, RangeSampling) {
  RngStream r(4, "u");
  EXPECT_EQ(uniform_sample({2.0, 2.0}, r), 2.0);
  EXPECT_THROW(uniform_sample({3.0, 2.0}, r), std::invalid_argument);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform_sample({-1.0, 4.0}, r);
    ASSERT_GE(x, -1.0);
    ASSERT_LT(x, 4.0);
  }
}
