// SPDX-License-Identifier: Apache-2.0
#include "wtc/error.hpp"
#include "wtc/linalg.hpp"
#include "wtc/weights.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include <cmath>
#include <random>

using namespace wtc;

namespace {

Rank1Weight random_weight(const Shape& s, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> ud(0.05, 1.5);
  std::vector<Vector> f;
  for (Index d : s.dims()) {
    Vector v(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = ud(gen);
    f.push_back(v);
  }
  return Rank1Weight(std::move(f), 1e-6);
}

SamplingPattern block_mask(const Shape& s, std::uint64_t seed) {
  const BlockProfile p = scale_block_profile(s, {std::vector<double>(s.order(), 1.0),
                                                 std::vector<double>(s.order(), 0.4)},
                                             0.3);
  return bernoulli_pattern(block_rank1_probability(s, p.u, p.v), seed);
}

void expect_nonincreasing(const std::vector<double>& obj) {
  for (std::size_t i = 1; i < obj.size(); ++i)
    EXPECT_LE(obj[i], obj[i - 1] * (1 + 1e-12)) << "sweep " << i;
}

}  // namespace

TEST(Rank1Weight, DenseAndValues) {
  std::mt19937_64 gen(31);
  const Rank1Weight w = random_weight(Shape{3, 4, 2}, gen);
  const DenseTensor d = w.dense();
  EXPECT_EQ(d, oracle::dense_weight(w));
  long double total = 0.0L;
  for (Index i = 0; i < d.size(); ++i) {
    EXPECT_EQ(w.value_at(i), d[i]);
    total += d[i];
  }
  EXPECT_NEAR(w.total(), static_cast<double>(total), 1e-13 * w.total());
  const std::vector<Index> idx{2, 1, 1};
  EXPECT_EQ(w.value(idx), d.at({2, 1, 1}));
  const DenseTensor half = w.dense(0.5);
  for (Index i = 0; i < d.size(); ++i) EXPECT_NEAR(half[i] * half[i], d[i], 1e-15);
}

TEST(Rank1Weight, FloorEnforced) {
  EXPECT_THROW(Rank1Weight({Vector::Ones(2)}, 0.0), ArgumentError);
  Vector v = Vector::Ones(3);
  v(1) = 1e-8;
  EXPECT_THROW(Rank1Weight({v}, 1e-6), DomainError);
  EXPECT_EQ(Rank1Weight::ones(Shape{2, 3}).dense(), DenseTensor::ones(Shape{2, 3}));
}

TEST(FitWeight, FullPatternGivesOnes) {
  const Shape s{4, 5, 3};
  const WeightFit fit = fit_rank1_weight(SamplingPattern::full(s));
  EXPECT_TRUE(fit.converged);
  EXPECT_LE(fit.objective.back(), 1e-12);
  const DenseTensor d = fit.weight.dense();
  for (double x : d.values()) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(FitWeight, TwoByTwoSupport) {
  const Shape s{2, 2};
  const SamplingPattern p = SamplingPattern::from_multi_indices(s, {{0, 0}, {1, 0}});
  const WeightFit fit = fit_rank1_weight(p);
  const DenseTensor d = fit.weight.dense();
  EXPECT_NEAR(d.at({0, 0}), 1.0, 1e-6);
  EXPECT_NEAR(d.at({1, 0}), 1.0, 1e-6);
  EXPECT_NEAR(d.at({0, 1}), 1e-6, 1e-6);
  EXPECT_NEAR(d.at({1, 1}), 1e-6, 1e-6);
  for (double x : d.values()) EXPECT_GT(x, 0.0);
}

TEST(FitWeight, BeatsConstantBaseline) {
  const Shape s{10, 10, 10};
  const SamplingPattern p = uniform_pattern(s, 0.3, 5);
  const WeightFit fit = fit_rank1_weight(p);
  const DenseTensor mask = oracle::mask(p);
  DenseTensor c(s, 0.3);
  const double baseline = oracle::dense_frobenius(c - mask);
  EXPECT_LE(fit.objective.back(), baseline);
  EXPECT_NEAR(weight_fit_objective(fit.weight, p), oracle::dense_frobenius(fit.weight.dense() - mask),
              1e-12 * baseline);
}

TEST(FitWeight, MonotoneAndFloored) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Shape s{12, 9, 7};
    for (const SamplingPattern& p : {uniform_pattern(s, 0.2, seed), block_mask(s, seed)}) {
      WeightFitOptions opts;
      opts.tol = 0.0;
      opts.max_iters = 30;
      const WeightFit fit = fit_rank1_weight(p, opts);
      ASSERT_EQ(fit.objective.size(), fit.sweeps + 1);
      expect_nonincreasing(fit.objective);
      for (const auto& f : fit.weight.factors()) EXPECT_GE(f.minCoeff(), opts.floor);
      const DenseTensor w = fit.weight.dense();
      EXPECT_GE(*std::min_element(w.values().begin(), w.values().end()), opts.floor);
    }
  }
}

TEST(FitWeight, RecoversRank1Probabilities) {
  const Shape s{30, 30, 30};
  const BlockProfile prof{{1, 1, 1}, {0.4, 0.4, 0.4}};
  const DenseTensor h = block_rank1_probability(s, prof.u, prof.v);
  const WeightFit fit = fit_rank1_weight(bernoulli_pattern(h, 9));
  const DenseTensor w = fit.weight.dense();
  EXPECT_LE(oracle::dense_frobenius(w - h) / oracle::dense_frobenius(h), 0.05);
}

TEST(FitWeight, ModePermutationInvariant) {
  const Shape s{6, 8, 5};
  const SamplingPattern p = block_mask(s, 3);
  std::vector<std::vector<Index>> permuted;
  for (const auto& idx : p.multi_indices()) permuted.push_back({idx[2], idx[0], idx[1]});
  const SamplingPattern q = SamplingPattern::from_multi_indices(Shape{5, 6, 8}, permuted);
  WeightFitOptions opts;
  opts.tol = 0.0;
  opts.max_iters = 200;
  const double a = fit_rank1_weight(p, opts).objective.back();
  const double b = fit_rank1_weight(q, opts).objective.back();
  EXPECT_NEAR(a, b, 1e-9 * a);
}

TEST(FitWeight, Errors) {
  EXPECT_THROW(fit_rank1_weight(SamplingPattern::empty(Shape{3, 3})), ArgumentError);
  WeightFitOptions opts;
  opts.floor = 0.0;
  EXPECT_THROW(fit_rank1_weight(SamplingPattern::full(Shape{3, 3}), opts), ArgumentError);
}

TEST(Mu, Examples) {
  const Shape s{4, 3};
  EXPECT_EQ(mu_global(Rank1Weight::ones(s), SamplingPattern::full(s)), 1.0);
  Vector f(2);
  f << 1.0, 0.25;
  EXPECT_EQ(mu_global(Rank1Weight({f}, 1e-6), SamplingPattern::full(Shape{2})), 2.0);
  EXPECT_THROW(mu_global(Rank1Weight::ones(s), SamplingPattern::empty(s)), ArgumentError);
  EXPECT_THROW(mu_global(Rank1Weight::ones(s), SamplingPattern::full(Shape{3, 4})), ArgumentError);

  EXPECT_DOUBLE_EQ(mu_mode(Rank1Weight::ones(s), SamplingPattern::full(s), 0), std::sqrt(4.0));
  EXPECT_DOUBLE_EQ(mu_mode(Rank1Weight::ones(s), SamplingPattern::full(s), 1), std::sqrt(4.0));
  EXPECT_DOUBLE_EQ(mu_mode(Rank1Weight::ones(Shape{2, 7}), SamplingPattern::full(Shape{2, 7}), 0),
                   std::sqrt(7.0));
  EXPECT_EQ(mu_mode(Rank1Weight::ones(s), SamplingPattern::empty(s), 1), 0.0);
  EXPECT_THROW(mu_mode(Rank1Weight::ones(s), SamplingPattern::full(s), 2), ArgumentError);
}

TEST(Mu, MatchesDenseOracle) {
  std::mt19937_64 gen(32);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Shape s{10, 7, 9};
    const Rank1Weight w = random_weight(s, gen);
    const SamplingPattern p = uniform_pattern(s, 0.35, seed);
    const double g = oracle::mu_global(w, p);
    EXPECT_NEAR(mu_global(w, p), g, 1e-10 * g);
    for (Index k = 0; k < 3; ++k) {
      const double m = oracle::mu_mode(w, p, k);
      EXPECT_NEAR(mu_mode(w, p, k), m, 1e-10 * m);
    }
  }
}

TEST(Lambda, Examples) {
  const Shape s{4, 3, 2};
  EXPECT_NEAR(lambda_mode(Rank1Weight::ones(s), SamplingPattern::full(s), 1), 0.0, 1e-15);
  std::mt19937_64 gen(33);
  const Rank1Weight w = random_weight(s, gen);
  double expect = 1.0;
  for (const auto& f : w.factors()) expect *= std::sqrt(f.sum());
  for (Index k = 0; k < 3; ++k)
    EXPECT_NEAR(lambda_mode(w, SamplingPattern::empty(s), k), expect, 1e-10 * expect);
  EXPECT_THROW(lambda_mode(w, SamplingPattern::empty(s), 3), ArgumentError);
}

TEST(Lambda, MatchesDenseOracle) {
  std::mt19937_64 gen(34);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Shape s{10, 10, 10};
    const Rank1Weight w = random_weight(s, gen);
    const SamplingPattern p = block_mask(s, seed);
    const DenseTensor d = oracle::discrepancy(w, p);
    const DenseTensor got = weight_discrepancy(w, p);
    EXPECT_LE(oracle::dense_frobenius(got - d), 1e-12 * oracle::dense_frobenius(d));
    const double fro = oracle::dense_frobenius(d);
    EXPECT_NEAR(discrepancy_frobenius(w, p), fro, 1e-10 * fro);
    for (Index k = 0; k < 3; ++k) {
      const double ref = oracle::spectral_norm(oracle::unfold(d, k));
      EXPECT_NEAR(lambda_mode(w, p, k), ref, 1e-10 * ref);
    }
  }
}

TEST(ReciprocalMismatch, ZeroForExactIndicator) {
  const Shape s{3, 3};
  EXPECT_NEAR(reciprocal_mismatch(Rank1Weight::ones(s), SamplingPattern::full(s)), 0.0, 1e-15);
  std::mt19937_64 gen(35);
  const Rank1Weight w = random_weight(s, gen);
  const SamplingPattern p = uniform_pattern(s, 0.5, 1);
  const DenseTensor dw = oracle::dense_weight(w);
  DenseTensor r = dw;
  for (Index off : p.offsets()) r[off] -= 1.0 / dw[off];
  EXPECT_NEAR(reciprocal_mismatch(w, p), oracle::dense_frobenius(r), 1e-12);
}
