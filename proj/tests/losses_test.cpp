/*
 * Copyright 2026 The JCCH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jcch/losses.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "jcch/error.hpp"
#include "jcch/rng.hpp"
#include "test_util.hpp"

namespace jcch {
namespace {

using ::jcch::testing::RandomLabels;
using ::jcch::testing::RandomMatrix;
using ::jcch::testing::ThreeItemLabels;

std::span<const double> Row(const Matrix& m, std::size_t r) { return m.row(r); }

TEST(GHingeTest, Examples) {
  EXPECT_EQ(GHinge(1.5, 1.5, 0.0), 0.0);
  EXPECT_EQ(GHinge(3.0, 1.0, 0.5), 2.5);
  EXPECT_EQ(GHinge(0.0, 2.0, 0.5), 0.0);
}

TEST(GHingeTest, ContractProperties) {
  Rng rng(1);
  for (int t = 0; t < 100000; ++t) {
    double a1 = rng.Normal(0, 2), a2 = rng.Normal(0, 2);
    double b1 = rng.Normal(0, 2), b2 = rng.Normal(0, 2);
    const double m = 2.0 * rng.Uniform();
    if (a1 > a2) std::swap(a1, a2);
    if (b1 > b2) std::swap(b1, b2);
    ASSERT_GE(GHinge(a1, b1, m), 0.0);
    const double da = GHinge(a2, b1, m) - GHinge(a1, b1, m);
    ASSERT_GE(da, 0.0);
    ASSERT_LE(da, a2 - a1 + 1e-12);
    const double db = GHinge(a1, b1, m) - GHinge(a1, b2, m);
    ASSERT_GE(db, 0.0);
    ASSERT_LE(db, b2 - b1 + 1e-12);
  }
}

TEST(DistanceTest, Metrics) {
  const std::vector<double> a = {1, -2, 0}, b = {4, 2, 0};
  EXPECT_DOUBLE_EQ(Distance(a, b, Metric::kL2), 5.0);
  EXPECT_DOUBLE_EQ(Distance(a, b, Metric::kL1), 7.0);
  const std::vector<double> c = {1};
  EXPECT_THROW(Distance(a, c, Metric::kL2), ValidationError);
}

TEST(CenterSoftmaxLossTest, Examples) {
  CenterMatrix one(2, 1);
  one(0, 0) = 3;
  const std::vector<double> h = {0.2, -1};
  EXPECT_DOUBLE_EQ(CenterSoftmaxLoss(h, 0, one, Metric::kL2), 0.0);

  // Centers on a circle around h.
  CenterMatrix ring(2, 4);
  for (std::size_t s = 0; s < 4; ++s) {
    ring(0, s) = 0.2 + std::cos(s * 1.3);
    ring(1, s) = -1 + std::sin(s * 1.3);
  }
  EXPECT_NEAR(CenterSoftmaxLoss(h, 2, ring, Metric::kL2), std::log(4.0), 1e-12);

  CenterMatrix line(1, 2);
  line(0, 1) = 2.0;
  const std::vector<double> zero = {0.0};
  EXPECT_NEAR(CenterSoftmaxLoss(zero, 0, line, Metric::kL2), 0.126928011042973, 1e-12);
}

TEST(CenterSoftmaxLossTest, StableForFarPoints) {
  CenterMatrix line(1, 2);
  line(0, 1) = 2.0;
  const std::vector<double> far = {1e6};
  const double v = CenterSoftmaxLoss(far, 0, line, Metric::kL2);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 2.0 + std::log1p(std::exp(-2.0)), 1e-9);
}

TEST(CenterSoftmaxLossTest, DominatesHinge) {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t r = 1 + rng.UniformInt(6), c = 2 + rng.UniformInt(5);
    const Matrix h = RandomMatrix(1, r, rng.NextU64());
    const CenterMatrix centers(RandomMatrix(r, c, rng.NextU64()));
    const Metric metric = t % 2 ? Metric::kL1 : Metric::kL2;
    const std::size_t s = rng.UniformInt(c);
    for (std::size_t u = 0; u < c; ++u) {
      if (u == s) continue;
      ASSERT_GE(CenterSoftmaxLoss(Row(h, 0), s, centers, metric),
                GHinge(DistanceToCenter(Row(h, 0), centers, s, metric),
                       DistanceToCenter(Row(h, 0), centers, u, metric), 0.0));
    }
  }
}

TEST(CenterSoftmaxLossTest, TranslationInvariant) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const Matrix h = RandomMatrix(1, 5, rng.NextU64());
    const Matrix c = RandomMatrix(5, 4, rng.NextU64());
    std::vector<double> shift(5);
    for (double& v : shift) v = rng.Normal(0, 3);
    std::vector<double> h2(5);
    Matrix c2 = c;
    for (std::size_t k = 0; k < 5; ++k) {
      h2[k] = h(0, k) + shift[k];
      for (std::size_t s = 0; s < 4; ++s) c2(k, s) += shift[k];
    }
    for (Metric metric : {Metric::kL1, Metric::kL2}) {
      EXPECT_NEAR(CenterSoftmaxLoss(Row(h, 0), 1, CenterMatrix(c), metric),
                  CenterSoftmaxLoss(h2, 1, CenterMatrix(c2), metric), 1e-9);
    }
  }
}

CoefficientSet ThreeItemCoefficients() {
  return ExactCoefficients(ThreeItemLabels()).Reduce();
}

TEST(ImprovedUnaryLossTest, ZeroCoefficients) {
  const LabelMatrix labels = ThreeItemLabels();
  CoefficientSet zero{Matrix(3, 3), Matrix(3, 3), 3, false};
  const std::vector<std::size_t> items = {0, 1, 2};
  EXPECT_EQ(ImprovedUnaryLoss(RandomMatrix(3, 2, 1), items, labels, zero,
                              CenterMatrix(RandomMatrix(2, 3, 2)), 0.5, Metric::kL2),
            0.0);
}

TEST(ImprovedUnaryLossTest, SingleLabelSpace) {
  const LabelMatrix labels(1, {{0}});
  CoefficientSet c{Matrix(1, 1), Matrix(1, 1), 1, false};
  c.q(0, 0) = 1.0;
  const std::vector<std::size_t> items = {0};
  EXPECT_EQ(ImprovedUnaryLoss(RandomMatrix(1, 3, 1), items, labels, c,
                              CenterMatrix(RandomMatrix(3, 1, 2)), 0.0, Metric::kL2),
            0.0);
}

TEST(ImprovedUnaryLossTest, ThreeItemHandSum) {
  // One-dimensional codes and centers.
  const LabelMatrix labels = ThreeItemLabels();
  const CoefficientSet c = ThreeItemCoefficients();
  Matrix h(3, 1);
  h(0, 0) = 0.0;
  h(1, 0) = 1.0;
  h(2, 0) = -1.0;
  CenterMatrix centers(1, 3);
  centers(0, 0) = -0.5;
  centers(0, 1) = 0.5;
  centers(0, 2) = 2.0;
  auto lc = [](double x, int s) {
    const double d[3] = {std::abs(x + 0.5), std::abs(x - 0.5), std::abs(x - 2.0)};
    return d[s] + std::log(std::exp(-d[0]) + std::exp(-d[1]) + std::exp(-d[2]));
  };
  const double lambda = 0.3;
  // q_{0,1}=1, q_{1,1}=1; u_{0,1}=1, u_{1,1}=1, u_{2,2}=2.
  const double expected = lc(0.0, 1) + lambda * 0.5 + lc(1.0, 1) + lambda * 0.5 +
                          lambda * 2 * 3.0;
  const std::vector<std::size_t> items = {0, 1, 2};
  EXPECT_NEAR(ImprovedUnaryLoss(h, items, labels, c, centers, lambda, Metric::kL2),
              expected, 1e-12);
}

TEST(BaselineUnaryLossTest, MatchesConstantCoefficients) {
  const LabelMatrix multiclass = testing::BalancedMulticlass(6, 3);
  CoefficientSet ones{Matrix(6, 3), Matrix(6, 3), 6, false};
  for (std::size_t i = 0; i < 6; ++i) ones.q(i, i % 3) = ones.u(i, i % 3) = 1.0;
  const std::vector<std::size_t> items = {0, 2, 5};
  const Matrix h = RandomMatrix(3, 4, 7);
  const CenterMatrix centers(RandomMatrix(4, 3, 8));
  EXPECT_DOUBLE_EQ(BaselineUnaryLoss(h, items, multiclass, centers, 0.2, Metric::kL2),
                   ImprovedUnaryLoss(h, items, multiclass, ones, centers, 0.2, Metric::kL2));

  // lambda = 0: weighted softmax terms only.
  const LabelMatrix labels = ThreeItemLabels();
  const std::vector<std::size_t> all = {0, 1, 2};
  const Matrix h3 = RandomMatrix(3, 2, 9);
  const CenterMatrix c3(RandomMatrix(2, 3, 10));
  double softmax = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t s : labels.LabelsOf(i)) {
      softmax += CenterSoftmaxLoss(Row(h3, i), s, c3, Metric::kL2) / labels.Count(i);
    }
  }
  EXPECT_NEAR(BaselineUnaryLoss(h3, all, labels, c3, 0.0, Metric::kL2), softmax, 1e-12);
  // Differs from the rescaled improved coefficients here.
  const CoefficientSet improved = Rescale(ThreeItemCoefficients(), labels);
  EXPECT_GT(std::abs(BaselineUnaryLoss(h3, all, labels, c3, 0.1, Metric::kL2) -
                     ImprovedUnaryLoss(h3, all, labels, improved, c3, 0.1, Metric::kL2)),
            1e-6);
}

BatchActivations RandomBatch(const LabelMatrix& labels, std::size_t b, std::size_t r,
                             std::uint64_t seed) {
  BatchActivations batch;
  Rng rng(seed);
  for (std::size_t k = 0; k < b; ++k) batch.items.push_back(rng.UniformInt(labels.n()));
  batch.f1 = RandomMatrix(b, r, rng.NextU64());
  batch.f2 = RandomMatrix(b, r, rng.NextU64());
  batch.logits1 = RandomMatrix(b, labels.num_labels(), rng.NextU64());
  batch.logits2 = RandomMatrix(b, labels.num_labels(), rng.NextU64());
  return batch;
}

TEST(CmulTest, SumOfModalities) {
  const LabelMatrix labels = RandomLabels(5, 20, 4);
  const CoefficientSet c = Rescale(ExactCoefficients(labels).Reduce(), labels);
  const CenterMatrix centers(RandomMatrix(6, 4, 2));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BatchActivations batch = RandomBatch(labels, 8, 6, seed);
    for (Metric metric : {Metric::kL1, Metric::kL2}) {
      const double expected =
          ImprovedUnaryLoss(batch.f1, batch.items, labels, c, centers, 0.3, metric) +
          ImprovedUnaryLoss(batch.f2, batch.items, labels, c, centers, 0.3, metric);
      EXPECT_NEAR(Cmul(batch, labels, c, centers, 0.3, metric), expected, 1e-12);
    }
    batch.f2 = batch.f1;
    EXPECT_EQ(Cmul(batch, labels, c, centers, 0.3, Metric::kL2),
              2 * ImprovedUnaryLoss(batch.f1, batch.items, labels, c, centers, 0.3,
                                    Metric::kL2));
  }
  CoefficientSet zero{Matrix(20, 4), Matrix(20, 4), 20, true};
  EXPECT_EQ(Cmul(RandomBatch(labels, 4, 6, 9), labels, zero, centers, 1.0, Metric::kL2), 0.0);
}

TEST(CmulTest, ShapeMismatch) {
  const LabelMatrix labels = RandomLabels(5, 20, 4);
  const CoefficientSet c = ExactCoefficients(labels).Reduce();
  BatchActivations batch = RandomBatch(labels, 8, 6, 1);
  EXPECT_THROW(Cmul(batch, labels, c, CenterMatrix(RandomMatrix(5, 4, 2)), 0.1, Metric::kL2),
               ValidationError);
  batch.f2 = RandomMatrix(7, 6, 2);
  EXPECT_THROW(Cmul(batch, labels, c, CenterMatrix(RandomMatrix(6, 4, 2)), 0.1, Metric::kL2),
               ValidationError);
}

TEST(QuantizationLossTest, Examples) {
  const std::vector<double> ones(7, 1.0);
  EXPECT_EQ(QuantizationLoss(ones).value, 0.0);
  const std::vector<double> e1 = {1.0, 0.0};
  EXPECT_NEAR(QuantizationLoss(e1).value, 1.0 - std::pow(2.0, -2.0 / 3.0), 1e-12);
  const std::vector<double> zero(4, 0.0);
  const GuardedValue z = QuantizationLoss(zero);
  EXPECT_TRUE(z.degenerate);
  EXPECT_EQ(z.value, 1.0);
}

TEST(QuantizationLossTest, SignVectorsAndScaleInvariance) {
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t r = 1 + rng.UniformInt(64);
    const double c = std::exp(rng.Normal(0, 3));
    std::vector<double> s(r), f(r), cf(r);
    for (std::size_t k = 0; k < r; ++k) {
      s[k] = c * (rng.Bernoulli(0.5) ? 1.0 : -1.0);
      f[k] = rng.Normal();
      cf[k] = c * f[k];
    }
    ASSERT_EQ(QuantizationLoss(s).value, 0.0);
    const double lq = QuantizationLoss(f).value;
    ASSERT_NEAR(QuantizationLoss(cf).value, lq, 1e-12);
    ASSERT_GE(lq, -1e-15);
    ASSERT_LE(lq, 1.0 - std::pow(static_cast<double>(r), -2.0 / 3.0) + 1e-12);
  }
}

TEST(QuantizationLossTest, LiteralFormPrefersPositiveVectors) {
  const std::vector<double> mixed = {1.0, -1.0};
  EXPECT_EQ(QuantizationLoss(mixed).value, 0.0);
  EXPECT_GT(QuantizationLoss(mixed, true).value, 0.9);
  const std::vector<double> positive = {1.0, 1.0};
  EXPECT_EQ(QuantizationLoss(positive, true).value, 0.0);
}

TEST(PairingLossTest, Examples) {
  const std::vector<double> a = {1, 2, -1}, a2 = {2, 4, -2}, neg = {-1, -2, 1};
  const std::vector<double> ortho = {2, -1, 0}, zero = {0, 0, 0};
  EXPECT_NEAR(PairingLoss(a2, a).value, 0.0, 1e-15);
  EXPECT_NEAR(PairingLoss(a, ortho).value, 1.0, 1e-15);
  EXPECT_NEAR(PairingLoss(a, neg).value, 2.0, 1e-15);
  EXPECT_TRUE(PairingLoss(a, zero).degenerate);
}

TEST(ClassificationLossTest, Examples) {
  const std::vector<double> uniform = {0.3, 0.3, 0.3, 0.3};
  const std::vector<std::size_t> one = {2};
  EXPECT_NEAR(ClassificationLoss(uniform, one), std::log(4.0), 1e-12);
  const std::vector<double> confident = {0.0, 0.0, 60.0};
  EXPECT_LT(ClassificationLoss(confident, one), 1e-20);
  const std::vector<double> zeros = {0, 0, 0};
  const std::vector<std::size_t> two = {0, 1};
  EXPECT_NEAR(ClassificationLoss(zeros, two), std::log(3.0), 1e-12);
  EXPECT_NEAR(ClassificationLoss(zeros, two), 1.0986, 1e-4);
}

struct ObjectiveFixture {
  LabelMatrix labels = RandomLabels(7, 24, 5);
  CoefficientSet coeffs = Rescale(ExactCoefficients(labels).Reduce(), labels);
  CenterMatrix centers{RandomMatrix(6, 5, 3, 0.7)};
};

TEST(TotalObjectiveTest, EqualsIndependentTerms) {
  ObjectiveFixture fx;
  LossWeights w;
  w.mu = 0.3;
  w.alpha = 0.2;
  w.beta = 0.4;
  w.lambda = 0.05;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BatchActivations batch = RandomBatch(fx.labels, 9, 6, seed);
    const ObjectiveTerms t = TotalObjective(batch, fx.labels, fx.coeffs, fx.centers, w);
    double cls = 0, quant = 0, pair = 0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      auto own = fx.labels.LabelsOf(batch.items[b]);
      cls += ClassificationLoss(Row(batch.logits1, b), own) +
             ClassificationLoss(Row(batch.logits2, b), own);
      quant += QuantizationLoss(Row(batch.f1, b)).value +
               QuantizationLoss(Row(batch.f2, b)).value;
      pair += PairingLoss(Row(batch.f1, b), Row(batch.f2, b)).value;
    }
    const double cmul = Cmul(batch, fx.labels, fx.coeffs, fx.centers, w.lambda, w.metric);
    EXPECT_NEAR(t.cmul, cmul, 1e-12);
    EXPECT_NEAR(t.classification, cls, 1e-12);
    EXPECT_NEAR(t.quantization, quant, 1e-12);
    EXPECT_NEAR(t.pairing, pair, 1e-12);
    EXPECT_NEAR(t.total, cmul + w.mu * cls + w.alpha * quant + w.beta * pair, 1e-11);
  }
}

TEST(TotalObjectiveTest, OnlyCmulWhenOtherWeightsZero) {
  ObjectiveFixture fx;
  LossWeights w;
  w.mu = w.alpha = w.beta = 0.0;
  const BatchActivations batch = RandomBatch(fx.labels, 9, 6, 1);
  EXPECT_NEAR(TotalObjective(batch, fx.labels, fx.coeffs, fx.centers, w).total,
              Cmul(batch, fx.labels, fx.coeffs, fx.centers, w.lambda, w.metric), 1e-12);
}

TEST(TotalObjectiveTest, UnpairedDropsPairing) {
  ObjectiveFixture fx;
  LossWeights w;
  w.beta = 0.0;
  const BatchActivations batch = RandomBatch(fx.labels, 9, 6, 2);
  const ObjectiveTerms t = TotalObjective(batch, fx.labels, fx.coeffs, fx.centers, w);
  EXPECT_EQ(t.pairing, 0.0);
  EXPECT_NEAR(t.total, t.cmul + w.mu * t.classification + w.alpha * t.quantization, 1e-12);
}

TEST(TotalObjectiveTest, PermutationEquivariant) {
  ObjectiveFixture fx;
  LossWeights w;
  const BatchActivations batch = RandomBatch(fx.labels, 9, 6, 3);
  BatchActivations perm = batch;
  const std::vector<std::size_t> order = {4, 0, 8, 2, 7, 1, 3, 6, 5};
  for (std::size_t b = 0; b < order.size(); ++b) {
    perm.items[b] = batch.items[order[b]];
    for (std::size_t k = 0; k < 6; ++k) {
      perm.f1(b, k) = batch.f1(order[b], k);
      perm.f2(b, k) = batch.f2(order[b], k);
    }
    for (std::size_t k = 0; k < 5; ++k) {
      perm.logits1(b, k) = batch.logits1(order[b], k);
      perm.logits2(b, k) = batch.logits2(order[b], k);
    }
  }
  EXPECT_NEAR(TotalObjective(batch, fx.labels, fx.coeffs, fx.centers, w).total,
              TotalObjective(perm, fx.labels, fx.coeffs, fx.centers, w).total, 1e-11);
}

TEST(TotalObjectiveTest, RejectsBadWeights) {
  ObjectiveFixture fx;
  LossWeights w;
  w.alpha = -1.0;
  EXPECT_THROW(TotalObjective(RandomBatch(fx.labels, 3, 6, 1), fx.labels, fx.coeffs,
                              fx.centers, w),
               ValidationError);
}

// Central differences of TotalObjective with respect to every input entry.
double MaxGradientError(const BatchActivations& batch, const LabelMatrix& labels,
                        const CoefficientSet& coeffs, const CenterMatrix& centers,
                        const LossWeights& w) {
  const ObjectiveGradients g = ObjectiveGradient(batch, labels, coeffs, centers, w);
  const double step = 1e-5;
  double worst = 0.0;
  auto check = [&](double& x, double analytic, auto&& eval) {
    const double saved = x;
    x = saved + step;
    const double plus = eval();
    x = saved - step;
    const double minus = eval();
    x = saved;
    const double numeric = (plus - minus) / (2 * step);
    const double rel = std::abs(analytic - numeric) /
                       std::max({std::abs(analytic), std::abs(numeric), 1e-3});
    worst = std::max(worst, rel);
  };
  BatchActivations b = batch;
  CenterMatrix c = centers;
  auto eval = [&] { return TotalObjective(b, labels, coeffs, c, w).total; };
  for (std::size_t k = 0; k < b.f1.size(); ++k) {
    check(b.f1.values()[k], g.f1.values()[k], eval);
    check(b.f2.values()[k], g.f2.values()[k], eval);
  }
  for (std::size_t k = 0; k < b.logits1.size(); ++k) {
    check(b.logits1.values()[k], g.logits1.values()[k], eval);
    check(b.logits2.values()[k], g.logits2.values()[k], eval);
  }
  for (std::size_t k = 0; k < c.matrix().size(); ++k) {
    check(c.matrix().values()[k], g.centers.values()[k], eval);
  }
  return worst;
}

TEST(ObjectiveGradientTest, MatchesFiniteDifferences) {
  ObjectiveFixture fx;
  LossWeights w;
  w.lambda = 0.1;
  w.mu = 0.3;
  w.alpha = 0.5;
  w.beta = 0.4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BatchActivations batch = RandomBatch(fx.labels, 6, 6, 100 + seed);
    EXPECT_LE(MaxGradientError(batch, fx.labels, fx.coeffs, fx.centers, w), 1e-6)
        << "seed " << seed;
  }
}

TEST(ObjectiveGradientTest, PureSoftmaxTerm) {
  ObjectiveFixture fx;
  LossWeights w;
  w.lambda = w.mu = w.alpha = w.beta = 0.0;
  const BatchActivations batch = RandomBatch(fx.labels, 6, 6, 7);
  EXPECT_LE(MaxGradientError(batch, fx.labels, fx.coeffs, fx.centers, w), 1e-6);
}

TEST(ObjectiveGradientTest, ZeroCoefficientsGiveZeroGradients) {
  ObjectiveFixture fx;
  CoefficientSet zero{Matrix(24, 5), Matrix(24, 5), 24, true};
  LossWeights w;
  w.mu = w.alpha = w.beta = 0.0;
  const ObjectiveGradients g =
      ObjectiveGradient(RandomBatch(fx.labels, 6, 6, 8), fx.labels, zero, fx.centers, w);
  for (const Matrix* m : {&g.f1, &g.f2, &g.centers, &g.logits1, &g.logits2}) {
    for (double v : m->values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(ObjectiveGradientTest, QuantizationStationaryAtOnes) {
  ObjectiveFixture fx;
  CoefficientSet zero{Matrix(24, 5), Matrix(24, 5), 24, true};
  LossWeights w;
  w.mu = w.beta = 0.0;
  w.alpha = 1.0;
  BatchActivations batch = RandomBatch(fx.labels, 3, 6, 9);
  batch.f1.Fill(1.0);
  batch.f2.Fill(1.0);
  const ObjectiveGradients g = ObjectiveGradient(batch, fx.labels, zero, fx.centers, w);
  for (double v : g.f1.values()) EXPECT_NEAR(v, 0.0, 1e-15);
  for (double v : g.f2.values()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ObjectiveGradientTest, ValueMatchesTotalObjective) {
  ObjectiveFixture fx;
  LossWeights w;
  w.metric = Metric::kL1;
  const BatchActivations batch = RandomBatch(fx.labels, 6, 6, 10);
  EXPECT_NEAR(ObjectiveGradient(batch, fx.labels, fx.coeffs, fx.centers, w).terms.total,
              TotalObjective(batch, fx.labels, fx.coeffs, fx.centers, w).total, 1e-11);
}

}  // namespace
}  // namespace jcch
