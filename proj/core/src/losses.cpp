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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jcch/error.hpp"

namespace jcch {
namespace {

constexpr double kZeroNormGuard = 1e-12;

double Sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void CheckCoverage(std::span<const std::size_t> items, const LabelMatrix& labels,
                   const CoefficientSet& coeffs, const CenterMatrix& centers) {
  if (coeffs.n() != labels.n() || coeffs.num_labels() != labels.num_labels()) {
    throw ValidationError("coefficients do not match the label matrix");
  }
  if (centers.num_labels() != labels.num_labels()) {
    throw ValidationError("center count does not match label count");
  }
  for (std::size_t i : items) {
    if (i >= labels.n()) throw ValidationError("batch item out of range");
  }
}

// Value (and optionally gradient) of the unary terms of one activation row:
//   sum_{s in Y} q_is l_c(h, s) + lambda u_is d(h, c_s).
double UnaryRow(std::span<const double> h, std::size_t item,
                const LabelMatrix& labels, const CoefficientSet& coeffs,
                const CenterMatrix& centers, double lambda, Metric metric,
                std::span<double> grad_h, Matrix* grad_centers,
                std::vector<double>& dist) {
  const std::size_t c = centers.num_labels();
  const std::size_t r = centers.code_length();
  auto own = labels.LabelsOf(item);

  double q_total = 0.0;
  bool any = false;
  for (std::size_t s : own) {
    q_total += coeffs.q(item, s);
    any = any || coeffs.q(item, s) != 0.0 || coeffs.u(item, s) != 0.0;
  }
  if (!any) return 0.0;

  dist.resize(c);
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c; ++j) {
    dist[j] = DistanceToCenter(h, centers, j, metric);
    min_dist = std::min(min_dist, dist[j]);
  }
  double sum_exp = 0.0;
  for (std::size_t j = 0; j < c; ++j) sum_exp += std::exp(min_dist - dist[j]);
  const double lse = -min_dist + std::log(sum_exp);  // log sum exp(-d_j)

  double value = 0.0;
  for (std::size_t s : own) {
    value += coeffs.q(item, s) * (dist[s] + lse) +
             lambda * coeffs.u(item, s) * dist[s];
  }
  if (grad_h.empty() && grad_centers == nullptr) return value;

  for (std::size_t j = 0; j < c; ++j) {
    // d value / d dist_j
    double coef = -q_total * std::exp(-dist[j] - lse);
    if (labels.Has(item, j)) {
      coef += coeffs.q(item, j) + lambda * coeffs.u(item, j);
    }
    if (coef == 0.0) continue;
    for (std::size_t k = 0; k < r; ++k) {
      const double diff = h[k] - centers(k, j);
      double partial = 0.0;
      if (metric == Metric::kL2) {
        partial = dist[j] > 0.0 ? diff / dist[j] : 0.0;
      } else {
        partial = Sign(diff);
      }
      if (!grad_h.empty()) grad_h[k] += coef * partial;
      if (grad_centers != nullptr) (*grad_centers)(k, j) -= coef * partial;
    }
  }
  return value;
}

GuardedValue QuantizationWithGrad(std::span<const double> f, bool literal,
                                  std::span<double> grad, double scale) {
  const double r = static_cast<double>(f.size());
  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return {1.0, true};
  // Sums over f / max|f|, so equal magnitudes give exactly r and r.
  double sum = 0.0;
  double cube_sum = 0.0;
  for (double v : f) {
    const double a = v / peak;
    sum += literal ? a : std::abs(a);
    cube_sum += std::abs(a) * a * a;
  }
  const double norm3 = peak * std::cbrt(cube_sum);
  if (norm3 < kZeroNormGuard) return {1.0, true};
  // (sum / (r^(2/3) ||a||_3))^3 is exactly 1 on sign vectors.
  const double ratio_cubed = sum * sum * sum / (r * r * cube_sum);
  const double value = 1.0 - std::cbrt(ratio_cubed);
  if (!grad.empty()) {
    const double k = std::pow(r, 2.0 / 3.0);  // ||1||_{1.5}
    const double raw_sum = peak * sum;
    const double norm3_4 = norm3 * norm3 * norm3 * norm3;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double ds = literal ? 1.0 : Sign(f[j]);
      const double dn = Sign(f[j]) * f[j] * f[j];
      grad[j] += scale * -(ds / norm3 - raw_sum * dn / norm3_4) / k;
    }
  }
  return {value, false};
}

GuardedValue PairingWithGrad(std::span<const double> a, std::span<const double> b,
                             std::span<double> grad_a, std::span<double> grad_b,
                             double scale) {
  double dot = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  const double na = std::sqrt(aa);
  const double nb = std::sqrt(bb);
  if (na < kZeroNormGuard || nb < kZeroNormGuard) return {1.0, true};
  const double cosine = dot / (na * nb);
  if (!grad_a.empty()) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      grad_a[k] += scale * -(b[k] / (na * nb) - cosine * a[k] / aa);
      grad_b[k] += scale * -(a[k] / (na * nb) - cosine * b[k] / bb);
    }
  }
  return {1.0 - cosine, false};
}

double ClassificationWithGrad(std::span<const double> logits,
                              std::span<const std::size_t> item_labels,
                              std::span<double> grad, double scale) {
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum_exp = 0.0;
  for (double z : logits) sum_exp += std::exp(z - max_logit);
  const double lse = max_logit + std::log(sum_exp);
  const double target = 1.0 / static_cast<double>(item_labels.size());
  double value = 0.0;
  for (std::size_t s : item_labels) value += target * (lse - logits[s]);
  if (!grad.empty()) {
    for (std::size_t j = 0; j < logits.size(); ++j) {
      grad[j] += scale * std::exp(logits[j] - lse);
    }
    for (std::size_t s : item_labels) grad[s] -= scale * target;
  }
  return value;
}

void CheckBatch(const BatchActivations& batch, const LabelMatrix& labels,
                const CoefficientSet& coeffs, const CenterMatrix& centers,
                bool need_logits) {
  CheckCoverage(batch.items, labels, coeffs, centers);
  const std::size_t b = batch.size();
  const std::size_t r = centers.code_length();
  if (batch.f1.rows() != b || batch.f2.rows() != b || batch.f1.cols() != r ||
      batch.f2.cols() != r) {
    throw ValidationError("batch activations do not match batch size / r");
  }
  if (need_logits &&
      (batch.logits1.rows() != b || batch.logits2.rows() != b ||
       batch.logits1.cols() != labels.num_labels() ||
       batch.logits2.cols() != labels.num_labels())) {
    throw ValidationError("batch logits do not match batch size / C");
  }
}

ObjectiveGradients Evaluate(const BatchActivations& batch,
                            const LabelMatrix& labels,
                            const CoefficientSet& coeffs,
                            const CenterMatrix& centers,
                            const LossWeights& weights, bool want_grad) {
  weights.Validate();
  const bool use_logits = weights.mu != 0.0;
  CheckBatch(batch, labels, coeffs, centers, use_logits);
  const std::size_t b = batch.size();
  const std::size_t r = centers.code_length();
  const std::size_t c = centers.num_labels();

  ObjectiveGradients out;
  if (want_grad) {
    out.f1 = Matrix(b, r);
    out.f2 = Matrix(b, r);
    out.centers = Matrix(r, c);
    out.logits1 = Matrix(batch.logits1.rows(), batch.logits1.cols());
    out.logits2 = Matrix(batch.logits2.rows(), batch.logits2.cols());
  }
  Matrix* grad_centers = want_grad ? &out.centers : nullptr;
  ObjectiveTerms& terms = out.terms;
  std::vector<double> scratch;

  for (std::size_t row = 0; row < b; ++row) {
    const std::size_t item = batch.items[row];
    const std::span<double> g1 = want_grad ? out.f1.row(row) : std::span<double>{};
    const std::span<double> g2 = want_grad ? out.f2.row(row) : std::span<double>{};

    terms.cmul += UnaryRow(batch.f1.row(row), item, labels, coeffs, centers,
                           weights.lambda, weights.metric, g1, grad_centers,
                           scratch);
    terms.cmul += UnaryRow(batch.f2.row(row), item, labels, coeffs, centers,
                           weights.lambda, weights.metric, g2, grad_centers,
                           scratch);

    if (use_logits) {
      auto own = labels.LabelsOf(item);
      terms.classification += ClassificationWithGrad(
          batch.logits1.row(row), own,
          want_grad ? out.logits1.row(row) : std::span<double>{}, weights.mu);
      terms.classification += ClassificationWithGrad(
          batch.logits2.row(row), own,
          want_grad ? out.logits2.row(row) : std::span<double>{}, weights.mu);
    }

    if (weights.alpha != 0.0) {
      for (auto [f, g] : {std::pair{batch.f1.row(row), g1},
                          std::pair{batch.f2.row(row), g2}}) {
        const GuardedValue q = QuantizationWithGrad(
            f, weights.literal_quantization, g, weights.alpha);
        terms.quantization += q.value;
        terms.degenerate += q.degenerate ? 1 : 0;
      }
    }

    if (weights.beta != 0.0) {
      const GuardedValue p = PairingWithGrad(batch.f1.row(row),
                                             batch.f2.row(row), g1, g2,
                                             weights.beta);
      terms.pairing += p.value;
      terms.degenerate += p.degenerate ? 1 : 0;
    }
  }
  terms.total = terms.cmul + weights.mu * terms.classification +
                weights.alpha * terms.quantization +
                weights.beta * terms.pairing;
  return out;
}

}  // namespace

const char* MetricName(Metric metric) {
  return metric == Metric::kL1 ? "L1" : "L2";
}

double CenterMatrix::ColumnNorm(std::size_t s) const {
  double total = 0.0;
  for (std::size_t k = 0; k < code_length(); ++k) {
    total += values_(k, s) * values_(k, s);
  }
  return std::sqrt(total);
}

void LossWeights::Validate() const {
  for (double v : {lambda, mu, alpha, beta, margin}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("loss weights must be finite and non-negative");
    }
  }
}

double GHinge(double a, double b, double margin) {
  return std::max(0.0, margin + a - b);
}

double Distance(std::span<const double> a, std::span<const double> b,
                Metric metric) {
  if (a.size() != b.size()) throw ValidationError("distance: length mismatch");
  double total = 0.0;
  if (metric == Metric::kL1) {
    for (std::size_t k = 0; k < a.size(); ++k) total += std::abs(a[k] - b[k]);
    return total;
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    total += d * d;
  }
  return std::sqrt(total);
}

double DistanceToCenter(std::span<const double> h, const CenterMatrix& centers,
                        std::size_t s, Metric metric) {
  double total = 0.0;
  if (metric == Metric::kL1) {
    for (std::size_t k = 0; k < h.size(); ++k) {
      total += std::abs(h[k] - centers(k, s));
    }
    return total;
  }
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double d = h[k] - centers(k, s);
    total += d * d;
  }
  return std::sqrt(total);
}

double CenterSoftmaxLoss(std::span<const double> h, std::size_t s,
                         const CenterMatrix& centers, Metric metric) {
  if (s >= centers.num_labels()) throw ValidationError("label out of range");
  if (h.size() != centers.code_length()) {
    throw ValidationError("code length does not match centers");
  }
  std::vector<double> neg(centers.num_labels());
  for (std::size_t j = 0; j < neg.size(); ++j) {
    neg[j] = -DistanceToCenter(h, centers, j, metric);
  }
  const double shift = *std::max_element(neg.begin(), neg.end());
  double sum_exp = 0.0;
  for (double v : neg) sum_exp += std::exp(v - shift);
  return -(neg[s] - shift - std::log(sum_exp));
}

double ImprovedUnaryLoss(const Matrix& codes, std::span<const std::size_t> items,
                         const LabelMatrix& labels, const CoefficientSet& coeffs,
                         const CenterMatrix& centers, double lambda,
                         Metric metric) {
  CheckCoverage(items, labels, coeffs, centers);
  if (codes.rows() != items.size() || codes.cols() != centers.code_length()) {
    throw ValidationError("codes do not match items / code length");
  }
  double total = 0.0;
  for (std::size_t row = 0; row < items.size(); ++row) {
    const std::size_t i = items[row];
    for (std::size_t s : labels.LabelsOf(i)) {
      const double q = coeffs.q(i, s);
      const double u = coeffs.u(i, s);
      if (q != 0.0) total += q * CenterSoftmaxLoss(codes.row(row), s, centers, metric);
      if (u != 0.0) {
        total += lambda * u * DistanceToCenter(codes.row(row), centers, s, metric);
      }
    }
  }
  return total;
}

double BaselineUnaryLoss(const Matrix& codes, std::span<const std::size_t> items,
                         const LabelMatrix& labels, const CenterMatrix& centers,
                         double lambda, Metric metric) {
  return ImprovedUnaryLoss(codes, items, labels, BaselineCoefficients(labels),
                           centers, lambda, metric);
}

double Cmul(const BatchActivations& batch, const LabelMatrix& labels,
            const CoefficientSet& coeffs, const CenterMatrix& centers,
            double lambda, Metric metric) {
  return ImprovedUnaryLoss(batch.f1, batch.items, labels, coeffs, centers,
                           lambda, metric) +
         ImprovedUnaryLoss(batch.f2, batch.items, labels, coeffs, centers,
                           lambda, metric);
}

GuardedValue QuantizationLoss(std::span<const double> f, bool literal) {
  if (f.empty()) throw ValidationError("quantization loss of an empty vector");
  return QuantizationWithGrad(f, literal, {}, 0.0);
}

GuardedValue PairingLoss(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("pairing: length mismatch");
  return PairingWithGrad(a, b, {}, {}, 0.0);
}

double ClassificationLoss(std::span<const double> logits,
                          std::span<const std::size_t> item_labels) {
  if (item_labels.empty()) {
    throw ValidationError("classification loss needs at least one label");
  }
  for (std::size_t s : item_labels) {
    if (s >= logits.size()) throw ValidationError("label out of range");
  }
  return ClassificationWithGrad(logits, item_labels, {}, 0.0);
}

ObjectiveTerms TotalObjective(const BatchActivations& batch,
                              const LabelMatrix& labels,
                              const CoefficientSet& coeffs,
                              const CenterMatrix& centers,
                              const LossWeights& weights) {
  return Evaluate(batch, labels, coeffs, centers, weights, false).terms;
}

ObjectiveGradients ObjectiveGradient(const BatchActivations& batch,
                                     const LabelMatrix& labels,
                                     const CoefficientSet& coeffs,
                                     const CenterMatrix& centers,
                                     const LossWeights& weights) {
  return Evaluate(batch, labels, coeffs, centers, weights, true);
}

}  // namespace jcch
