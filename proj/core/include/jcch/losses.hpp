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

#ifndef JCCH_LOSSES_HPP_
#define JCCH_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "jcch/coefficients.hpp"
#include "jcch/labels.hpp"
#include "jcch/matrix.hpp"

namespace jcch {

enum class Metric { kL1, kL2 };

const char* MetricName(Metric metric);

// r x C semantic cluster centers, column s is c_s. One instance is shared by
// both modality encoders.
class CenterMatrix {
 public:
  CenterMatrix() = default;
  CenterMatrix(std::size_t code_length, std::size_t num_labels)
      : values_(code_length, num_labels) {}
  explicit CenterMatrix(Matrix values) : values_(std::move(values)) {}

  std::size_t code_length() const { return values_.rows(); }
  std::size_t num_labels() const { return values_.cols(); }

  double& operator()(std::size_t k, std::size_t s) { return values_(k, s); }
  double operator()(std::size_t k, std::size_t s) const { return values_(k, s); }

  double ColumnNorm(std::size_t s) const;

  Matrix& matrix() { return values_; }
  const Matrix& matrix() const { return values_; }

  friend bool operator==(const CenterMatrix&, const CenterMatrix&) = default;

 private:
  Matrix values_;
};

struct LossWeights {
  double lambda = 0.01;  // center-distance term
  double mu = 0.1;       // classification
  double alpha = 0.1;    // quantization
  double beta = 0.2;     // pairing, 0 for unpaired data
  double margin = 0.0;   // hinge margin of the triplet g-function
  Metric metric = Metric::kL2;
  // Use sum(f) instead of sum(|f|) in the quantization numerator.
  bool literal_quantization = false;

  void Validate() const;
};

// max(0, m + a - b).
double GHinge(double a, double b, double margin);

double Distance(std::span<const double> a, std::span<const double> b,
                Metric metric);
double DistanceToCenter(std::span<const double> h, const CenterMatrix& centers,
                        std::size_t s, Metric metric);

// -log softmax(-d(h, c_.))_s, evaluated with the max shift.
double CenterSoftmaxLoss(std::span<const double> h, std::size_t s,
                         const CenterMatrix& centers, Metric metric);

// Rows of `codes` belong to items[b]; coefficients and labels are indexed by
// those item ids.
//   sum_b sum_{s in Y} q_is l_c(h_b, s) + lambda u_is d(h_b, c_s)
double ImprovedUnaryLoss(const Matrix& codes, std::span<const std::size_t> items,
                         const LabelMatrix& labels, const CoefficientSet& coeffs,
                         const CenterMatrix& centers, double lambda,
                         Metric metric);

// ImprovedUnaryLoss with q_is = 1/|Y_i| and u_is = 1.
double BaselineUnaryLoss(const Matrix& codes, std::span<const std::size_t> items,
                         const LabelMatrix& labels, const CenterMatrix& centers,
                         double lambda, Metric metric);

struct BatchActivations {
  Matrix f1;       // b x r, modality-1 hash layer
  Matrix f2;       // b x r, modality-2 hash layer
  Matrix logits1;  // b x C
  Matrix logits2;  // b x C
  std::vector<std::size_t> items;

  std::size_t size() const { return items.size(); }
};

// Cross-modal unary loss: the unary loss of each modality's activations
// against the shared centers.
double Cmul(const BatchActivations& batch, const LabelMatrix& labels,
            const CoefficientSet& coeffs, const CenterMatrix& centers,
            double lambda, Metric metric);

struct GuardedValue {
  double value = 0.0;
  bool degenerate = false;
};

// 1 - sum|f| / (r^(2/3) ||f||_3). A vector with ||f||_3 < 1e-12 yields 1 and
// the degenerate flag.
GuardedValue QuantizationLoss(std::span<const double> f, bool literal = false);

// 1 - cos(a, b). A zero vector yields 1 and the degenerate flag.
GuardedValue PairingLoss(std::span<const double> a, std::span<const double> b);

// Cross-entropy of softmax(logits) against the uniform distribution on the
// item's labels.
double ClassificationLoss(std::span<const double> logits,
                          std::span<const std::size_t> item_labels);

struct ObjectiveTerms {
  double cmul = 0.0;
  double classification = 0.0;  // unweighted sum over both modalities
  double quantization = 0.0;    // unweighted sum over both modalities
  double pairing = 0.0;         // unweighted sum
  double total = 0.0;           // cmul + mu*cls + alpha*quant + beta*pair
  std::size_t degenerate = 0;
};

// Full relaxed objective summed over the batch.
ObjectiveTerms TotalObjective(const BatchActivations& batch,
                              const LabelMatrix& labels,
                              const CoefficientSet& coeffs,
                              const CenterMatrix& centers,
                              const LossWeights& weights);

struct ObjectiveGradients {
  Matrix f1;
  Matrix f2;
  Matrix centers;  // r x C
  Matrix logits1;
  Matrix logits2;
  ObjectiveTerms terms;
};

// Analytic gradients of TotalObjective. Distance kinks (h == c_s under L2,
// ties under L1) and |f_j| at zero take a zero subgradient.
ObjectiveGradients ObjectiveGradient(const BatchActivations& batch,
                                     const LabelMatrix& labels,
                                     const CoefficientSet& coeffs,
                                     const CenterMatrix& centers,
                                     const LossWeights& weights);

}  // namespace jcch

#endif  // JCCH_LOSSES_HPP_
