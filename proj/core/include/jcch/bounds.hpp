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

#ifndef JCCH_BOUNDS_HPP_
#define JCCH_BOUNDS_HPP_

// Brute-force triplet ranking losses and numeric certification of the unary
// upper bounds built on top of them.
//
// With exact, unrescaled coefficients and lambda = 1 the chain
//   triplet loss <= structured bound (q_ist, any margin)
//                <= improved unary bound (q_is, l_c, margin 0)
// holds for every code matrix and every choice of centers, and the
// cross-modal analogue holds per retrieval direction.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "jcch/coefficients.hpp"
#include "jcch/labels.hpp"
#include "jcch/losses.hpp"
#include "jcch/matrix.hpp"

namespace jcch {

inline constexpr std::size_t kDefaultTripletCap = 30;

// sum over i, j != i similar, k dissimilar of g(d(h_i,h_j), d(h_i,h_k), m).
// Throws ValidationError if n exceeds `cap`.
double TripletLossSingle(const Matrix& codes, const LabelMatrix& labels,
                         Metric metric, double margin,
                         std::size_t cap = kDefaultTripletCap);

struct CrossTripletLoss {
  double query1 = 0.0;  // modality-1 anchors against modality-2 items
  double query2 = 0.0;  // modality-2 anchors against modality-1 items
  double total = 0.0;
};

CrossTripletLoss TripletLossCross(const Matrix& codes1, const Matrix& codes2,
                                  const LabelMatrix& labels, Metric metric,
                                  double margin,
                                  std::size_t cap = kDefaultTripletCap);

// sum_i [ sum_{s in Y_i, t not in Y_i} q_ist g(d(h_i,c_s), d(h_i,c_t), m)
//         + sum_{s in Y_i} u_is d(h_i,c_s) ].
double StructuredBound(const Matrix& codes, const LabelMatrix& labels,
                       const FullTripletCoefficients& full,
                       const CenterMatrix& centers, Metric metric,
                       double margin);

// Improved unary bound with lambda = 1 over every item.
double ImprovedBound(const Matrix& codes, const LabelMatrix& labels,
                     const CoefficientSet& coeffs, const CenterMatrix& centers,
                     Metric metric);

struct CrossBound {
  double query1 = 0.0;  // l_c on modality 1, distance term on modality 2
  double query2 = 0.0;
  double total = 0.0;
};

CrossBound CrossModalBound(const Matrix& codes1, const Matrix& codes2,
                           const LabelMatrix& labels,
                           const CoefficientSet& coeffs,
                           const CenterMatrix& centers, Metric metric);

struct BoundReport {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t num_labels = 0;
  std::size_t code_length = 0;
  Metric metric = Metric::kL2;
  // Margin-0 chain.
  double lhs = 0.0;
  double rhs_structured = 0.0;
  double rhs_improved = 0.0;
  double lhs_cross = 0.0;
  double rhs_cross = 0.0;
  // Structured bound at the secondary margin.
  double margin = 0.0;
  double lhs_margin = 0.0;
  double rhs_structured_margin = 0.0;
  double min_slack = 0.0;

  bool ok(double tolerance) const { return min_slack >= -tolerance; }
};

struct CertifySpec {
  std::uint64_t base_seed = 1;
  std::size_t max_n = 20;
  std::size_t max_labels = 5;
  std::size_t max_code_length = 8;
  double margin = 0.5;
  // Multiplies every coefficient before checking; 0.5 is the negative
  // control that must be flagged.
  double coefficient_scale = 1.0;
  double tolerance = 1e-9;
  unsigned threads = 1;
};

struct CertifyResult {
  std::vector<BoundReport> reports;  // ascending seed
  std::size_t violations = 0;
  double min_slack = 0.0;
  std::optional<std::uint64_t> first_violation_seed;

  bool ok() const { return violations == 0; }
};

// One seeded random instance per trial, seeds base_seed .. base_seed+trials-1.
// Sizes, label model, metric (alternating) and geometry are drawn from the
// seed; geometries range from generic Gaussian codes to codes sitting on
// their centers, where the bound is nearly tight.
BoundReport CertifyInstance(std::uint64_t seed, const CertifySpec& spec);
CertifyResult Certify(const CertifySpec& spec, std::size_t trials);

// seed,n,C,r,metric,lhs,rhs7,rhs8,rhs12,min_slack followed by
// margin,lhs_margin,rhs7_margin,lhs_cross.
void WriteCertifyCsv(const CertifyResult& result, std::ostream& out);

}  // namespace jcch

#endif  // JCCH_BOUNDS_HPP_
