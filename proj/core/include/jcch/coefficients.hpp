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

#ifndef JCCH_COEFFICIENTS_HPP_
#define JCCH_COEFFICIENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "jcch/labels.hpp"
#include "jcch/matrix.hpp"

namespace jcch {

// Per-item, per-label weights of the unary bound: q_is multiplies the
// center softmax term, u_is the center distance term. Both are zero outside
// an item's own labels.
struct CoefficientSet {
  Matrix q;  // n x C
  Matrix u;  // n x C
  std::size_t anchor_size = 0;
  bool rescaled = false;

  std::size_t n() const { return q.rows(); }
  std::size_t num_labels() const { return q.cols(); }

  friend bool operator==(const CoefficientSet&, const CoefficientSet&) = default;
};

// Full triplet coefficients q_ist (dense n x C x C, only (s in Y_i, t not in
// Y_i) entries may be nonzero) together with u.
struct FullTripletCoefficients {
  std::size_t n = 0;
  std::size_t num_labels = 0;
  std::vector<double> q_full;
  Matrix u;

  FullTripletCoefficients() = default;
  FullTripletCoefficients(std::size_t items, std::size_t labels)
      : n(items),
        num_labels(labels),
        q_full(items * labels * labels, 0.0),
        u(items, labels) {}

  double& q(std::size_t i, std::size_t s, std::size_t t) {
    return q_full[(i * num_labels + s) * num_labels + t];
  }
  double q(std::size_t i, std::size_t s, std::size_t t) const {
    return q_full[(i * num_labels + s) * num_labels + t];
  }

  // q_is = sum over t of q_ist.
  CoefficientSet Reduce() const;
};

struct AnchorSet {
  std::vector<std::size_t> indices;  // sorted, distinct
  std::uint64_t seed = 0;

  // Uniform sample of `size` distinct items out of n, without replacement.
  static AnchorSet Sample(std::size_t n, std::size_t size, std::uint64_t seed);
  // Every item is an anchor; the estimator is then exact.
  static AnchorSet All(std::size_t n);
};

struct EstimateResult {
  CoefficientSet coefficients;
  std::optional<FullTripletCoefficients> full;
};

// Anchor-sampled coefficient estimation.
//
// With Y'[k,t] = 1/|Y_k| on t in Y_k:
//   first pass, every item i, positives p_i / negatives n_i among anchors:
//     A_i[s] = sum_{j in p_i} 1[s in Y_i ^ Y_j] / |Y_i ^ Y_j|
//     B_i[t] = sum_{k in n_i} Y'[k,t]
//     q_ist = (n/l)^2 A_i[s] B_i[t]
//   second pass, every anchor a, positives/negatives among all items:
//     u[j,s] += |n_a| 1[s in Y_a ^ Y_j] / |Y_a ^ Y_j|   for j in p_a
//     u[k,t] += |p_a| Y'[k,t]                            for k in n_a
//     u *= n/l
// Self pairs are never positives. The second pass is evaluated per target
// item with anchors visited in ascending order, so the threaded run is
// bit-identical to the single-threaded one.
//
// Throws ValidationError on an empty or out-of-range anchor set.
EstimateResult EstimateCoefficients(const LabelMatrix& labels,
                                    const AnchorSet& anchors, bool keep_full,
                                    unsigned threads = 1);

// O(n^2) pair sweep of the closed-form sums, independent of the estimator.
FullTripletCoefficients ExactCoefficients(const LabelMatrix& labels);

inline constexpr std::size_t kDefaultBruteForceCap = 200;

// Literal O(n^3) triplet accumulation of 1/(|Y_i ^ Y_j| |Y_k|) per
// (s, t). Throws ValidationError when n exceeds `cap`.
FullTripletCoefficients BruteForceCoefficients(
    const LabelMatrix& labels, std::size_t cap = kDefaultBruteForceCap);

// Divides q and u by M = sum q_is / sum |Y_i| so q averages to one per
// (item, own label). Throws DegenerateError when M == 0.
CoefficientSet Rescale(const CoefficientSet& coeffs, const LabelMatrix& labels);

// Constant-coefficient baseline: q_is = 1/|Y_i|, u_is = 1 on own labels.
CoefficientSet BaselineCoefficients(const LabelMatrix& labels);

enum class SculMode { kMulticlass, kMultilabel };

struct SculConstants {
  double m_ro = 0.0;
  double q = 0.0;
  double u = 0.0;
};

// Constants of the uniform-label unary bound. Multiclass: M = (n/C)^2 (C-1),
// q = 1, u = 2. Multilabel with label rate p and |Y_i| = x:
// M = (C-1) p^2 n^2, q(x) = (C-x)/(C-1) (1-p)^x,
// u(x) = q(x) + (1-p)^2 (1-p^2)^(C-2).
// Throws ValidationError for p outside (0,1) in multilabel mode or C < 2.
SculConstants SculConstantsFor(std::size_t n, std::size_t num_labels, double p,
                            std::size_t label_count, SculMode mode);

// "JCCF" u16 version=1, u32 n, C, l, u8 rescaled, q then u as f64 row-major.
inline constexpr std::uint16_t kCoefficientFormatVersion = 1;
void SaveCoefficients(const CoefficientSet& coeffs,
                      const std::filesystem::path& path);
CoefficientSet LoadCoefficients(const std::filesystem::path& path);

}  // namespace jcch

#endif  // JCCH_COEFFICIENTS_HPP_
