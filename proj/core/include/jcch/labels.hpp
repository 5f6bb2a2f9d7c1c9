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

#ifndef JCCH_LABELS_HPP_
#define JCCH_LABELS_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace jcch {

// n x C binary label assignments, one bit per (item, label). Rows are packed
// into 64-bit words so similarity tests are a handful of ANDs.
//
// Invariants: n >= 1, C >= 1, every row has at least one label.
class LabelMatrix {
 public:
  LabelMatrix() = default;

  // Builds from per-item label lists (0-based label ids). Throws
  // ValidationError on an empty row, an out-of-range label or n == 0.
  LabelMatrix(std::size_t num_labels,
              const std::vector<std::vector<std::size_t>>& rows);

  // Builds from a dense 0/1 matrix given row-major.
  static LabelMatrix FromDense(std::size_t n, std::size_t num_labels,
                               std::span<const std::uint8_t> dense);

  std::size_t n() const { return n_; }
  std::size_t num_labels() const { return num_labels_; }

  bool Has(std::size_t i, std::size_t s) const {
    return (words_[i * words_per_row_ + s / 64] >> (s % 64)) & 1U;
  }
  std::size_t Count(std::size_t i) const { return counts_[i]; }
  std::span<const std::size_t> LabelsOf(std::size_t i) const {
    return {label_ids_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::size_t IntersectionCount(std::size_t i, std::size_t j) const {
    std::size_t total = 0;
    const std::uint64_t* a = &words_[i * words_per_row_];
    const std::uint64_t* b = &words_[j * words_per_row_];
    for (std::size_t w = 0; w < words_per_row_; ++w) {
      total += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
    }
    return total;
  }

  // True iff items i and j share at least one label. Unchecked; see
  // Similar() for the validated entry point.
  bool SimilarUnchecked(std::size_t i, std::size_t j) const {
    const std::uint64_t* a = &words_[i * words_per_row_];
    const std::uint64_t* b = &words_[j * words_per_row_];
    for (std::size_t w = 0; w < words_per_row_; ++w) {
      if (a[w] & b[w]) return true;
    }
    return false;
  }

  std::size_t TotalLabelCount() const { return label_ids_.size(); }

  LabelMatrix Subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const LabelMatrix& a, const LabelMatrix& b) {
    return a.n_ == b.n_ && a.num_labels_ == b.num_labels_ &&
           a.words_ == b.words_;
  }

 private:
  void BuildIndex();

  std::size_t n_ = 0;
  std::size_t num_labels_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> label_ids_;
};

// Y_i and Y_j share at least one label. Throws ValidationError when either
// index is out of range.
bool Similar(const LabelMatrix& labels, std::size_t i, std::size_t j);

struct PositivesNegatives {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
};

// Splits pool \ {i} into items similar to i and items dissimilar to i, each
// in ascending index order.
PositivesNegatives SplitPositivesNegatives(const LabelMatrix& labels,
                                           std::size_t i,
                                           std::span<const std::size_t> pool);

}  // namespace jcch

#endif  // JCCH_LABELS_HPP_
