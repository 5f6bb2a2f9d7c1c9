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

#include "jcch/labels.hpp"

#include <algorithm>
#include <string>

#include "jcch/error.hpp"

namespace jcch {

LabelMatrix::LabelMatrix(std::size_t num_labels,
                         const std::vector<std::vector<std::size_t>>& rows)
    : n_(rows.size()),
      num_labels_(num_labels),
      words_per_row_((num_labels + 63) / 64) {
  if (n_ == 0) throw ValidationError("label matrix needs at least one item");
  if (num_labels_ == 0) {
    throw ValidationError("label matrix needs at least one label");
  }
  words_.assign(n_ * words_per_row_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t s : rows[i]) {
      if (s >= num_labels_) {
        throw ValidationError("label " + std::to_string(s) +
                              " out of range for C=" +
                              std::to_string(num_labels_));
      }
      words_[i * words_per_row_ + s / 64] |= std::uint64_t{1} << (s % 64);
    }
  }
  BuildIndex();
}

LabelMatrix LabelMatrix::FromDense(std::size_t n, std::size_t num_labels,
                                   std::span<const std::uint8_t> dense) {
  if (dense.size() != n * num_labels) {
    throw ValidationError("dense label buffer has wrong size");
  }
  std::vector<std::vector<std::size_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < num_labels; ++s) {
      if (dense[i * num_labels + s] != 0) rows[i].push_back(s);
    }
  }
  return LabelMatrix(num_labels, rows);
}

void LabelMatrix::BuildIndex() {
  counts_.assign(n_, 0);
  offsets_.assign(n_ + 1, 0);
  label_ids_.clear();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t s = 0; s < num_labels_; ++s) {
      if (Has(i, s)) label_ids_.push_back(s);
    }
    offsets_[i + 1] = label_ids_.size();
    counts_[i] = offsets_[i + 1] - offsets_[i];
    if (counts_[i] == 0) {
      throw ValidationError("item " + std::to_string(i) + " has no labels");
    }
  }
}

LabelMatrix LabelMatrix::Subset(std::span<const std::size_t> indices) const {
  std::vector<std::vector<std::size_t>> rows;
  rows.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= n_) throw ValidationError("subset index out of range");
    auto ids = LabelsOf(i);
    rows.emplace_back(ids.begin(), ids.end());
  }
  return LabelMatrix(num_labels_, rows);
}

bool Similar(const LabelMatrix& labels, std::size_t i, std::size_t j) {
  if (i >= labels.n() || j >= labels.n()) {
    throw ValidationError("item index out of range");
  }
  return labels.SimilarUnchecked(i, j);
}

PositivesNegatives SplitPositivesNegatives(const LabelMatrix& labels,
                                           std::size_t i,
                                           std::span<const std::size_t> pool) {
  if (i >= labels.n()) throw ValidationError("item index out of range");
  std::vector<std::size_t> sorted(pool.begin(), pool.end());
  std::sort(sorted.begin(), sorted.end());
  PositivesNegatives out;
  for (std::size_t j : sorted) {
    if (j >= labels.n()) throw ValidationError("pool index out of range");
    if (j == i) continue;
    if (labels.SimilarUnchecked(i, j)) {
      out.positives.push_back(j);
    } else {
      out.negatives.push_back(j);
    }
  }
  return out;
}

}  // namespace jcch
