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

#ifndef JCCH_DATASET_HPP_
#define JCCH_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jcch/labels.hpp"
#include "jcch/matrix.hpp"

namespace jcch {

// Two views of the same n items plus their labels. Row i of features1 and
// features2 describe item i when `paired` is set.
struct CrossModalDataset {
  FloatMatrix features1;
  FloatMatrix features2;
  LabelMatrix labels;
  bool paired = true;

  std::size_t n() const { return labels.n(); }

  // Throws ValidationError on row-count mismatch or non-finite features.
  void Validate() const;

  CrossModalDataset Subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const CrossModalDataset&,
                         const CrossModalDataset&) = default;
};

enum class LabelModel {
  kUniform,     // each label independently with probability p
  kChain,       // label s>1 depends on its parent ceil(s/2)
  kMulticlass,  // exactly one label, uniform over C
};

struct SynthSpec {
  std::size_t n = 0;
  std::size_t num_labels = 0;
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  LabelModel label_model = LabelModel::kUniform;
  double p = 0.5;          // uniform model
  double p_root = 0.5;     // chain model, label 1
  double p_child = 0.5;    // chain model, child given parent
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Labels come from the chosen model (rows resampled until non-empty). Each
// item's latent z_i is its L2-normalised multi-hot label vector, and
// features_m = z_i * A_m + N(0, noise_sigma^2) with A_m a seeded standard
// normal C x d_m projection per modality.
CrossModalDataset GenerateSynthetic(const SynthSpec& spec);

// Draws the label matrix alone; GenerateSynthetic uses exactly this sampler.
LabelMatrix GenerateLabels(const SynthSpec& spec);

struct SplitSpec {
  std::size_t n_query = 0;
  std::size_t n_train = 0;
  std::uint64_t seed = 0;
};

struct DatasetSplit {
  std::vector<std::size_t> query;
  std::vector<std::size_t> train;
  std::vector<std::size_t> database;
};

// Query and database are disjoint and together cover all n items; train is
// a subset of the database. Index lists are ascending.
DatasetSplit Split(std::size_t n, const SplitSpec& spec);

// Binary format (little-endian):
//   "JCCH" u16 version=1, u32 n, C, d1, d2,
//   labels: n rows of ceil(C/8) bytes, label s at byte s/8 bit s%8,
//   features1: n*d1 f32 row-major, features2: n*d2 f32 row-major.
// The pairing flag is not part of the format; loaded datasets are paired.
inline constexpr std::uint16_t kDatasetFormatVersion = 1;
void SaveDataset(const CrossModalDataset& ds, const std::filesystem::path& path);
CrossModalDataset LoadDataset(const std::filesystem::path& path);

// CSV import: labels as 0/1 cells, features as real cells, one item per row,
// no header. Row counts must agree.
LabelMatrix ReadLabelsCsv(const std::filesystem::path& path);
FloatMatrix ReadFeaturesCsv(const std::filesystem::path& path);

}  // namespace jcch

#endif  // JCCH_DATASET_HPP_
