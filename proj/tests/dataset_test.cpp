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

#include "jcch/dataset.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "jcch/error.hpp"
#include "test_util.hpp"

namespace jcch {
namespace {

using ::jcch::testing::ReadBytes;
using ::jcch::testing::TempDir;

SynthSpec SmallSpec(LabelModel model) {
  SynthSpec spec;
  spec.n = 50;
  spec.num_labels = 6;
  spec.d1 = 5;
  spec.d2 = 7;
  spec.label_model = model;
  spec.p = 0.3;
  spec.seed = 17;
  return spec;
}

TEST(SynthSpecTest, RejectsBadParameters) {
  SynthSpec spec = SmallSpec(LabelModel::kUniform);
  spec.p = 1.0;
  EXPECT_THROW(GenerateSynthetic(spec), ValidationError);
  spec = SmallSpec(LabelModel::kChain);
  spec.p_child = 0.0;
  EXPECT_THROW(GenerateSynthetic(spec), ValidationError);
  spec = SmallSpec(LabelModel::kUniform);
  spec.noise_sigma = -1.0;
  EXPECT_THROW(GenerateSynthetic(spec), ValidationError);
  spec = SmallSpec(LabelModel::kUniform);
  spec.d2 = 0;
  EXPECT_THROW(GenerateSynthetic(spec), ValidationError);
}

TEST(GenerateSyntheticTest, Deterministic) {
  for (LabelModel model :
       {LabelModel::kUniform, LabelModel::kChain, LabelModel::kMulticlass}) {
    const SynthSpec spec = SmallSpec(model);
    EXPECT_EQ(GenerateSynthetic(spec), GenerateSynthetic(spec));
  }
  SynthSpec other = SmallSpec(LabelModel::kUniform);
  other.seed = 18;
  EXPECT_FALSE(GenerateSynthetic(other) == GenerateSynthetic(SmallSpec(LabelModel::kUniform)));
}

TEST(GenerateSyntheticTest, ShapesAndNonEmptyRows) {
  for (LabelModel model :
       {LabelModel::kUniform, LabelModel::kChain, LabelModel::kMulticlass}) {
    const CrossModalDataset ds = GenerateSynthetic(SmallSpec(model));
    EXPECT_NO_THROW(ds.Validate());
    EXPECT_EQ(ds.features1.rows(), 50u);
    EXPECT_EQ(ds.features1.cols(), 5u);
    EXPECT_EQ(ds.features2.cols(), 7u);
    for (std::size_t i = 0; i < ds.n(); ++i) EXPECT_GE(ds.labels.Count(i), 1u);
    if (model == LabelModel::kMulticlass) {
      for (std::size_t i = 0; i < ds.n(); ++i) EXPECT_EQ(ds.labels.Count(i), 1u);
    }
  }
}

TEST(GenerateSyntheticTest, NoiselessFeaturesAreProjectedLabels) {
  // With sigma = 0, items with identical label sets have identical features.
  SynthSpec spec = SmallSpec(LabelModel::kMulticlass);
  spec.noise_sigma = 0.0;
  const CrossModalDataset ds = GenerateSynthetic(spec);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.n(); ++j) {
      if (ds.labels.LabelsOf(i)[0] != ds.labels.LabelsOf(j)[0]) continue;
      for (std::size_t k = 0; k < spec.d1; ++k) {
        ASSERT_EQ(ds.features1(i, k), ds.features1(j, k));
      }
    }
  }
}

// Independent simulation of "each of C labels with probability p, redraw the
// row while it is empty", on a different generator.
double SimulatedLabelRate(double p, std::size_t c, int trials) {
  std::mt19937_64 gen(12345);
  std::bernoulli_distribution coin(p);
  long set = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<bool> row(c);
    bool any = false;
    while (!any) {
      for (std::size_t s = 0; s < c; ++s) {
        row[s] = coin(gen);
        any = any || row[s];
      }
    }
    set += row[0] ? 1 : 0;
  }
  return static_cast<double>(set) / trials;
}

TEST(GenerateLabelsTest, UniformRateMatchesSimulatedSampler) {
  SynthSpec spec;
  spec.n = 1000;
  spec.num_labels = 2;
  spec.d1 = spec.d2 = 1;
  spec.label_model = LabelModel::kUniform;
  spec.p = 0.5;
  spec.seed = 3;
  const LabelMatrix labels = GenerateLabels(spec);
  const double simulated = SimulatedLabelRate(0.5, 2, 100000);
  // Resampling empty rows lifts 1/2 to (1/2)/(3/4).
  EXPECT_NEAR(simulated, 2.0 / 3.0, 0.005);
  for (std::size_t s = 0; s < 2; ++s) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < labels.n(); ++i) count += labels.Has(i, s) ? 1 : 0;
    // About three standard deviations at n = 1000.
    EXPECT_NEAR(static_cast<double>(count) / 1000.0, simulated, 0.045);
  }
}

TEST(GenerateLabelsTest, ChainLabelsAreCorrelated) {
  SynthSpec spec;
  spec.n = 2000;
  spec.num_labels = 3;
  spec.d1 = spec.d2 = 1;
  spec.label_model = LabelModel::kChain;
  spec.p_root = 0.5;
  spec.p_child = 0.6;
  spec.seed = 8;
  const LabelMatrix labels = GenerateLabels(spec);
  double with = 0, with_total = 0, without = 0, without_total = 0;
  for (std::size_t i = 0; i < labels.n(); ++i) {
    if (labels.Has(i, 0)) {
      ++with_total;
      with += labels.Has(i, 1);
    } else {
      ++without_total;
      without += labels.Has(i, 1);
    }
  }
  EXPECT_GT(with / with_total, without / without_total);
}

TEST(SplitTest, ExhaustiveTrain) {
  const DatasetSplit split = Split(10, {2, 8, 4});
  EXPECT_EQ(split.query.size(), 2u);
  EXPECT_EQ(split.database.size(), 8u);
  EXPECT_EQ(split.train, split.database);
}

TEST(SplitTest, DisjointCoveringAndDeterministic) {
  const DatasetSplit a = Split(100, {20, 30, 9});
  const DatasetSplit b = Split(100, {20, 30, 9});
  EXPECT_EQ(a.query, b.query);
  EXPECT_EQ(a.train, b.train);
  std::vector<int> seen(100, 0);
  for (std::size_t i : a.query) ++seen[i];
  for (std::size_t i : a.database) ++seen[i];
  for (int s : seen) EXPECT_EQ(s, 1);
  for (std::size_t i : a.train) {
    EXPECT_TRUE(std::binary_search(a.database.begin(), a.database.end(), i));
  }
  EXPECT_TRUE(std::is_sorted(a.query.begin(), a.query.end()));
}

TEST(SplitTest, RejectsOversizedSpecs) {
  EXPECT_THROW(Split(10, {10, 0, 1}), ValidationError);
  EXPECT_THROW(Split(10, {2, 9, 1}), ValidationError);
}

TEST(DatasetIoTest, RoundTrip) {
  TempDir dir;
  const CrossModalDataset ds = GenerateSynthetic(SmallSpec(LabelModel::kChain));
  SaveDataset(ds, dir / "ds.bin");
  EXPECT_EQ(LoadDataset(dir / "ds.bin"), ds);
}

TEST(DatasetIoTest, RoundTripManyLabels) {
  SynthSpec spec = SmallSpec(LabelModel::kUniform);
  spec.num_labels = 70;
  spec.p = 0.05;
  TempDir dir;
  const CrossModalDataset ds = GenerateSynthetic(spec);
  SaveDataset(ds, dir / "ds.bin");
  EXPECT_EQ(LoadDataset(dir / "ds.bin"), ds);
}

TEST(DatasetIoTest, FrozenHeaderBytes) {
  CrossModalDataset ds;
  ds.labels = LabelMatrix(3, {{0, 2}});
  ds.features1 = FloatMatrix(1, 1);
  ds.features2 = FloatMatrix(1, 1);
  ds.features1(0, 0) = 1.0f;
  ds.features2(0, 0) = -2.0f;
  TempDir dir;
  SaveDataset(ds, dir / "ds.bin");
  const std::string bytes = ReadBytes(dir / "ds.bin");
  const std::string expected(
      "JCCH\x01\x00"
      "\x01\x00\x00\x00\x03\x00\x00\x00\x01\x00\x00\x00\x01\x00\x00\x00"
      "\x05"
      "\x00\x00\x80\x3f"
      "\x00\x00\x00\xc0",
      6 + 16 + 1 + 8);
  EXPECT_EQ(bytes, expected);
}

void Corrupt(const std::filesystem::path& path, std::size_t offset, char value) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(static_cast<std::streamoff>(offset));
  f.put(value);
}

TEST(DatasetIoTest, BadMagic) {
  TempDir dir;
  SaveDataset(GenerateSynthetic(SmallSpec(LabelModel::kUniform)), dir / "ds.bin");
  Corrupt(dir / "ds.bin", 0, 'X');
  EXPECT_THROW(LoadDataset(dir / "ds.bin"), FormatError);
}

TEST(DatasetIoTest, BumpedVersion) {
  TempDir dir;
  SaveDataset(GenerateSynthetic(SmallSpec(LabelModel::kUniform)), dir / "ds.bin");
  Corrupt(dir / "ds.bin", 4, 2);
  EXPECT_THROW(LoadDataset(dir / "ds.bin"), UnsupportedVersionError);
}

TEST(DatasetIoTest, Truncated) {
  TempDir dir;
  SaveDataset(GenerateSynthetic(SmallSpec(LabelModel::kUniform)), dir / "ds.bin");
  std::filesystem::resize_file(dir / "ds.bin",
                               std::filesystem::file_size(dir / "ds.bin") - 3);
  EXPECT_THROW(LoadDataset(dir / "ds.bin"), FormatError);
}

TEST(DatasetIoTest, MissingFile) {
  TempDir dir;
  EXPECT_THROW(LoadDataset(dir / "nope.bin"), IoError);
}

TEST(CsvTest, LabelsAndFeatures) {
  TempDir dir;
  {
    std::ofstream(dir / "labels.csv") << "1,1,0\n0,1,0\n0,0,1\n";
    std::ofstream(dir / "feat.csv") << "0.5,1\n-2,3e-1\n4,5\n";
  }
  EXPECT_EQ(ReadLabelsCsv(dir / "labels.csv"), testing::ThreeItemLabels());
  const FloatMatrix f = ReadFeaturesCsv(dir / "feat.csv");
  ASSERT_EQ(f.rows(), 3u);
  ASSERT_EQ(f.cols(), 2u);
  EXPECT_FLOAT_EQ(f(1, 1), 0.3f);
}

TEST(CsvTest, RejectsRaggedAndNonBinary) {
  TempDir dir;
  {
    std::ofstream(dir / "ragged.csv") << "1,0\n1\n";
    std::ofstream(dir / "two.csv") << "1,2\n";
    std::ofstream(dir / "empty_row.csv") << "0,0\n";
  }
  EXPECT_THROW(ReadLabelsCsv(dir / "ragged.csv"), Error);
  EXPECT_THROW(ReadLabelsCsv(dir / "two.csv"), Error);
  EXPECT_THROW(ReadLabelsCsv(dir / "empty_row.csv"), ValidationError);
}

TEST(DatasetTest, ValidateCatchesMismatch) {
  CrossModalDataset ds = GenerateSynthetic(SmallSpec(LabelModel::kUniform));
  ds.features1(3, 2) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(ds.Validate(), ValidationError);
  ds = GenerateSynthetic(SmallSpec(LabelModel::kUniform));
  ds.features2 = FloatMatrix(10, 7);
  EXPECT_THROW(ds.Validate(), ValidationError);
}

TEST(DatasetTest, SubsetKeepsRows) {
  const CrossModalDataset ds = GenerateSynthetic(SmallSpec(LabelModel::kChain));
  const CrossModalDataset sub = ds.Subset({4, 9});
  EXPECT_EQ(sub.n(), 2u);
  EXPECT_EQ(sub.features2(1, 3), ds.features2(9, 3));
  EXPECT_EQ(sub.labels.Count(0), ds.labels.Count(4));
}

}  // namespace
}  // namespace jcch
