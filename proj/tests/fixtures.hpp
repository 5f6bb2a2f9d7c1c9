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

#ifndef JCCH_TESTS_FIXTURES_HPP_
#define JCCH_TESTS_FIXTURES_HPP_

// Regression fixtures shared by the trainer tests and the acceptance suite.

#include <cstdint>
#include <vector>

#include "jcch/coefficients.hpp"
#include "jcch/dataset.hpp"
#include "jcch/model.hpp"
#include "jcch/rng.hpp"
#include "jcch/trainer.hpp"

namespace jcch::testing {

struct TrainingFixture {
  SynthSpec synth;
  SplitSpec split;
  TrainConfig train;
};

// Easy paired multiclass data: 600 items, 10 classes, 32-bit codes.
inline TrainingFixture MulticlassFixture() {
  TrainingFixture f;
  f.synth.n = 600;
  f.synth.num_labels = 10;
  f.synth.d1 = 32;
  f.synth.d2 = 48;
  f.synth.label_model = LabelModel::kMulticlass;
  f.synth.noise_sigma = 0.1;
  f.synth.seed = 7;
  f.split = {100, 500, 11};
  f.train.epochs = 30;
  f.train.code_length = 32;
  f.train.seed = 3;
  return f;
}

// Chain-model multilabel data with 20 correlated, unbalanced labels.
inline TrainingFixture ChainFixture() {
  TrainingFixture f;
  f.synth.n = 600;
  f.synth.num_labels = 20;
  f.synth.d1 = 32;
  f.synth.d2 = 48;
  f.synth.label_model = LabelModel::kChain;
  f.synth.p_root = 0.5;
  f.synth.p_child = 0.5;
  f.synth.noise_sigma = 0.3;
  f.synth.seed = 1;
  f.split = {100, 500, 2};
  f.train.epochs = 30;
  f.train.code_length = 32;
  f.train.seed = 3;
  return f;
}

// Parameters for gradient checks: the usual initialisation with hash and
// classifier heads redrawn at N(0, 0.5^2), so hash activations are O(1)
// rather than sitting next to the zero vector where the scale-invariant
// quantization and pairing terms are singular.
inline EncoderParams GenericPoint(const ModelDims& dims, std::uint64_t seed) {
  EncoderParams p = InitParams(dims, seed);
  Rng rng(seed + 99);
  for (ModalityEncoder& e : p.encoders) {
    for (double& v : e.w_hash.values()) v = rng.Normal(0.0, 0.5);
    for (double& v : e.w_cls.values()) v = rng.Normal(0.0, 0.5);
  }
  return p;
}

struct FixtureRun {
  FitResult fit;
  CrossModalEval eval;
  double center_accuracy1 = 0.0;
  double center_accuracy2 = 0.0;
};

// anchor_size 0 means every training item is an anchor.
inline FixtureRun RunFixture(const TrainingFixture& f, TrainMode mode,
                             std::size_t anchor_size = 0,
                             std::uint64_t anchor_seed = 5) {
  const CrossModalDataset ds = GenerateSynthetic(f.synth);
  const DatasetSplit split = Split(ds.n(), f.split);
  const CrossModalDataset train = ds.Subset(split.train);
  const AnchorSet anchors = anchor_size == 0 || anchor_size == train.n()
                                ? AnchorSet::All(train.n())
                                : AnchorSet::Sample(train.n(), anchor_size, anchor_seed);
  const CoefficientSet coeffs =
      Rescale(EstimateCoefficients(train.labels, anchors, false).coefficients,
              train.labels);
  TrainConfig config = f.train;
  config.mode = mode;
  FixtureRun run;
  run.fit = Fit(train, coeffs, config);
  const std::vector<std::size_t> ks = {100};
  run.eval = EvaluateRetrieval(run.fit.params, ds.Subset(split.query),
                               ds.Subset(split.database), ks);
  run.center_accuracy1 = NearestCenterAccuracy(run.fit.params, train, 0);
  run.center_accuracy2 = NearestCenterAccuracy(run.fit.params, train, 1);
  return run;
}

}  // namespace jcch::testing

#endif  // JCCH_TESTS_FIXTURES_HPP_
