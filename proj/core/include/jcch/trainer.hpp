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

#ifndef JCCH_TRAINER_HPP_
#define JCCH_TRAINER_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "jcch/coefficients.hpp"
#include "jcch/dataset.hpp"
#include "jcch/error.hpp"
#include "jcch/losses.hpp"
#include "jcch/model.hpp"
#include "jcch/retrieval.hpp"

namespace jcch {

enum class TrainMode {
  kJcch,       // coefficients from the anchor estimator, rescaled
  kBaseline,   // q_is = 1/|Y_i|, u_is = 1 (JCCH-B ablation)
};

const char* TrainModeName(TrainMode mode);

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 50;
  double lr_backbone = 0.01;
  double lr_head = 0.01;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  LossWeights weights;
  std::size_t hidden_dim = 256;
  std::size_t code_length = 32;
  bool auto_alpha = false;
  double alpha_target = 0.15;
  TrainMode mode = TrainMode::kJcch;
  std::uint64_t seed = 0;

  void Validate(std::size_t n) const;
  SgdConfig sgd() const {
    return {lr_backbone, lr_head, momentum, weight_decay};
  }
};

struct EpochRecord {
  std::size_t epoch = 0;
  double alpha = 0.0;           // alpha used during this epoch
  ObjectiveTerms mean_terms;    // per-item means over the epoch
  double quantization1 = 0.0;   // mean l_q, modality 1
  double quantization2 = 0.0;
  double mean_norm1 = 0.0;      // mean ||F_1(x)||
  double mean_norm2 = 0.0;
  double min_batch_norm = 0.0;  // smallest per-batch mean ||F|| of either modality
  double mean_center_norm = 0.0;
  double min_center_norm = 0.0;
  double elapsed_seconds = 0.0;
};

struct TrainReport {
  TrainMode mode = TrainMode::kJcch;
  double initial_mean_norm = 0.0;  // mean ||F|| over both modalities at init
  double initial_mean_center_norm = 0.0;
  std::vector<EpochRecord> epochs;
};

// Everything except elapsed time, so the file is reproducible.
void WriteTrainReportCsv(const TrainReport& report, std::ostream& out);

class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(const std::string& what, TrainReport last_good)
      : Error(what), report_(std::move(last_good)) {}
  const TrainReport& report() const { return report_; }

 private:
  TrainReport report_;
};

struct FitResult {
  EncoderParams params;
  TrainReport report;
};

// Minibatch SGD on the relaxed objective (per-batch mean of the summed
// terms). Each epoch visits a seeded shuffle of the items. Coefficients must
// be rescaled in kJcch mode; kBaseline ignores them. The pairing term is
// dropped when the dataset is not paired. Throws TrainingDivergedError with
// the report up to the last finished epoch on a non-finite loss.
FitResult Fit(const CrossModalDataset& train, const CoefficientSet& coeffs,
              const TrainConfig& config);

// Objective value and parameter gradients on one batch of rows.
struct BatchObjective {
  ObjectiveTerms terms;
  EncoderParams grads;
  Matrix codes1;  // hash layer activations of the batch, b x r
  Matrix codes2;
};
BatchObjective EvaluateBatch(const EncoderParams& params,
                             const CrossModalDataset& data,
                             std::span<const std::size_t> rows,
                             const CoefficientSet& coeffs,
                             const LossWeights& weights, bool want_grad);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
  std::vector<std::string> blocks_checked;
};

// Central differences (step 1e-5) on a random subset of at least
// `min_coordinates` coordinates, every block included. Relative error is
// |analytic - numeric| / max(|analytic|, |numeric|, floor).
inline constexpr double kGradCheckFloor = 1e-3;
GradCheckResult GradCheck(const EncoderParams& params,
                          const CrossModalDataset& data,
                          std::span<const std::size_t> rows,
                          const CoefficientSet& coeffs,
                          const LossWeights& weights, std::uint64_t seed,
                          std::size_t min_coordinates = 200,
                          double step = 1e-5);

// Share of items whose hash activation, after L2 normalisation, is closest to
// the normalised center of one of the item's own labels.
double NearestCenterAccuracy(const EncoderParams& params,
                             const CrossModalDataset& data, int modality);

struct CrossModalEval {
  EvalReport query1;  // "1to2": modality-1 queries, modality-2 database
  EvalReport query2;  // "2to1"
};
// Encodes both splits with sign codes and evaluates both directions.
CrossModalEval EvaluateRetrieval(const EncoderParams& params,
                                 const CrossModalDataset& query,
                                 const CrossModalDataset& database,
                                 std::span<const std::size_t> ks,
                                 unsigned threads = 1);

}  // namespace jcch

#endif  // JCCH_TRAINER_HPP_
