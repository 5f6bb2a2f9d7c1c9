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

#include "jcch/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "jcch/rng.hpp"

namespace jcch {
namespace {

constexpr double kAlphaStep = 1.2;
constexpr double kAlphaBand = 0.05;

double RowNorm(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += x * x;
  return std::sqrt(total);
}

void ScaleGrads(EncoderParams& grads, double scale) {
  for (const ParamBlock& block : Blocks(grads)) {
    for (double& v : block.values) v *= scale;
  }
}

}  // namespace

const char* TrainModeName(TrainMode mode) {
  return mode == TrainMode::kJcch ? "jcch" : "jcch-b";
}

void TrainConfig::Validate(std::size_t n) const {
  weights.Validate();
  if (batch_size == 0 || batch_size > n) {
    throw ValidationError("train: batch_size must be in [1, n]");
  }
  if (!(lr_backbone > 0.0) || !(lr_head > 0.0)) {
    throw ValidationError("train: learning rates must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ValidationError("train: momentum must be in [0, 1)");
  }
  if (!(weight_decay >= 0.0)) {
    throw ValidationError("train: weight_decay must be >= 0");
  }
  if (hidden_dim == 0 || code_length == 0) {
    throw ValidationError("train: hidden_dim and code_length must be >= 1");
  }
  if (auto_alpha && !(weights.alpha > 0.0)) {
    throw ValidationError("train: auto_alpha needs a positive starting alpha");
  }
  if (!(alpha_target > 0.0 && alpha_target < 1.0)) {
    throw ValidationError("train: alpha_target must be in (0, 1)");
  }
}

BatchObjective EvaluateBatch(const EncoderParams& params,
                             const CrossModalDataset& data,
                             std::span<const std::size_t> rows,
                             const CoefficientSet& coeffs,
                             const LossWeights& weights, bool want_grad) {
  BatchForward fwd1 = ForwardBatch(params, data.features1, rows, 0);
  BatchForward fwd2 = ForwardBatch(params, data.features2, rows, 1);
  BatchActivations batch;
  batch.f1 = fwd1.codes;
  batch.f2 = fwd2.codes;
  batch.logits1 = fwd1.logits;
  batch.logits2 = fwd2.logits;
  batch.items.assign(rows.begin(), rows.end());

  BatchObjective out;
  if (!want_grad) {
    out.terms = TotalObjective(batch, data.labels, coeffs, params.centers, weights);
    out.codes1 = std::move(batch.f1);
    out.codes2 = std::move(batch.f2);
    return out;
  }
  ObjectiveGradients g =
      ObjectiveGradient(batch, data.labels, coeffs, params.centers, weights);
  out.terms = g.terms;
  out.grads = EncoderParams::ZerosLike(params);
  out.grads.centers = CenterMatrix(std::move(g.centers));
  BackwardBatch(params, fwd1, g.f1, g.logits1, 0, out.grads);
  BackwardBatch(params, fwd2, g.f2, g.logits2, 1, out.grads);
  out.codes1 = std::move(batch.f1);
  out.codes2 = std::move(batch.f2);
  return out;
}

FitResult Fit(const CrossModalDataset& train, const CoefficientSet& coeffs,
              const TrainConfig& config) {
  train.Validate();
  const std::size_t n = train.n();
  config.Validate(n);

  CoefficientSet active;
  if (config.mode == TrainMode::kBaseline) {
    active = BaselineCoefficients(train.labels);
  } else {
    if (coeffs.n() != n || coeffs.num_labels() != train.labels.num_labels()) {
      throw ValidationError("train: coefficients do not match the training set");
    }
    if (!coeffs.rescaled) {
      throw ValidationError("train: coefficients must be rescaled first");
    }
    active = coeffs;
  }

  ModelDims dims;
  dims.input1 = train.features1.cols();
  dims.input2 = train.features2.cols();
  dims.hidden = config.hidden_dim;
  dims.code_length = config.code_length;
  dims.num_labels = train.labels.num_labels();

  FitResult result;
  result.params = InitParams(dims, config.seed);
  result.report.mode = config.mode;
  EncoderParams& params = result.params;
  EncoderParams velocity = EncoderParams::ZerosLike(params);

  {
    const Matrix a1 = EncodeActivations(params, train.features1, 0);
    const Matrix a2 = EncodeActivations(params, train.features2, 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += RowNorm(a1.row(i)) + RowNorm(a2.row(i));
    result.report.initial_mean_norm = total / (2.0 * static_cast<double>(n));
    double centers = 0.0;
    for (std::size_t s = 0; s < dims.num_labels; ++s) centers += params.centers.ColumnNorm(s);
    result.report.initial_mean_center_norm =
        centers / static_cast<double>(dims.num_labels);
  }

  LossWeights weights = config.weights;
  if (!train.paired) weights.beta = 0.0;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffle = Rng::Stream(config.seed ^ Rng::Mix(epoch + 1), rng_stream::kShuffle);
    shuffle.Shuffle(order);

    EpochRecord record;
    record.epoch = epoch + 1;
    record.alpha = weights.alpha;
    record.min_batch_norm = std::numeric_limits<double>::infinity();
    double quant1 = 0.0;
    double quant2 = 0.0;
    double norm1 = 0.0;
    double norm2 = 0.0;

    for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
      const std::size_t end = std::min(n, begin + config.batch_size);
      std::span<const std::size_t> rows(order.data() + begin, end - begin);
      const double b = static_cast<double>(rows.size());

      BatchObjective obj = EvaluateBatch(params, train, rows, active, weights, true);
      if (!std::isfinite(obj.terms.total)) {
        throw TrainingDivergedError(
            "training diverged: non-finite loss in epoch " +
                std::to_string(epoch + 1),
            result.report);
      }
      record.mean_terms.cmul += obj.terms.cmul;
      record.mean_terms.classification += obj.terms.classification;
      record.mean_terms.quantization += obj.terms.quantization;
      record.mean_terms.pairing += obj.terms.pairing;
      record.mean_terms.total += obj.terms.total;
      record.mean_terms.degenerate += obj.terms.degenerate;

      // Statistics on the pre-step activations of this batch.
      {
        double batch1 = 0.0;
        double batch2 = 0.0;
        for (std::size_t k = 0; k < rows.size(); ++k) {
          quant1 += QuantizationLoss(obj.codes1.row(k)).value;
          quant2 += QuantizationLoss(obj.codes2.row(k)).value;
          batch1 += RowNorm(obj.codes1.row(k));
          batch2 += RowNorm(obj.codes2.row(k));
        }
        norm1 += batch1;
        norm2 += batch2;
        record.min_batch_norm =
            std::min({record.min_batch_norm, batch1 / b, batch2 / b});
      }

      ScaleGrads(obj.grads, 1.0 / b);
      try {
        SgdStep(params, obj.grads, velocity, config.sgd());
      } catch (const NonFiniteGradientError& e) {
        throw TrainingDivergedError(e.what(), result.report);
      }
    }

    const double nn = static_cast<double>(n);
    record.mean_terms.cmul /= nn;
    record.mean_terms.classification /= nn;
    record.mean_terms.quantization /= nn;
    record.mean_terms.pairing /= nn;
    record.mean_terms.total /= nn;
    record.quantization1 = quant1 / nn;
    record.quantization2 = quant2 / nn;
    record.mean_norm1 = norm1 / nn;
    record.mean_norm2 = norm2 / nn;
    record.min_center_norm = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < dims.num_labels; ++s) {
      const double norm = params.centers.ColumnNorm(s);
      record.mean_center_norm += norm;
      record.min_center_norm = std::min(record.min_center_norm, norm);
    }
    record.mean_center_norm /= static_cast<double>(dims.num_labels);
    record.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    result.report.epochs.push_back(record);

    if (config.auto_alpha) {
      const double level = 0.5 * (record.quantization1 + record.quantization2);
      if (level > config.alpha_target + kAlphaBand) {
        weights.alpha *= kAlphaStep;
      } else if (level < config.alpha_target - kAlphaBand) {
        weights.alpha /= kAlphaStep;
      }
    }
  }
  return result;
}

void WriteTrainReportCsv(const TrainReport& report, std::ostream& out) {
  out << "epoch,mode,alpha,total,cmul,classification,quantization,pairing,"
         "degenerate,quant1,quant2,mean_norm1,mean_norm2,min_batch_norm,"
         "mean_center_norm,min_center_norm\n";
  const auto old_precision = out.precision(17);
  for (const EpochRecord& r : report.epochs) {
    out << r.epoch << ',' << TrainModeName(report.mode) << ',' << r.alpha << ','
        << r.mean_terms.total << ',' << r.mean_terms.cmul << ','
        << r.mean_terms.classification << ',' << r.mean_terms.quantization << ','
        << r.mean_terms.pairing << ',' << r.mean_terms.degenerate << ','
        << r.quantization1 << ',' << r.quantization2 << ',' << r.mean_norm1
        << ',' << r.mean_norm2 << ',' << r.min_batch_norm << ','
        << r.mean_center_norm << ',' << r.min_center_norm << '\n';
  }
  out.precision(old_precision);
}

GradCheckResult GradCheck(const EncoderParams& params,
                          const CrossModalDataset& data,
                          std::span<const std::size_t> rows,
                          const CoefficientSet& coeffs,
                          const LossWeights& weights, std::uint64_t seed,
                          std::size_t min_coordinates, double step) {
  BatchObjective analytic = EvaluateBatch(params, data, rows, coeffs, weights, true);
  EncoderParams probe = params;
  auto probe_blocks = Blocks(probe);
  auto grad_blocks = Blocks(analytic.grads);

  // (block, offset) pairs: a few per block, then uniform over everything.
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  Rng rng(seed);
  std::size_t total_size = 0;
  for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
    const std::size_t size = probe_blocks[b].values.size();
    total_size += size;
    for (std::size_t k = 0; k < std::min<std::size_t>(size, 16); ++k) {
      coords.emplace_back(b, static_cast<std::size_t>(rng.UniformInt(size)));
    }
  }
  while (coords.size() < min_coordinates) {
    std::size_t flat = static_cast<std::size_t>(rng.UniformInt(total_size));
    std::size_t b = 0;
    while (flat >= probe_blocks[b].values.size()) flat -= probe_blocks[b++].values.size();
    coords.emplace_back(b, flat);
  }

  GradCheckResult result;
  for (const ParamBlock& block : probe_blocks) result.blocks_checked.push_back(block.name);
  for (auto [b, k] : coords) {
    double& w = probe_blocks[b].values[k];
    const double saved = w;
    w = saved + step;
    const double plus = EvaluateBatch(probe, data, rows, coeffs, weights, false).terms.total;
    w = saved - step;
    const double minus = EvaluateBatch(probe, data, rows, coeffs, weights, false).terms.total;
    w = saved;
    const double numeric = (plus - minus) / (2.0 * step);
    const double exact = grad_blocks[b].values[k];
    const double denom = std::max({std::abs(exact), std::abs(numeric), kGradCheckFloor});
    result.max_relative_error =
        std::max(result.max_relative_error, std::abs(exact - numeric) / denom);
    ++result.coordinates;
  }
  return result;
}

double NearestCenterAccuracy(const EncoderParams& params,
                             const CrossModalDataset& data, int modality) {
  const FloatMatrix& features = modality == 0 ? data.features1 : data.features2;
  const Matrix codes = EncodeActivations(params, features, modality);
  const std::size_t r = params.dims.code_length;
  const std::size_t c = params.dims.num_labels;
  Matrix unit_centers(c, r);
  for (std::size_t s = 0; s < c; ++s) {
    const double norm = params.centers.ColumnNorm(s);
    for (std::size_t k = 0; k < r; ++k) {
      unit_centers(s, k) = norm > 0.0 ? params.centers(k, s) / norm : 0.0;
    }
  }
  std::size_t hits = 0;
  std::vector<double> unit(r);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double norm = RowNorm(codes.row(i));
    for (std::size_t k = 0; k < r; ++k) {
      unit[k] = norm > 0.0 ? codes(i, k) / norm : 0.0;
    }
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < c; ++s) {
      const double d = Distance(unit, unit_centers.row(s), Metric::kL2);
      if (d < best_dist) {
        best_dist = d;
        best = s;
      }
    }
    hits += data.labels.Has(i, best) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(data.n());
}

CrossModalEval EvaluateRetrieval(const EncoderParams& params,
                                 const CrossModalDataset& query,
                                 const CrossModalDataset& database,
                                 std::span<const std::size_t> ks,
                                 unsigned threads) {
  const HashCodeSet q1 = Encode(EncodeActivations(params, query.features1, 0));
  const HashCodeSet q2 = Encode(EncodeActivations(params, query.features2, 1));
  const HashCodeSet d1 = Encode(EncodeActivations(params, database.features1, 0));
  const HashCodeSet d2 = Encode(EncodeActivations(params, database.features2, 1));
  return {Evaluate(q1, d2, query.labels, database.labels, ks, "1to2", threads),
          Evaluate(q2, d1, query.labels, database.labels, ks, "2to1", threads)};
}

}  // namespace jcch
