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

#include "jcch/model.hpp"

#include <cmath>
#include <string>

#include "jcch/binary_io.hpp"
#include "jcch/rng.hpp"

namespace jcch {
namespace {

constexpr char kCheckpointMagic[] = "JCCM";
constexpr double kHeadStd = 0.01;
constexpr double kCenterStd = 0.5;

void CheckModality(int modality) {
  if (modality != 0 && modality != 1) {
    throw ValidationError("modality must be 0 or 1");
  }
}

ModalityEncoder ZeroEncoder(const ModelDims& dims, int modality) {
  ModalityEncoder e;
  e.w_hidden = Matrix(dims.input(modality), dims.hidden);
  e.b_hidden.assign(dims.hidden, 0.0);
  e.w_hash = Matrix(dims.hidden, dims.code_length);
  e.w_cls = Matrix(dims.hidden, dims.num_labels);
  return e;
}

// hidden = relu(x W + b), code = hidden W_hash, logits = hidden W_cls.
void ForwardRow(const ModalityEncoder& e, std::span<const double> x,
                std::span<double> hidden, std::span<double> code,
                std::span<double> logits) {
  const std::size_t h = hidden.size();
  for (std::size_t k = 0; k < h; ++k) hidden[k] = e.b_hidden[k];
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double xd = x[d];
    if (xd == 0.0) continue;
    const auto w = e.w_hidden.row(d);
    for (std::size_t k = 0; k < h; ++k) hidden[k] += xd * w[k];
  }
  for (double& v : hidden) v = v > 0.0 ? v : 0.0;
  std::fill(code.begin(), code.end(), 0.0);
  std::fill(logits.begin(), logits.end(), 0.0);
  for (std::size_t k = 0; k < h; ++k) {
    const double hk = hidden[k];
    if (hk == 0.0) continue;
    const auto wh = e.w_hash.row(k);
    for (std::size_t j = 0; j < code.size(); ++j) code[j] += hk * wh[j];
    const auto wc = e.w_cls.row(k);
    for (std::size_t j = 0; j < logits.size(); ++j) logits[j] += hk * wc[j];
  }
}

}  // namespace

void ModelDims::Validate() const {
  if (input1 == 0 || input2 == 0 || hidden == 0 || code_length == 0 ||
      num_labels == 0) {
    throw ValidationError("model dimensions must all be >= 1");
  }
}

EncoderParams EncoderParams::ZerosLike(const EncoderParams& other) {
  EncoderParams out;
  out.dims = other.dims;
  out.encoders = {ZeroEncoder(other.dims, 0), ZeroEncoder(other.dims, 1)};
  out.centers = CenterMatrix(other.dims.code_length, other.dims.num_labels);
  return out;
}

std::vector<ParamBlock> Blocks(EncoderParams& params) {
  std::vector<ParamBlock> blocks;
  blocks.push_back({"centers", params.centers.matrix().values(), BlockKind::kCenters});
  for (int m = 0; m < 2; ++m) {
    ModalityEncoder& e = params.encoders[m];
    const std::string prefix = "m" + std::to_string(m + 1) + ".";
    blocks.push_back({prefix + "w_hidden", e.w_hidden.values(), BlockKind::kBackboneWeight});
    blocks.push_back({prefix + "b_hidden", e.b_hidden, BlockKind::kBackboneBias});
    blocks.push_back({prefix + "w_hash", e.w_hash.values(), BlockKind::kHeadWeight});
    blocks.push_back({prefix + "w_cls", e.w_cls.values(), BlockKind::kHeadWeight});
  }
  return blocks;
}

EncoderParams InitParams(const ModelDims& dims, std::uint64_t seed) {
  dims.Validate();
  EncoderParams p;
  p.dims = dims;
  Rng rng = Rng::Stream(seed, rng_stream::kInit);
  p.centers = CenterMatrix(dims.code_length, dims.num_labels);
  for (double& v : p.centers.matrix().values()) v = rng.Normal(0.0, kCenterStd);
  for (int m = 0; m < 2; ++m) {
    ModalityEncoder e = ZeroEncoder(dims, m);
    const double hidden_std = std::sqrt(
        2.0 / static_cast<double>(dims.input(m) + dims.hidden));
    for (double& v : e.w_hidden.values()) v = rng.Normal(0.0, hidden_std);
    for (double& v : e.w_hash.values()) v = rng.Normal(0.0, kHeadStd);
    for (double& v : e.w_cls.values()) v = rng.Normal(0.0, kHeadStd);
    p.encoders[m] = std::move(e);
  }
  return p;
}

ForwardResult Forward(const EncoderParams& params, std::span<const double> x,
                      int modality) {
  CheckModality(modality);
  if (x.size() != params.dims.input(modality)) {
    throw ValidationError("input dimension " + std::to_string(x.size()) +
                          " does not match modality " +
                          std::to_string(modality + 1));
  }
  ForwardResult out;
  out.hidden.resize(params.dims.hidden);
  out.code.resize(params.dims.code_length);
  out.logits.resize(params.dims.num_labels);
  ForwardRow(params.encoders[modality], x, out.hidden, out.code, out.logits);
  return out;
}

BatchForward ForwardBatch(const EncoderParams& params,
                          const FloatMatrix& features,
                          std::span<const std::size_t> rows, int modality) {
  CheckModality(modality);
  const ModelDims& dims = params.dims;
  if (features.cols() != dims.input(modality)) {
    throw ValidationError("feature dimension does not match modality " +
                          std::to_string(modality + 1));
  }
  BatchForward out;
  out.inputs = Matrix(rows.size(), features.cols());
  out.hidden = Matrix(rows.size(), dims.hidden);
  out.codes = Matrix(rows.size(), dims.code_length);
  out.logits = Matrix(rows.size(), dims.num_labels);
  for (std::size_t b = 0; b < rows.size(); ++b) {
    if (rows[b] >= features.rows()) throw ValidationError("row out of range");
    const auto src = features.row(rows[b]);
    auto dst = out.inputs.row(b);
    for (std::size_t d = 0; d < src.size(); ++d) dst[d] = src[d];
    ForwardRow(params.encoders[modality], out.inputs.row(b), out.hidden.row(b),
               out.codes.row(b), out.logits.row(b));
  }
  return out;
}

void BackwardBatch(const EncoderParams& params, const BatchForward& forward,
                   const Matrix& grad_codes, const Matrix& grad_logits,
                   int modality, EncoderParams& grads) {
  CheckModality(modality);
  const ModalityEncoder& e = params.encoders[modality];
  ModalityEncoder& g = grads.encoders[modality];
  const std::size_t h = params.dims.hidden;
  const bool has_logits = !grad_logits.empty();
  std::vector<double> grad_pre(h);
  for (std::size_t b = 0; b < forward.hidden.rows(); ++b) {
    const auto hidden = forward.hidden.row(b);
    const auto dcode = grad_codes.row(b);
    for (std::size_t k = 0; k < h; ++k) {
      if (hidden[k] <= 0.0) {
        grad_pre[k] = 0.0;
        continue;
      }
      double acc = 0.0;
      const auto wh = e.w_hash.row(k);
      auto gh = g.w_hash.row(k);
      for (std::size_t j = 0; j < dcode.size(); ++j) {
        acc += dcode[j] * wh[j];
        gh[j] += hidden[k] * dcode[j];
      }
      if (has_logits) {
        const auto dlog = grad_logits.row(b);
        const auto wc = e.w_cls.row(k);
        auto gc = g.w_cls.row(k);
        for (std::size_t j = 0; j < dlog.size(); ++j) {
          acc += dlog[j] * wc[j];
          gc[j] += hidden[k] * dlog[j];
        }
      }
      grad_pre[k] = acc;
    }
    const auto x = forward.inputs.row(b);
    for (std::size_t d = 0; d < x.size(); ++d) {
      if (x[d] == 0.0) continue;
      auto gw = g.w_hidden.row(d);
      for (std::size_t k = 0; k < h; ++k) gw[k] += x[d] * grad_pre[k];
    }
    for (std::size_t k = 0; k < h; ++k) g.b_hidden[k] += grad_pre[k];
  }
}

Matrix EncodeActivations(const EncoderParams& params,
                         const FloatMatrix& features, int modality) {
  std::vector<std::size_t> rows(features.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return ForwardBatch(params, features, rows, modality).codes;
}

void SgdStep(EncoderParams& params, EncoderParams& grads,
             EncoderParams& velocity, const SgdConfig& config) {
  auto p_blocks = Blocks(params);
  auto g_blocks = Blocks(grads);
  auto v_blocks = Blocks(velocity);
  for (std::size_t b = 0; b < g_blocks.size(); ++b) {
    if (g_blocks[b].values.size() != p_blocks[b].values.size() ||
        v_blocks[b].values.size() != p_blocks[b].values.size()) {
      throw ValidationError("sgd: gradient shape mismatch in " + p_blocks[b].name);
    }
    for (double v : g_blocks[b].values) {
      if (!std::isfinite(v)) {
        throw NonFiniteGradientError("non-finite gradient in block " +
                                     g_blocks[b].name);
      }
    }
  }
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    const BlockKind kind = p_blocks[b].kind;
    const bool decay =
        kind == BlockKind::kBackboneWeight || kind == BlockKind::kHeadWeight;
    const bool backbone =
        kind == BlockKind::kBackboneWeight || kind == BlockKind::kBackboneBias;
    const double lr = backbone ? config.lr_backbone : config.lr_head;
    const double wd = decay ? config.weight_decay : 0.0;
    auto w = p_blocks[b].values;
    auto g = g_blocks[b].values;
    auto v = v_blocks[b].values;
    for (std::size_t k = 0; k < w.size(); ++k) {
      v[k] = config.momentum * v[k] + (g[k] + wd * w[k]);
      w[k] -= lr * v[k];
    }
  }
}

void SaveCheckpoint(const EncoderParams& params,
                    const std::filesystem::path& path) {
  io::Writer w;
  w.Header(kCheckpointMagic, kCheckpointFormatVersion);
  const ModelDims& d = params.dims;
  for (std::size_t v : {d.input1, d.input2, d.hidden, d.code_length, d.num_labels}) {
    w.U32(static_cast<std::uint32_t>(v));
  }
  for (const ParamBlock& block : Blocks(const_cast<EncoderParams&>(params))) {
    for (double v : block.values) w.F64(v);
  }
  w.WriteTo(path);
}

EncoderParams LoadCheckpoint(const std::filesystem::path& path) {
  auto r = io::Reader::FromFile(path);
  r.Header(kCheckpointMagic, kCheckpointFormatVersion);
  ModelDims dims;
  dims.input1 = r.U32();
  dims.input2 = r.U32();
  dims.hidden = r.U32();
  dims.code_length = r.U32();
  dims.num_labels = r.U32();
  try {
    dims.Validate();
  } catch (const ValidationError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  EncoderParams shape;
  shape.dims = dims;
  EncoderParams params = EncoderParams::ZerosLike(shape);
  std::size_t total = 0;
  for (const ParamBlock& block : Blocks(params)) total += block.values.size();
  if (r.remaining() != 8 * total) throw FormatError(path.string() + ": truncated file");
  for (const ParamBlock& block : Blocks(params)) {
    for (double& v : block.values) v = r.F64();
  }
  r.ExpectEnd();
  return params;
}

}  // namespace jcch
