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

#ifndef JCCH_MODEL_HPP_
#define JCCH_MODEL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "jcch/error.hpp"
#include "jcch/losses.hpp"
#include "jcch/matrix.hpp"

namespace jcch {

struct ModelDims {
  std::size_t input1 = 0;  // d1
  std::size_t input2 = 0;  // d2
  std::size_t hidden = 256;
  std::size_t code_length = 32;
  std::size_t num_labels = 0;

  std::size_t input(int modality) const { return modality == 0 ? input1 : input2; }
  void Validate() const;
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

// One-hidden-layer ReLU backbone with two linear heads: the hash layer
// (activations F) and the auxiliary classifier (logits).
struct ModalityEncoder {
  Matrix w_hidden;                // d x h
  std::vector<double> b_hidden;   // h
  Matrix w_hash;                  // h x r
  Matrix w_cls;                   // h x C

  friend bool operator==(const ModalityEncoder&, const ModalityEncoder&) = default;
};

// Both encoders plus the single center matrix they share.
struct EncoderParams {
  ModelDims dims;
  std::array<ModalityEncoder, 2> encoders;
  CenterMatrix centers;

  // Same shapes, all zeros.
  static EncoderParams ZerosLike(const EncoderParams& other);

  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

enum class BlockKind {
  kBackboneWeight,  // lr_backbone, weight decay
  kBackboneBias,    // lr_backbone, no weight decay
  kHeadWeight,      // lr_head, weight decay
  kCenters,         // lr_head, no weight decay
};

struct ParamBlock {
  std::string name;
  std::span<double> values;
  BlockKind kind;
};

// Parameter blocks in checkpoint order: centers, then for modality 1 and 2
// in turn w_hidden, b_hidden, w_hash, w_cls.
std::vector<ParamBlock> Blocks(EncoderParams& params);

// Hash and classifier weights ~ N(0, 0.01^2), centers ~ N(0, 0.5^2), hidden
// weights ~ N(0, 2/(d+h)), hidden bias 0.
EncoderParams InitParams(const ModelDims& dims, std::uint64_t seed);

struct ForwardResult {
  std::vector<double> hidden;  // after ReLU
  std::vector<double> code;    // F(x)
  std::vector<double> logits;
};

// modality is 0 or 1. Throws ValidationError on an input of the wrong size.
ForwardResult Forward(const EncoderParams& params, std::span<const double> x,
                      int modality);

// Row-wise forward pass over selected rows of a feature matrix.
struct BatchForward {
  Matrix inputs;  // b x d, promoted to f64
  Matrix hidden;  // b x h, after ReLU
  Matrix codes;   // b x r
  Matrix logits;  // b x C
};
BatchForward ForwardBatch(const EncoderParams& params,
                          const FloatMatrix& features,
                          std::span<const std::size_t> rows, int modality);

// Accumulates parameter gradients of one modality given upstream gradients
// on its codes and logits.
void BackwardBatch(const EncoderParams& params, const BatchForward& forward,
                   const Matrix& grad_codes, const Matrix& grad_logits,
                   int modality, EncoderParams& grads);

// Real-valued hash layer outputs for every row.
Matrix EncodeActivations(const EncoderParams& params,
                         const FloatMatrix& features, int modality);

struct SgdConfig {
  double lr_backbone = 0.01;
  double lr_head = 0.01;
  double momentum = 0.9;
  double weight_decay = 1e-4;
};

class NonFiniteGradientError : public Error {
 public:
  using Error::Error;
};

// v <- momentum v + (g + wd w); w <- w - lr v. Weight decay skips biases and
// centers. Throws NonFiniteGradientError before touching any state if a
// gradient entry is not finite.
void SgdStep(EncoderParams& params, EncoderParams& grads,
             EncoderParams& velocity, const SgdConfig& config);

// "JCCM" u16 version=1, u32 d1, d2, hidden, r, C, then every block of
// Blocks() in order as f64 little-endian.
inline constexpr std::uint16_t kCheckpointFormatVersion = 1;
void SaveCheckpoint(const EncoderParams& params,
                    const std::filesystem::path& path);
EncoderParams LoadCheckpoint(const std::filesystem::path& path);

}  // namespace jcch

#endif  // JCCH_MODEL_HPP_
