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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "jcch/binary_io.hpp"
#include "jcch/error.hpp"
#include "jcch/rng.hpp"

namespace jcch {
namespace {

constexpr char kDatasetMagic[] = "JCCH";

bool ProbabilityOpen(double p) { return p > 0.0 && p < 1.0; }

std::vector<std::size_t> DrawRow(const SynthSpec& spec, Rng& rng) {
  std::vector<std::size_t> row;
  switch (spec.label_model) {
    case LabelModel::kUniform:
      for (std::size_t s = 0; s < spec.num_labels; ++s) {
        if (rng.Bernoulli(spec.p)) row.push_back(s);
      }
      break;
    case LabelModel::kChain: {
      // 1-based label s > 1 has parent ceil(s/2); in 0-based ids the parent
      // of s is ceil((s+1)/2) - 1 = s/2 (integer division), s >= 1.
      std::vector<bool> set(spec.num_labels, false);
      for (std::size_t s = 0; s < spec.num_labels; ++s) {
        double p = spec.p_root;
        if (s > 0) p = set[s / 2] ? spec.p_child : spec.p_child / 4.0;
        set[s] = rng.Bernoulli(p);
        if (set[s]) row.push_back(s);
      }
      break;
    }
    case LabelModel::kMulticlass:
      row.push_back(static_cast<std::size_t>(rng.UniformInt(spec.num_labels)));
      break;
  }
  return row;
}

}  // namespace

void SynthSpec::Validate() const {
  if (n == 0) throw ValidationError("synth: n must be >= 1");
  if (num_labels == 0) throw ValidationError("synth: C must be >= 1");
  if (d1 == 0 || d2 == 0) throw ValidationError("synth: d1, d2 must be >= 1");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ValidationError("synth: noise_sigma must be finite and >= 0");
  }
  switch (label_model) {
    case LabelModel::kUniform:
      if (!ProbabilityOpen(p)) throw ValidationError("synth: p must be in (0,1)");
      break;
    case LabelModel::kChain:
      if (!ProbabilityOpen(p_root) || !ProbabilityOpen(p_child)) {
        throw ValidationError("synth: p_root and p_child must be in (0,1)");
      }
      break;
    case LabelModel::kMulticlass:
      break;
  }
}

void CrossModalDataset::Validate() const {
  if (features1.rows() != labels.n() || features2.rows() != labels.n()) {
    throw ValidationError("dataset: feature rows do not match label rows");
  }
  for (const auto* m : {&features1, &features2}) {
    for (float v : m->values()) {
      if (!std::isfinite(v)) {
        throw ValidationError("dataset: non-finite feature value");
      }
    }
  }
}

CrossModalDataset CrossModalDataset::Subset(
    const std::vector<std::size_t>& indices) const {
  CrossModalDataset out;
  out.labels = labels.Subset(indices);
  out.paired = paired;
  out.features1 = FloatMatrix(indices.size(), features1.cols());
  out.features2 = FloatMatrix(indices.size(), features2.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    std::copy_n(features1.row(indices[r]).data(), features1.cols(),
                out.features1.row(r).data());
    std::copy_n(features2.row(indices[r]).data(), features2.cols(),
                out.features2.row(r).data());
  }
  return out;
}

LabelMatrix GenerateLabels(const SynthSpec& spec) {
  spec.Validate();
  Rng rng = Rng::Stream(spec.seed, rng_stream::kLabels);
  std::vector<std::vector<std::size_t>> rows(spec.n);
  for (auto& row : rows) {
    do {
      row = DrawRow(spec, rng);
    } while (row.empty());
  }
  return LabelMatrix(spec.num_labels, rows);
}

CrossModalDataset GenerateSynthetic(const SynthSpec& spec) {
  CrossModalDataset ds;
  ds.labels = GenerateLabels(spec);
  ds.paired = true;

  const std::size_t c = spec.num_labels;
  auto make_modality = [&](std::size_t dim, std::uint64_t proj_stream,
                           std::uint64_t noise_stream) {
    Rng proj_rng = Rng::Stream(spec.seed, proj_stream);
    Matrix projection(c, dim);
    for (double& v : projection.values()) v = proj_rng.Normal();

    Rng noise_rng = Rng::Stream(spec.seed, noise_stream);
    FloatMatrix features(spec.n, dim);
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < spec.n; ++i) {
      auto ids = ds.labels.LabelsOf(i);
      const double z = 1.0 / std::sqrt(static_cast<double>(ids.size()));
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t s : ids) {
        for (std::size_t d = 0; d < dim; ++d) row[d] += z * projection(s, d);
      }
      for (std::size_t d = 0; d < dim; ++d) {
        features(i, d) =
            static_cast<float>(row[d] + spec.noise_sigma * noise_rng.Normal());
      }
    }
    return features;
  };
  ds.features1 =
      make_modality(spec.d1, rng_stream::kProjection1, rng_stream::kFeatures1);
  ds.features2 =
      make_modality(spec.d2, rng_stream::kProjection2, rng_stream::kFeatures2);
  return ds;
}

DatasetSplit Split(std::size_t n, const SplitSpec& spec) {
  if (spec.n_query + 1 > n) {
    throw ValidationError("split: n_query must leave a non-empty database");
  }
  if (spec.n_train > n - spec.n_query) {
    throw ValidationError("split: n_train exceeds database size");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng::Stream(spec.seed, rng_stream::kSplit);
  rng.Shuffle(order);

  DatasetSplit out;
  out.query.assign(order.begin(), order.begin() + spec.n_query);
  out.database.assign(order.begin() + spec.n_query, order.end());
  out.train.assign(out.database.begin(), out.database.begin() + spec.n_train);
  std::sort(out.query.begin(), out.query.end());
  std::sort(out.database.begin(), out.database.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

void SaveDataset(const CrossModalDataset& ds,
                 const std::filesystem::path& path) {
  ds.Validate();
  const std::size_t n = ds.n();
  const std::size_t c = ds.labels.num_labels();
  io::Writer w;
  w.Header(kDatasetMagic, kDatasetFormatVersion);
  w.U32(static_cast<std::uint32_t>(n));
  w.U32(static_cast<std::uint32_t>(c));
  w.U32(static_cast<std::uint32_t>(ds.features1.cols()));
  w.U32(static_cast<std::uint32_t>(ds.features2.cols()));
  const std::size_t row_bytes = (c + 7) / 8;
  std::vector<std::uint8_t> packed(row_bytes);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(packed.begin(), packed.end(), 0);
    for (std::size_t s : ds.labels.LabelsOf(i)) {
      packed[s / 8] |= static_cast<std::uint8_t>(1U << (s % 8));
    }
    w.Bytes(packed.data(), packed.size());
  }
  for (float v : ds.features1.values()) w.F32(v);
  for (float v : ds.features2.values()) w.F32(v);
  w.WriteTo(path);
}

CrossModalDataset LoadDataset(const std::filesystem::path& path) {
  auto r = io::Reader::FromFile(path);
  r.Header(kDatasetMagic, kDatasetFormatVersion);
  const std::size_t n = r.U32();
  const std::size_t c = r.U32();
  const std::size_t d1 = r.U32();
  const std::size_t d2 = r.U32();
  const std::size_t row_bytes = (c + 7) / 8;
  const std::size_t expected = n * row_bytes + 4 * n * (d1 + d2);
  if (r.remaining() < expected) throw FormatError(path.string() + ": truncated file");

  std::vector<std::vector<std::size_t>> rows(n);
  std::vector<std::uint8_t> packed(row_bytes);
  for (std::size_t i = 0; i < n; ++i) {
    r.Bytes(packed.data(), packed.size());
    for (std::size_t s = 0; s < c; ++s) {
      if ((packed[s / 8] >> (s % 8)) & 1U) rows[i].push_back(s);
    }
  }
  CrossModalDataset ds;
  try {
    ds.labels = LabelMatrix(c, rows);
  } catch (const ValidationError& e) {
    throw FormatError(path.string() + ": invalid labels: " + e.what());
  }
  ds.features1 = FloatMatrix(n, d1);
  ds.features2 = FloatMatrix(n, d2);
  for (float& v : ds.features1.values()) v = r.F32();
  for (float& v : ds.features2.values()) v = r.F32();
  r.ExpectEnd();
  ds.paired = true;
  return ds;
}

namespace {

std::vector<std::vector<std::string>> ReadCsvCells(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!rows.empty() && cells.size() != rows.front().size()) {
      throw FormatError(path.string() + ": ragged CSV row " +
                        std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw FormatError(path.string() + ": empty CSV");
  return rows;
}

double ParseCell(const std::string& cell, const std::filesystem::path& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw FormatError(path.string() + ": bad numeric cell '" + cell + "'");
  }
  while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
  if (used != cell.size()) {
    throw FormatError(path.string() + ": bad numeric cell '" + cell + "'");
  }
  return v;
}

}  // namespace

LabelMatrix ReadLabelsCsv(const std::filesystem::path& path) {
  const auto rows = ReadCsvCells(path);
  const std::size_t n = rows.size();
  const std::size_t c = rows.front().size();
  std::vector<std::uint8_t> dense(n * c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < c; ++s) {
      const double v = ParseCell(rows[i][s], path);
      if (v != 0.0 && v != 1.0) {
        throw FormatError(path.string() + ": label cells must be 0 or 1");
      }
      dense[i * c + s] = v == 1.0 ? 1 : 0;
    }
  }
  return LabelMatrix::FromDense(n, c, dense);
}

FloatMatrix ReadFeaturesCsv(const std::filesystem::path& path) {
  const auto rows = ReadCsvCells(path);
  FloatMatrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t d = 0; d < out.cols(); ++d) {
      out(i, d) = static_cast<float>(ParseCell(rows[i][d], path));
    }
  }
  return out;
}

}  // namespace jcch
