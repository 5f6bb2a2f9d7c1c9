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

#include "jcch/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "jcch/binary_io.hpp"
#include "jcch/error.hpp"
#include "jcch/rng.hpp"

namespace jcch {
namespace {

constexpr char kCoefficientMagic[] = "JCCF";

// Runs body(begin, end) over contiguous chunks of [0, n). Each chunk owns
// its output rows, so the result does not depend on the thread count.
template <typename Body>
void ParallelRows(std::size_t n, unsigned threads, Body body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(body, begin, end);
  }
  for (auto& th : pool) th.join();
}

void ValidateAnchors(const AnchorSet& anchors, std::size_t n) {
  if (anchors.indices.empty()) throw ValidationError("anchor set is empty");
  if (anchors.indices.size() > n) {
    throw ValidationError("anchor set larger than the training set");
  }
  for (std::size_t k = 0; k < anchors.indices.size(); ++k) {
    if (anchors.indices[k] >= n) {
      throw ValidationError("anchor index out of range");
    }
    if (k > 0 && anchors.indices[k] <= anchors.indices[k - 1]) {
      throw ValidationError("anchor indices must be sorted and distinct");
    }
  }
}

std::vector<double> InverseCounts(const LabelMatrix& labels) {
  std::vector<double> inv(labels.n());
  for (std::size_t i = 0; i < labels.n(); ++i) {
    inv[i] = 1.0 / static_cast<double>(labels.Count(i));
  }
  return inv;
}

}  // namespace

CoefficientSet FullTripletCoefficients::Reduce() const {
  CoefficientSet out;
  out.q = Matrix(n, num_labels);
  out.u = u;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < num_labels; ++s) {
      double total = 0.0;
      for (std::size_t t = 0; t < num_labels; ++t) total += q(i, s, t);
      out.q(i, s) = total;
    }
  }
  out.anchor_size = n;
  return out;
}

AnchorSet AnchorSet::Sample(std::size_t n, std::size_t size,
                            std::uint64_t seed) {
  if (size == 0) throw ValidationError("anchor set is empty");
  if (size > n) throw ValidationError("anchor size l exceeds n");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng::Stream(seed, rng_stream::kAnchors);
  // Partial Fisher-Yates: the first `size` slots are a uniform sample.
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.UniformInt(n - i));
    std::swap(order[i], order[j]);
  }
  AnchorSet out;
  out.indices.assign(order.begin(), order.begin() + size);
  std::sort(out.indices.begin(), out.indices.end());
  out.seed = seed;
  return out;
}

AnchorSet AnchorSet::All(std::size_t n) {
  AnchorSet out;
  out.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.indices[i] = i;
  return out;
}

EstimateResult EstimateCoefficients(const LabelMatrix& labels,
                                    const AnchorSet& anchors, bool keep_full,
                                    unsigned threads) {
  const std::size_t n = labels.n();
  const std::size_t c = labels.num_labels();
  ValidateAnchors(anchors, n);
  const auto& a = anchors.indices;
  const double ratio = static_cast<double>(n) / static_cast<double>(a.size());
  const double q_scale = ratio * ratio;
  const std::vector<double> inv_count = InverseCounts(labels);

  EstimateResult result;
  CoefficientSet& out = result.coefficients;
  out.q = Matrix(n, c);
  out.u = Matrix(n, c);
  out.anchor_size = a.size();
  if (keep_full) result.full.emplace(n, c);

  // First pass: q from (positive, negative) pairs drawn among anchors.
  ParallelRows(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> pos_mass(c);
    std::vector<double> neg_mass(c);
    for (std::size_t i = begin; i < end; ++i) {
      std::fill(pos_mass.begin(), pos_mass.end(), 0.0);
      std::fill(neg_mass.begin(), neg_mass.end(), 0.0);
      for (std::size_t j : a) {
        if (j == i) continue;
        if (labels.SimilarUnchecked(i, j)) {
          const double w =
              1.0 / static_cast<double>(labels.IntersectionCount(i, j));
          for (std::size_t s : labels.LabelsOf(i)) {
            if (labels.Has(j, s)) pos_mass[s] += w;
          }
        } else {
          for (std::size_t t : labels.LabelsOf(j)) neg_mass[t] += inv_count[j];
        }
      }
      double neg_total = 0.0;
      for (double v : neg_mass) neg_total += v;
      for (std::size_t s : labels.LabelsOf(i)) {
        out.q(i, s) = q_scale * pos_mass[s] * neg_total;
      }
      if (keep_full) {
        for (std::size_t s : labels.LabelsOf(i)) {
          for (std::size_t t = 0; t < c; ++t) {
            result.full->q(i, s, t) = q_scale * pos_mass[s] * neg_mass[t];
          }
        }
      }
    }
  });

  // Second pass: |p_a| and |n_a| of each anchor against the full set.
  std::vector<double> num_pos(a.size());
  std::vector<double> num_neg(a.size());
  ParallelRows(a.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t anchor = a[idx];
      std::size_t pos = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != anchor && labels.SimilarUnchecked(anchor, j)) ++pos;
      }
      num_pos[idx] = static_cast<double>(pos);
      num_neg[idx] = static_cast<double>(n - 1 - pos);
    }
  });

  // u, gathered per target item over anchors in ascending order.
  ParallelRows(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      auto row = out.u.row(j);
      for (std::size_t idx = 0; idx < a.size(); ++idx) {
        const std::size_t anchor = a[idx];
        if (anchor == j) continue;
        if (labels.SimilarUnchecked(anchor, j)) {
          const double share =
              1.0 / static_cast<double>(labels.IntersectionCount(anchor, j));
          for (std::size_t s : labels.LabelsOf(j)) {
            if (labels.Has(anchor, s)) row[s] += num_neg[idx] * share;
          }
        } else {
          for (std::size_t t : labels.LabelsOf(j)) {
            row[t] += num_pos[idx] * inv_count[j];
          }
        }
      }
      for (double& v : row) v *= ratio;
    }
  });

  if (keep_full) result.full->u = out.u;
  return result;
}

FullTripletCoefficients ExactCoefficients(const LabelMatrix& labels) {
  const std::size_t n = labels.n();
  const std::size_t c = labels.num_labels();
  FullTripletCoefficients out(n, c);

  std::vector<std::size_t> num_pos(n, 0);
  std::vector<std::size_t> num_neg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (labels.SimilarUnchecked(i, j)) {
        ++num_pos[i];
      } else {
        ++num_neg[i];
      }
    }
  }

  std::vector<double> pos_sum(c);
  std::vector<double> neg_sum(c);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(pos_sum.begin(), pos_sum.end(), 0.0);
    std::fill(neg_sum.begin(), neg_sum.end(), 0.0);
    for (std::size_t other = 0; other < n; ++other) {
      if (other == i) continue;
      const std::size_t shared = labels.IntersectionCount(i, other);
      if (shared > 0) {
        for (std::size_t s = 0; s < c; ++s) {
          if (labels.Has(i, s) && labels.Has(other, s)) {
            pos_sum[s] += 1.0 / static_cast<double>(shared);
            // u^(1): `other` is the positive, i the anchor.
            out.u(other, s) += static_cast<double>(num_neg[i]) /
                               static_cast<double>(shared);
          }
        }
      } else {
        const double w = 1.0 / static_cast<double>(labels.Count(other));
        for (std::size_t t = 0; t < c; ++t) {
          if (!labels.Has(other, t)) continue;
          neg_sum[t] += w;
          // u^(2): `other` is the negative of anchor i.
          out.u(other, t) += static_cast<double>(num_pos[i]) * w;
        }
      }
    }
    for (std::size_t s = 0; s < c; ++s) {
      for (std::size_t t = 0; t < c; ++t) out.q(i, s, t) = pos_sum[s] * neg_sum[t];
    }
  }
  return out;
}

FullTripletCoefficients BruteForceCoefficients(const LabelMatrix& labels,
                                               std::size_t cap) {
  const std::size_t n = labels.n();
  if (n > cap) {
    throw ValidationError("brute-force coefficients: n=" + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
  }
  const std::size_t c = labels.num_labels();
  FullTripletCoefficients out(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !labels.SimilarUnchecked(i, j)) continue;
      const double shared = static_cast<double>(labels.IntersectionCount(i, j));
      for (std::size_t k = 0; k < n; ++k) {
        if (labels.SimilarUnchecked(i, k)) continue;
        const double w = 1.0 / (shared * static_cast<double>(labels.Count(k)));
        for (std::size_t s = 0; s < c; ++s) {
          if (!labels.Has(i, s) || !labels.Has(j, s)) continue;
          for (std::size_t t = 0; t < c; ++t) {
            if (!labels.Has(k, t)) continue;
            out.q(i, s, t) += w;
            out.u(j, s) += w;
            out.u(k, t) += w;
          }
        }
      }
    }
  }
  return out;
}

CoefficientSet Rescale(const CoefficientSet& coeffs,
                       const LabelMatrix& labels) {
  if (coeffs.n() != labels.n() || coeffs.num_labels() != labels.num_labels()) {
    throw ValidationError("rescale: coefficient shape does not match labels");
  }
  double q_total = 0.0;
  for (double v : coeffs.q.values()) q_total += v;
  const double mean =
      q_total / static_cast<double>(labels.TotalLabelCount());
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DegenerateError(
        "degenerate similarity structure: no (anchor, positive, negative) "
        "triplets, coefficient mean is zero");
  }
  CoefficientSet out = coeffs;
  for (double& v : out.q.values()) v /= mean;
  for (double& v : out.u.values()) v /= mean;
  out.rescaled = true;
  return out;
}

CoefficientSet BaselineCoefficients(const LabelMatrix& labels) {
  CoefficientSet out;
  out.q = Matrix(labels.n(), labels.num_labels());
  out.u = Matrix(labels.n(), labels.num_labels());
  for (std::size_t i = 0; i < labels.n(); ++i) {
    const double q = 1.0 / static_cast<double>(labels.Count(i));
    for (std::size_t s : labels.LabelsOf(i)) {
      out.q(i, s) = q;
      out.u(i, s) = 1.0;
    }
  }
  out.anchor_size = labels.n();
  return out;
}

SculConstants SculConstantsFor(std::size_t n, std::size_t num_labels, double p,
                               std::size_t label_count, SculMode mode) {
  const double nn = static_cast<double>(n);
  const double c = static_cast<double>(num_labels);
  SculConstants out;
  if (num_labels == 0) throw ValidationError("scul: C must be >= 1");
  if (mode == SculMode::kMulticlass) {
    out.m_ro = (nn / c) * (nn / c) * (c - 1.0);
    out.q = 1.0;
    out.u = 2.0;
    return out;
  }
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("scul: p must be in (0,1)");
  if (num_labels < 2) throw ValidationError("scul: multilabel needs C >= 2");
  const double x = static_cast<double>(label_count);
  out.m_ro = (c - 1.0) * p * p * nn * nn;
  out.q = (c - x) / (c - 1.0) * std::pow(1.0 - p, x);
  out.u = out.q + (1.0 - p) * (1.0 - p) * std::pow(1.0 - p * p, c - 2.0);
  return out;
}

void SaveCoefficients(const CoefficientSet& coeffs,
                      const std::filesystem::path& path) {
  io::Writer w;
  w.Header(kCoefficientMagic, kCoefficientFormatVersion);
  w.U32(static_cast<std::uint32_t>(coeffs.n()));
  w.U32(static_cast<std::uint32_t>(coeffs.num_labels()));
  w.U32(static_cast<std::uint32_t>(coeffs.anchor_size));
  w.U8(coeffs.rescaled ? 1 : 0);
  for (double v : coeffs.q.values()) w.F64(v);
  for (double v : coeffs.u.values()) w.F64(v);
  w.WriteTo(path);
}

CoefficientSet LoadCoefficients(const std::filesystem::path& path) {
  auto r = io::Reader::FromFile(path);
  r.Header(kCoefficientMagic, kCoefficientFormatVersion);
  CoefficientSet out;
  const std::size_t n = r.U32();
  const std::size_t c = r.U32();
  out.anchor_size = r.U32();
  const std::uint8_t flag = r.U8();
  if (flag > 1) throw FormatError(path.string() + ": bad rescaled flag");
  out.rescaled = flag == 1;
  if (r.remaining() != 16 * n * c) {
    throw FormatError(path.string() + ": truncated file");
  }
  out.q = Matrix(n, c);
  out.u = Matrix(n, c);
  for (double& v : out.q.values()) v = r.F64();
  for (double& v : out.u.values()) v = r.F64();
  r.ExpectEnd();
  return out;
}

}  // namespace jcch
