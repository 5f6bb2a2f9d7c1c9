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

#include "jcch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "jcch/dataset.hpp"
#include "jcch/error.hpp"
#include "jcch/rng.hpp"

namespace jcch {
namespace {

void CheckCap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ValidationError("triplet enumeration: n=" + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
  }
}

void CheckCodes(const Matrix& codes, const LabelMatrix& labels) {
  if (codes.rows() != labels.n()) {
    throw ValidationError("code rows do not match label rows");
  }
}

// Anchors from `query`, positives and negatives from `base`.
double DirectedTripletLoss(const Matrix& query, const Matrix& base,
                           const LabelMatrix& labels, Metric metric,
                           double margin) {
  const std::size_t n = labels.n();
  double total = 0.0;
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = Distance(query.row(i), base.row(j), metric);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !labels.SimilarUnchecked(i, j)) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (labels.SimilarUnchecked(i, k)) continue;
        total += GHinge(dist[j], dist[k], margin);
      }
    }
  }
  return total;
}

FullTripletCoefficients Scaled(FullTripletCoefficients full, double scale) {
  for (double& v : full.q_full) v *= scale;
  for (double& v : full.u.values()) v *= scale;
  return full;
}

}  // namespace

double TripletLossSingle(const Matrix& codes, const LabelMatrix& labels,
                         Metric metric, double margin, std::size_t cap) {
  CheckCap(labels.n(), cap);
  CheckCodes(codes, labels);
  return DirectedTripletLoss(codes, codes, labels, metric, margin);
}

CrossTripletLoss TripletLossCross(const Matrix& codes1, const Matrix& codes2,
                                  const LabelMatrix& labels, Metric metric,
                                  double margin, std::size_t cap) {
  CheckCap(labels.n(), cap);
  CheckCodes(codes1, labels);
  CheckCodes(codes2, labels);
  CrossTripletLoss out;
  out.query1 = DirectedTripletLoss(codes1, codes2, labels, metric, margin);
  out.query2 = DirectedTripletLoss(codes2, codes1, labels, metric, margin);
  out.total = out.query1 + out.query2;
  return out;
}

double StructuredBound(const Matrix& codes, const LabelMatrix& labels,
                       const FullTripletCoefficients& full,
                       const CenterMatrix& centers, Metric metric,
                       double margin) {
  CheckCodes(codes, labels);
  if (full.n != labels.n() || full.num_labels != labels.num_labels() ||
      centers.num_labels() != labels.num_labels()) {
    throw ValidationError("coefficients / centers do not match labels");
  }
  const std::size_t c = labels.num_labels();
  std::vector<double> dist(c);
  double total = 0.0;
  for (std::size_t i = 0; i < labels.n(); ++i) {
    for (std::size_t s = 0; s < c; ++s) {
      dist[s] = DistanceToCenter(codes.row(i), centers, s, metric);
    }
    for (std::size_t s : labels.LabelsOf(i)) {
      for (std::size_t t = 0; t < c; ++t) {
        if (labels.Has(i, t)) continue;
        const double q = full.q(i, s, t);
        if (q != 0.0) total += q * GHinge(dist[s], dist[t], margin);
      }
      total += full.u(i, s) * dist[s];
    }
  }
  return total;
}

double ImprovedBound(const Matrix& codes, const LabelMatrix& labels,
                     const CoefficientSet& coeffs, const CenterMatrix& centers,
                     Metric metric) {
  std::vector<std::size_t> items(labels.n());
  for (std::size_t i = 0; i < items.size(); ++i) items[i] = i;
  return ImprovedUnaryLoss(codes, items, labels, coeffs, centers, 1.0, metric);
}

CrossBound CrossModalBound(const Matrix& codes1, const Matrix& codes2,
                           const LabelMatrix& labels,
                           const CoefficientSet& coeffs,
                           const CenterMatrix& centers, Metric metric) {
  CheckCodes(codes1, labels);
  CheckCodes(codes2, labels);
  if (coeffs.n() != labels.n() || centers.num_labels() != labels.num_labels()) {
    throw ValidationError("coefficients / centers do not match labels");
  }
  CrossBound out;
  for (std::size_t i = 0; i < labels.n(); ++i) {
    for (std::size_t s : labels.LabelsOf(i)) {
      const double q = coeffs.q(i, s);
      const double u = coeffs.u(i, s);
      if (q != 0.0) {
        out.query1 += q * CenterSoftmaxLoss(codes1.row(i), s, centers, metric);
        out.query2 += q * CenterSoftmaxLoss(codes2.row(i), s, centers, metric);
      }
      out.query1 += u * DistanceToCenter(codes2.row(i), centers, s, metric);
      out.query2 += u * DistanceToCenter(codes1.row(i), centers, s, metric);
    }
  }
  out.total = out.query1 + out.query2;
  return out;
}

BoundReport CertifyInstance(std::uint64_t seed, const CertifySpec& spec) {
  Rng rng = Rng::Stream(seed, rng_stream::kCertify);
  SynthSpec synth;
  synth.n = 2 + static_cast<std::size_t>(rng.UniformInt(spec.max_n - 1));
  synth.num_labels = 1 + static_cast<std::size_t>(rng.UniformInt(spec.max_labels));
  synth.d1 = synth.d2 = 1;
  synth.seed = rng.NextU64();
  switch (rng.UniformInt(3)) {
    case 0:
      synth.label_model = LabelModel::kUniform;
      synth.p = 0.15 + 0.5 * rng.Uniform();
      break;
    case 1:
      synth.label_model = LabelModel::kChain;
      synth.p_root = 0.3 + 0.5 * rng.Uniform();
      synth.p_child = 0.2 + 0.6 * rng.Uniform();
      break;
    default:
      synth.label_model = LabelModel::kMulticlass;
      break;
  }
  const LabelMatrix labels = GenerateLabels(synth);
  const std::size_t n = labels.n();
  const std::size_t c = labels.num_labels();
  const std::size_t r =
      1 + static_cast<std::size_t>(rng.UniformInt(spec.max_code_length));
  const Metric metric = seed % 2 == 0 ? Metric::kL2 : Metric::kL1;

  // Geometry: generic Gaussian codes, or codes pulled onto one of their own
  // centers (near-tight bound).
  const bool near_centers = rng.UniformInt(2) == 1;
  const double center_scale = near_centers ? 0.2 : 1.0;
  const double code_noise = near_centers ? 0.02 * rng.Uniform() : 1.0;
  CenterMatrix centers(r, c);
  for (double& v : centers.matrix().values()) v = center_scale * rng.Normal();
  auto draw_codes = [&] {
    Matrix codes(n, r);
    for (std::size_t i = 0; i < n; ++i) {
      auto own = labels.LabelsOf(i);
      const std::size_t anchor_label =
          own[static_cast<std::size_t>(rng.UniformInt(own.size()))];
      for (std::size_t k = 0; k < r; ++k) {
        const double base = near_centers ? centers(k, anchor_label) : 0.0;
        codes(i, k) = base + code_noise * rng.Normal();
      }
    }
    return codes;
  };
  const Matrix codes1 = draw_codes();
  const Matrix codes2 = draw_codes();

  const FullTripletCoefficients full =
      Scaled(ExactCoefficients(labels), spec.coefficient_scale);
  const CoefficientSet reduced = full.Reduce();

  BoundReport report;
  report.seed = seed;
  report.n = n;
  report.num_labels = c;
  report.code_length = r;
  report.metric = metric;
  report.margin = spec.margin;
  const std::size_t cap = std::max(spec.max_n, kDefaultTripletCap);
  report.lhs = TripletLossSingle(codes1, labels, metric, 0.0, cap);
  report.rhs_structured = StructuredBound(codes1, labels, full, centers, metric, 0.0);
  report.rhs_improved = ImprovedBound(codes1, labels, reduced, centers, metric);
  const CrossTripletLoss cross =
      TripletLossCross(codes1, codes2, labels, metric, 0.0, cap);
  const CrossBound cross_rhs =
      CrossModalBound(codes1, codes2, labels, reduced, centers, metric);
  report.lhs_cross = cross.total;
  report.rhs_cross = cross_rhs.total;
  report.lhs_margin = TripletLossSingle(codes1, labels, metric, spec.margin, cap);
  report.rhs_structured_margin =
      StructuredBound(codes1, labels, full, centers, metric, spec.margin);

  report.min_slack = std::min({
      report.rhs_structured - report.lhs,
      report.rhs_improved - report.rhs_structured,
      cross_rhs.query1 - cross.query1,
      cross_rhs.query2 - cross.query2,
      report.rhs_structured_margin - report.lhs_margin,
  });
  return report;
}

CertifyResult Certify(const CertifySpec& spec, std::size_t trials) {
  if (spec.max_n < 2 || spec.max_labels < 1 || spec.max_code_length < 1) {
    throw ValidationError("certify: instance bounds too small");
  }
  CertifyResult result;
  result.reports.resize(trials);
  const unsigned threads = std::max(1U, spec.threads);
  auto work = [&](unsigned worker) {
    for (std::size_t t = worker; t < trials; t += threads) {
      result.reports[t] = CertifyInstance(spec.base_seed + t, spec);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  result.min_slack =
      trials == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  for (const BoundReport& report : result.reports) {
    result.min_slack = std::min(result.min_slack, report.min_slack);
    if (!report.ok(spec.tolerance)) {
      ++result.violations;
      if (!result.first_violation_seed) result.first_violation_seed = report.seed;
    }
  }
  return result;
}

void WriteCertifyCsv(const CertifyResult& result, std::ostream& out) {
  out << "seed,n,C,r,metric,lhs,rhs7,rhs8,rhs12,min_slack,"
         "margin,lhs_margin,rhs7_margin,lhs_cross\n";
  const auto old_precision = out.precision(17);
  for (const BoundReport& r : result.reports) {
    out << r.seed << ',' << r.n << ',' << r.num_labels << ',' << r.code_length
        << ',' << MetricName(r.metric) << ',' << r.lhs << ','
        << r.rhs_structured << ',' << r.rhs_improved << ',' << r.rhs_cross
        << ',' << r.min_slack << ',' << r.margin << ',' << r.lhs_margin << ','
        << r.rhs_structured_margin << ',' << r.lhs_cross << '\n';
  }
  out.precision(old_precision);
}

}  // namespace jcch
