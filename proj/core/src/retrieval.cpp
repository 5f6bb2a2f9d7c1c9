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

#include "jcch/retrieval.hpp"

#include <bit>
#include <cmath>
#include <ostream>
#include <thread>

#include "jcch/binary_io.hpp"
#include "jcch/error.hpp"

namespace jcch {
namespace {

constexpr char kCodeMagic[] = "JCCB";

bool SharesLabel(const LabelMatrix& a, std::size_t i, const LabelMatrix& b,
                 std::size_t j) {
  for (std::size_t s : a.LabelsOf(i)) {
    if (b.Has(j, s)) return true;
  }
  return false;
}

}  // namespace

HashCodeSet::HashCodeSet(std::size_t n, std::size_t code_length)
    : n_(n),
      code_length_(code_length),
      words_((code_length + 63) / 64),
      bits_(n * words_, 0) {
  if (code_length == 0) throw ValidationError("code length must be >= 1");
}

HashCodeSet Encode(const Matrix& activations) {
  HashCodeSet codes(activations.rows(), activations.cols());
  for (std::size_t i = 0; i < activations.rows(); ++i) {
    auto words = codes.mutable_code(i);
    const auto row = activations.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!std::isfinite(row[j])) {
        throw ValidationError("encode: non-finite activation");
      }
      if (row[j] >= 0.0) words[j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return codes;
}

std::size_t Hamming(std::span<const std::uint64_t> a,
                    std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw ValidationError("hamming: length mismatch");
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  }
  return total;
}

std::vector<std::size_t> RankDatabase(std::span<const std::uint64_t> query,
                                      const HashCodeSet& database) {
  if (query.size() != database.words_per_code()) {
    throw ValidationError("rank: code length mismatch");
  }
  // Counting sort on distance in [0, r]; visiting the database in index
  // order keeps ties ascending.
  const std::size_t r = database.code_length();
  std::vector<std::size_t> distance(database.n());
  std::vector<std::size_t> bucket_start(r + 2, 0);
  for (std::size_t j = 0; j < database.n(); ++j) {
    distance[j] = Hamming(query, database.code(j));
    ++bucket_start[distance[j] + 1];
  }
  for (std::size_t d = 1; d < bucket_start.size(); ++d) {
    bucket_start[d] += bucket_start[d - 1];
  }
  std::vector<std::size_t> ranking(database.n());
  for (std::size_t j = 0; j < database.n(); ++j) {
    ranking[bucket_start[distance[j]]++] = j;
  }
  return ranking;
}

double AveragePrecision(std::span<const std::size_t> ranking,
                        const std::vector<bool>& relevance) {
  if (ranking.size() != relevance.size()) {
    throw ValidationError("average precision: length mismatch");
  }
  // Extended accumulator: the result is then correctly rounded for short
  // rankings such as (1 + 2/3) / 2.
  long double total = 0.0L;
  std::size_t hits = 0;
  for (std::size_t p = 0; p < ranking.size(); ++p) {
    if (ranking[p] >= relevance.size()) {
      throw ValidationError("average precision: ranking index out of range");
    }
    if (relevance[ranking[p]]) {
      ++hits;
      total += static_cast<long double>(hits) / static_cast<long double>(p + 1);
    }
  }
  return hits == 0 ? 0.0 : static_cast<double>(total / static_cast<long double>(hits));
}

EvalReport Evaluate(const HashCodeSet& queries, const HashCodeSet& database,
                    const LabelMatrix& query_labels,
                    const LabelMatrix& database_labels,
                    std::span<const std::size_t> ks, std::string direction,
                    unsigned threads) {
  if (queries.n() == 0) throw ValidationError("evaluate: empty query set");
  if (queries.code_length() != database.code_length()) {
    throw ValidationError("evaluate: query and database code lengths differ");
  }
  if (query_labels.n() != queries.n() || database_labels.n() != database.n()) {
    throw ValidationError("evaluate: labels do not match code counts");
  }
  if (query_labels.num_labels() != database_labels.num_labels()) {
    throw ValidationError("evaluate: label spaces differ");
  }

  const std::size_t nq = queries.n();
  const std::size_t ndb = database.n();
  std::vector<double> ap(nq);
  std::vector<std::vector<double>> precision(nq, std::vector<double>(ks.size()));

  auto work = [&](unsigned worker, unsigned stride) {
    std::vector<bool> relevance(ndb);
    for (std::size_t q = worker; q < nq; q += stride) {
      for (std::size_t j = 0; j < ndb; ++j) {
        relevance[j] = SharesLabel(query_labels, q, database_labels, j);
      }
      const std::vector<std::size_t> ranking = RankDatabase(queries.code(q), database);
      ap[q] = AveragePrecision(ranking, relevance);
      for (std::size_t kk = 0; kk < ks.size(); ++kk) {
        const std::size_t k = std::min(ks[kk], ndb);
        std::size_t hits = 0;
        for (std::size_t p = 0; p < k; ++p) hits += relevance[ranking[p]] ? 1 : 0;
        precision[q][kk] = k == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(k);
      }
    }
  };
  threads = std::max(1U, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto& th : pool) th.join();
  }

  EvalReport report;
  report.direction = std::move(direction);
  report.average_precisions = ap;
  for (double v : ap) report.map += v;
  report.map /= static_cast<double>(nq);
  for (std::size_t kk = 0; kk < ks.size(); ++kk) {
    double total = 0.0;
    for (std::size_t q = 0; q < nq; ++q) total += precision[q][kk];
    report.precision_at_k.emplace_back(ks[kk], total / static_cast<double>(nq));
  }
  return report;
}

void WriteEvalCsv(const std::vector<EvalReport>& reports, std::ostream& out) {
  out << "direction,metric,value\n";
  const auto old_precision = out.precision(17);
  for (const EvalReport& r : reports) {
    out << r.direction << ",map," << r.map << '\n';
    for (const auto& [k, v] : r.precision_at_k) {
      out << r.direction << ",precision@" << k << ',' << v << '\n';
    }
  }
  out.precision(old_precision);
}

void SaveCodes(const HashCodeSet& codes, const std::filesystem::path& path) {
  io::Writer w;
  w.Header(kCodeMagic, kCodeFormatVersion);
  w.U32(static_cast<std::uint32_t>(codes.n()));
  w.U32(static_cast<std::uint32_t>(codes.code_length()));
  for (std::uint64_t word : codes.words()) w.U64(word);
  w.WriteTo(path);
}

HashCodeSet LoadCodes(const std::filesystem::path& path) {
  auto r = io::Reader::FromFile(path);
  r.Header(kCodeMagic, kCodeFormatVersion);
  const std::size_t n = r.U32();
  const std::size_t code_length = r.U32();
  if (code_length == 0) throw FormatError(path.string() + ": zero code length");
  HashCodeSet codes(n, code_length);
  if (r.remaining() != 8 * n * codes.words_per_code()) {
    throw FormatError(path.string() + ": truncated file");
  }
  const std::uint64_t pad_mask =
      code_length % 64 == 0 ? 0 : ~std::uint64_t{0} << (code_length % 64);
  for (std::size_t i = 0; i < n; ++i) {
    auto words = codes.mutable_code(i);
    for (std::uint64_t& word : words) word = r.U64();
    if (words.back() & pad_mask) {
      throw FormatError(path.string() + ": nonzero pad bits");
    }
  }
  r.ExpectEnd();
  return codes;
}

}  // namespace jcch
