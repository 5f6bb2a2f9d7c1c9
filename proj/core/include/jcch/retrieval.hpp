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

#ifndef JCCH_RETRIEVAL_HPP_
#define JCCH_RETRIEVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jcch/labels.hpp"
#include "jcch/matrix.hpp"

namespace jcch {

// n sign codes of r bits, packed into ceil(r/64) little-endian words per
// code. Bit j of a code is 1 iff its j-th sign is +1; pad bits are zero.
class HashCodeSet {
 public:
  HashCodeSet() = default;
  HashCodeSet(std::size_t n, std::size_t code_length);

  std::size_t n() const { return n_; }
  std::size_t code_length() const { return code_length_; }
  std::size_t words_per_code() const { return words_; }

  std::span<const std::uint64_t> code(std::size_t i) const {
    return {bits_.data() + i * words_, words_};
  }
  std::span<std::uint64_t> mutable_code(std::size_t i) {
    return {bits_.data() + i * words_, words_};
  }
  // +1 or -1.
  int Sign(std::size_t i, std::size_t j) const {
    return ((bits_[i * words_ + j / 64] >> (j % 64)) & 1U) ? 1 : -1;
  }
  const std::vector<std::uint64_t>& words() const { return bits_; }

  friend bool operator==(const HashCodeSet&, const HashCodeSet&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t code_length_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Element-wise sign with sgn(0) = +1. Throws ValidationError on a
// non-finite activation.
HashCodeSet Encode(const Matrix& activations);

// Popcount of the XOR. Throws ValidationError on a length mismatch.
std::size_t Hamming(std::span<const std::uint64_t> a,
                    std::span<const std::uint64_t> b);

// Database indices by ascending Hamming distance, ties by ascending index.
std::vector<std::size_t> RankDatabase(std::span<const std::uint64_t> query,
                                      const HashCodeSet& database);

// (1/R) sum over relevant positions p of (relevant items in top p) / p.
// Zero when nothing is relevant.
double AveragePrecision(std::span<const std::size_t> ranking,
                        const std::vector<bool>& relevance);

struct EvalReport {
  std::string direction;  // e.g. "1to2": modality-1 queries, modality-2 database
  double map = 0.0;
  std::vector<std::pair<std::size_t, double>> precision_at_k;
  std::vector<double> average_precisions;  // per query, query order
};

// Relevance: the query and database item share at least one label.
// Precision@k for k above the database size is taken over the full database.
// Throws ValidationError on an empty query set or mismatched code lengths.
EvalReport Evaluate(const HashCodeSet& queries, const HashCodeSet& database,
                    const LabelMatrix& query_labels,
                    const LabelMatrix& database_labels,
                    std::span<const std::size_t> ks, std::string direction,
                    unsigned threads = 1);

// direction,metric,value rows: "map" and "precision@k".
void WriteEvalCsv(const std::vector<EvalReport>& reports, std::ostream& out);

// "JCCB" u16 version=1, u32 n, r, then n*ceil(r/64) u64 words row-major.
inline constexpr std::uint16_t kCodeFormatVersion = 1;
void SaveCodes(const HashCodeSet& codes, const std::filesystem::path& path);
HashCodeSet LoadCodes(const std::filesystem::path& path);

}  // namespace jcch

#endif  // JCCH_RETRIEVAL_HPP_
