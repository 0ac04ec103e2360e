// wordalign.h
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// \file
// IBM Model 1 word alignment: expectation-maximization over lexical
// translation probabilities with a NULL source word, Viterbi link
// extraction, and the usual bidirectional symmetrization heuristics.
// Everything is deterministic: fixed iteration order, fixed chunked
// reductions, no reliance on hash iteration order.

#ifndef PBMT_WORDALIGN_H_
#define PBMT_WORDALIGN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pbmt {

// One tokenized sentence pair; the unit every training stage consumes.
struct TokenPair {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
};

class VocabIndex {
 public:
  // Inserting lookup: registers the token if unseen.
  uint32_t IdOf(const std::string& token);
  std::optional<uint32_t> Find(const std::string& token) const;
  const std::string& TokenOf(uint32_t id) const { return tokens_[id]; }
  size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, uint32_t> ids_;
  std::vector<std::string> tokens_;
};

enum class Direction { kSrcToTgt, kTgtToSrc };

// Lexical translation distribution t(predicted | conditioning). The
// conditioning vocabulary carries the NULL word at id 0.
class TranslationTable {
 public:
  static constexpr uint32_t kNullId = 0;
  static constexpr const char* kNullToken = "<NULL>";

  Direction direction = Direction::kSrcToTgt;
  VocabIndex cond_vocab;
  VocabIndex pred_vocab;
  // rows[cond_id][pred_id] = probability; ordered maps keep every
  // iteration deterministic.
  std::vector<std::map<uint32_t, double>> rows;

  double Prob(uint32_t cond_id, uint32_t pred_id) const;
  double ProbTokens(const std::string& cond, const std::string& pred) const;
  double RowSum(uint32_t cond_id) const;

  // TSV `cond<TAB>pred<TAB>prob`, sorted by conditioning token, then
  // descending probability, then predicted token.
  std::string ToTsv() const;
  void Save(const std::string& path) const;
  static TranslationTable Load(const std::string& path, Direction direction);
};

struct EmConfig {
  int iterations = 5;
  double min_prob_floor = 1e-12;
  double convergence_epsilon = 1e-4;  // relative log-likelihood change
  int jobs = 1;
};

struct Ibm1TrainResult {
  TranslationTable table;
  // Corpus log-likelihood under the parameters entering each iteration.
  std::vector<double> log_likelihood;
};

// Uniform initialization, expected-count E-step with NULL, per-row M-step
// renormalization with a probability floor. The likelihood trace is
// non-decreasing (EM monotonicity).
Ibm1TrainResult TrainIbm1(const std::vector<TokenPair>& corpus,
                          const EmConfig& config, Direction direction);

struct AlignmentMatrix {
  size_t src_len = 0;
  size_t tgt_len = 0;
  std::vector<std::pair<uint32_t, uint32_t>> links;  // sorted, unique

  void Add(uint32_t i, uint32_t j);
  bool Has(uint32_t i, uint32_t j) const;
  AlignmentMatrix Transposed() const;
};

// Links every predicted-side position to its most probable conditioning
// word. Rows/columns follow the table's direction: for kSrcToTgt the matrix
// is (src x tgt) over the pair as given, for kTgtToSrc it is (tgt x src).
// A position stays unlinked when NULL strictly beats every real word (or
// nothing in the pair is known to the table); real-word ties pick the
// smallest index.
AlignmentMatrix ViterbiAlign(const TokenPair& pair,
                             const TranslationTable& table);

enum class SymmetrizationHeuristic { kIntersection, kUnion, kGrowDiagFinalAnd };

// Combines a forward (src x tgt) and backward (tgt x src) matrix; the
// backward matrix is transposed internally. Dimension mismatch throws.
AlignmentMatrix Symmetrize(const AlignmentMatrix& forward,
                           const AlignmentMatrix& backward,
                           SymmetrizationHeuristic heuristic);

// Interchange format: one line per sentence pair, links as `i-j` separated
// by single spaces.
void SaveAlignments(const std::vector<AlignmentMatrix>& alignments,
                    const std::string& path);
std::vector<std::vector<std::pair<uint32_t, uint32_t>>> LoadAlignmentLinks(
    const std::string& path);

}  // namespace pbmt

#endif  // PBMT_WORDALIGN_H_
