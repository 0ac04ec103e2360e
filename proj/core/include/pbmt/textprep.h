// textprep.h
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
// Tokenization, truecasing/recasing, and sentence-pair cleaning.
//
// The tokenizer splits on ASCII whitespace and peels leading/trailing
// punctuation (Western and Arabic-script) into separate tokens. Characters
// interior to a token, including hyphens and Arabic joining controls, are
// never touched, which keeps Arabic-script words intact.

#ifndef PBMT_TEXTPREP_H_
#define PBMT_TEXTPREP_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pbmt/corpus.h"

namespace pbmt {

struct TokenizerOptions {
  // Map Arabic letter variants left over from OCR to their Kurdish forms
  // before splitting. The default table covers ya and kaf.
  bool map_arabic_variants = true;
};

struct TokenizedSentence {
  std::vector<std::string> tokens;
  bool was_truecased = false;
};

TokenizedSentence Tokenize(std::string_view line,
                           const TokenizerOptions& options = {});

// Plain space join; tokenize . detokenize is idempotent.
std::string Detokenize(const TokenizedSentence& sentence);

// Most frequent surface form per case-folded token. Sentence-initial
// occurrences carry half weight since their casing is uninformative; weights
// are stored doubled so everything stays integral.
class TruecaseModel {
 public:
  static constexpr int64_t kInitialWeight = 1;  // in half units
  static constexpr int64_t kInteriorWeight = 2;

  void Add(const std::string& surface, int64_t weight);
  // Resolves best forms from the accumulated weights.
  void Finalize();

  // Best surface form for a folded key, or nullptr.
  const std::string* BestForm(const std::string& folded) const;
  bool empty() const { return best_form_.empty(); }

  double CountOf(const std::string& surface) const;

  // TSV: folded<TAB>best<TAB>count, sorted by folded key.
  std::string ToTsv() const;
  void Save(const std::string& path) const;
  static TruecaseModel Load(const std::string& path);

 private:
  std::map<std::string, std::string> best_form_;
  std::map<std::string, int64_t> weights_;  // surface form -> doubled count
};

TruecaseModel TrainTruecaser(const std::vector<TokenizedSentence>& corpus);

// Lowers (or otherwise normalizes) the sentence-initial token to its best
// form; all other tokens pass through byte-identical.
TokenizedSentence Truecase(const TokenizedSentence& sentence,
                           const TruecaseModel& model);

// Restores sentence-initial capitalization for final output.
TokenizedSentence Recase(const TokenizedSentence& sentence,
                         const TruecaseModel& model);

struct CleaningRules {
  int min_tokens = 1;
  int max_tokens = 80;
  double max_length_ratio = 9.0;
};

struct CleanReport {
  size_t removed_empty = 0;
  size_t removed_too_short = 0;
  size_t removed_too_long = 0;
  size_t removed_ratio = 0;

  size_t total() const {
    return removed_empty + removed_too_short + removed_too_long + removed_ratio;
  }
};

// Drops pairs that are empty on either side, overlong, or badly
// length-mismatched; brochures left empty disappear.
std::pair<ParallelCorpus, CleanReport> CleanPairs(
    const ParallelCorpus& corpus, const CleaningRules& rules = {},
    const TokenizerOptions& options = {});

}  // namespace pbmt

#endif  // PBMT_TEXTPREP_H_
