// phrasetable.h
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
// Phrase pair extraction and scoring. A span pair is extracted when no
// alignment link crosses its boundary, at least one link lies inside, and
// the spans may grow over unaligned boundary words. Each entry carries the
// two relative-frequency translation probabilities and the two lexical
// weights (max over aligned words, product over positions).

#ifndef PBMT_PHRASETABLE_H_
#define PBMT_PHRASETABLE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pbmt/wordalign.h"

namespace pbmt {

struct ExtractedSpan {
  uint32_t src_begin, src_end;  // [begin, end)
  uint32_t tgt_begin, tgt_end;

  friend auto operator<=>(const ExtractedSpan&, const ExtractedSpan&) = default;
};

// All consistent span pairs with sides up to max_len, ordered by
// (src_begin, src_end, tgt_begin, tgt_end).
std::vector<ExtractedSpan> ExtractPhrases(const AlignmentMatrix& alignment,
                                          size_t max_len);

struct PhraseEntry {
  std::vector<std::string> tgt;
  double phi_fwd = 0.0;  // phi(tgt|src)
  double lex_fwd = 0.0;  // lex(tgt|src)
  double phi_bwd = 0.0;  // phi(src|tgt)
  double lex_bwd = 0.0;  // lex(src|tgt)
};

class PhraseTable {
 public:
  size_t max_len = 7;
  // Entries per source phrase, sorted by target phrase.
  std::map<std::vector<std::string>, std::vector<PhraseEntry>> entries;

  const std::vector<PhraseEntry>* Lookup(
      const std::vector<std::string>& src) const;
  size_t EntryCount() const;

  // Pipe-delimited interchange format, one entry per line:
  //   src tokens ||| tgt tokens ||| phi_fwd lex_fwd phi_bwd lex_bwd
  // floats with 6 significant digits, sorted by src then tgt.
  std::string ToText() const;
  void Save(const std::string& path) const;
  static PhraseTable Load(const std::string& path);
};

// Extracts from every pair and estimates the four features. fwd_lex must be
// the t(tgt|src) table and bwd_lex the t(src|tgt) table; unaligned words
// take their lexical weight from the NULL column. When one phrase pair is
// seen with several internal alignments, the larger lexical weight wins.
PhraseTable BuildTable(const std::vector<TokenPair>& corpus,
                       const std::vector<AlignmentMatrix>& alignments,
                       const TranslationTable& fwd_lex,
                       const TranslationTable& bwd_lex, size_t max_len = 7);

}  // namespace pbmt

#endif  // PBMT_PHRASETABLE_H_
