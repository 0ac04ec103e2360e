// salign.h
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
// Length-based sentence alignment: the classic character-length dynamic
// program over 0-1/1-0/1-1/1-2/2-1/2-2 beads, bead editing primitives for
// manual correction, and plain-text / XML / TMX export. Lengths are counted
// in characters, not bytes, so Arabic-script text is measured fairly.

#ifndef PBMT_SALIGN_H_
#define PBMT_SALIGN_H_

#include <cstddef>
#include <string>
#include <vector>

namespace pbmt {

struct SegmentedDocument {
  std::vector<std::string> sentences;
  std::vector<size_t> lengths;  // character count per sentence

  static SegmentedDocument FromSentences(std::vector<std::string> sentences);
  size_t size() const { return sentences.size(); }
};

// Splits on sentence-final punctuation (., !, ?, U+061F) followed by
// whitespace. Text without terminators stays one sentence.
SegmentedDocument Segment(const std::string& text);

enum class BeadKind { k01, k10, k11, k12, k21, k22 };

// Sentences consumed on each side by a bead kind.
size_t BeadSrcCount(BeadKind kind);
size_t BeadTgtCount(BeadKind kind);

struct Bead {
  BeadKind kind;
  size_t src_begin = 0, src_end = 0;  // [begin, end)
  size_t tgt_begin = 0, tgt_end = 0;
  double cost = 0.0;  // negative log probability
};

struct AlignmentResult {
  std::vector<Bead> beads;
  double total_cost = 0.0;

  // Verifies contiguous, exactly-once coverage of both documents.
  void CheckCoverage(size_t src_size, size_t tgt_size) const;
};

struct GaleChurchParams {
  double mean_ratio = 1.0;  // expected target chars per source char
  double variance = 6.8;
};

// Cost of one bead over the given character totals: length-ratio term plus
// the fixed bead-kind prior. Exposed so search results can be re-scored.
// Length evidence only; a lexical boost would be an additional cost term
// here.
double BeadCost(size_t src_chars, size_t tgt_chars, BeadKind kind,
                const GaleChurchParams& params);

// Minimum-cost bead sequence by dynamic programming. Ties prefer 1-1, then
// the lower kind enumeration order, so results are deterministic.
AlignmentResult GaleChurchAlign(const SegmentedDocument& src,
                                const SegmentedDocument& tgt,
                                const GaleChurchParams& params = {});

struct BeadEdit {
  enum class Kind { kMerge, kSplit, kShift } kind;
  size_t bead_index = 0;
  // kSplit: sentences of the bead that stay in the first half, per side.
  size_t split_src = 0, split_tgt = 0;
  // kShift: sentences moved across the boundary to the following bead
  // (positive) or from it (negative), on one side.
  int shift = 0;
  bool shift_src_side = true;
};

// Applies one edit, recomputes affected costs, preserves coverage. Throws
// ValidationError if the edit would break contiguity or produce an
// unsupported bead shape.
AlignmentResult ApplyEdit(const AlignmentResult& result, const BeadEdit& edit,
                          const SegmentedDocument& src,
                          const SegmentedDocument& tgt,
                          const GaleChurchParams& params = {});

// Writers. Multi-sentence spans are joined with a single space. 0-1/1-0
// beads are dropped from the plain-text pair (no partner line) but kept in
// XML/TMX with an empty variant.
void ExportPlaintextPair(const AlignmentResult& result,
                         const SegmentedDocument& src,
                         const SegmentedDocument& tgt,
                         const std::string& src_path,
                         const std::string& tgt_path);
void ExportXml(const AlignmentResult& result, const SegmentedDocument& src,
               const SegmentedDocument& tgt, const std::string& path);
void ExportTmx(const AlignmentResult& result, const SegmentedDocument& src,
               const SegmentedDocument& tgt, const std::string& path,
               const std::string& src_lang = "en",
               const std::string& tgt_lang = "ckb");

}  // namespace pbmt

#endif  // PBMT_SALIGN_H_
