// decoder.h
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
// Phrase-based stack decoding. One stack per number of covered source
// words, hypothesis expansion by applicable phrase options, recombination
// on (coverage, language-model state, last phrase end), histogram pruning.
//
// The log-linear score, in natural log:
//   sum over steps of w_phi/lex * ln(features)
//   + w_lm * ln P(output)  (boundary transitions included)
//   - w_word_penalty * output token count
//   - w_distortion * total jump distance.
// Word penalty follows the usual convention: the feature is -(token
// count), so the default weight -1.0 is the standard length bonus that
// counterbalances the language model's preference for short output.
//
// A source position is out-of-vocabulary when the table has no single-token
// entry for it; OOV positions pass through verbatim as their own step and
// multi-word phrases never cover them, so every OOV token appears exactly
// once in the output.

#ifndef PBMT_DECODER_H_
#define PBMT_DECODER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pbmt/lm.h"
#include "pbmt/phrasetable.h"

namespace pbmt {

struct FeatureWeights {
  double phi_fwd = 0.2;
  double phi_bwd = 0.2;
  double lex_fwd = 0.2;
  double lex_bwd = 0.2;
  double lm = 0.5;
  double word_penalty = -1.0;  // per output word
  double distortion = 0.3;     // per unit of jump distance, as a penalty
};

struct DecoderConfig {
  size_t beam_size = 100;
  int distortion_limit = 6;  // max jump between phrases; -1 = unlimited
};

// One applied phrase: the source span it covers and what it emitted.
struct SegmentStep {
  uint32_t src_begin = 0;
  uint32_t src_end = 0;
  std::vector<std::string> tgt;
  bool is_oov = false;
  // Features of the chosen table entry; all 1.0 for OOV pass-through.
  double phi_fwd = 1.0, lex_fwd = 1.0, phi_bwd = 1.0, lex_bwd = 1.0;
};

struct TranslationOutput {
  std::vector<std::string> tokens;
  std::vector<size_t> oov_spans;  // output positions copied verbatim
  double model_score = 0.0;
  std::vector<SegmentStep> segmentation;
};

TranslationOutput Decode(const std::vector<std::string>& sentence,
                         const PhraseTable& table, const NGramModel& model,
                         const FeatureWeights& weights,
                         const DecoderConfig& config);

// Element i equals Decode(sentences[i], ...); fan-out across jobs threads
// changes nothing but wall time.
std::vector<TranslationOutput> DecodeCorpus(
    const std::vector<std::vector<std::string>>& sentences,
    const PhraseTable& table, const NGramModel& model,
    const FeatureWeights& weights, const DecoderConfig& config, int jobs = 1);

// Recomputes the log-linear score of an output from its segmentation; used
// to audit that model_score is reproducible.
double RescoreSegmentation(const TranslationOutput& output,
                           const NGramModel& model,
                           const FeatureWeights& weights);

// One translated line per input; OOV tokens wrapped as U+27E6 token U+27E7
// when markers are requested.
void WriteTranslationText(const std::vector<TranslationOutput>& outputs,
                          const std::string& path, bool oov_markers);

// Companion report, one JSON object per line: tokens, score, oov spans, and
// the segmentation, which is everything post-editing needs.
void WriteDecodeReport(const std::vector<TranslationOutput>& outputs,
                       const std::string& path);
std::vector<TranslationOutput> ReadDecodeReport(const std::string& path);

}  // namespace pbmt

#endif  // PBMT_DECODER_H_
