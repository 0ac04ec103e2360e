// synth.h
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
// Synthetic bilingual corpora: a copy language, a bijective word-for-word
// language, and a brochure-structured evaluation corpus. They exist so the
// whole pipeline can be exercised end to end without any private data.

#ifndef PBMT_SYNTH_H_
#define PBMT_SYNTH_H_

#include <cstdint>

#include "pbmt/corpus.h"

namespace pbmt {

struct SynthOptions {
  size_t sentences = 5000;
  size_t vocab = 200;
  size_t min_len = 3;
  size_t max_len = 12;
  uint64_t seed = 1;
  bool capitalize = true;  // sentence-initial uppercase, like real prose
};

// Target equals source. A correct pipeline translates held-out text
// essentially perfectly.
ParallelCorpus MakeCopyCorpus(const SynthOptions& options);

// Monotone word-for-word language: target word i is a fixed relabeling of
// source word i.
ParallelCorpus MakeBijectiveCorpus(const SynthOptions& options);

// A 319-brochure corpus over 76 categories totalling exactly 22,940
// sentence pairs. Brochure sizes are arranged so that every preparation
// variant and split has interesting, hand-checkable line counts: the
// brochure-granularity split cuts 287/32, undersampling shrinks the corpus
// to 16,767 pairs, oversampling grows it to 32,784.
ParallelCorpus MakeBrochureEvalCorpus();

}  // namespace pbmt

#endif  // PBMT_SYNTH_H_
