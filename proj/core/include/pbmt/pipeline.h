// pipeline.h
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
// Pipeline configuration and the end-to-end training/translation drivers
// the CLI and the experiment harness share. The config file is flat
// `key = value` text; every key can be overridden from the command line.
// Stage seeds derive from the single global seed via DeriveSeed, so each
// randomized stage is independently reproducible.

#ifndef PBMT_PIPELINE_H_
#define PBMT_PIPELINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pbmt/corpus.h"
#include "pbmt/decoder.h"
#include "pbmt/lm.h"
#include "pbmt/phrasetable.h"
#include "pbmt/textprep.h"
#include "pbmt/wordalign.h"

namespace pbmt {

struct PipelineConfig {
  // Corpus inputs: either a plain-text pair or a brochure XML file.
  std::string corpus_src;
  std::string corpus_tgt;
  std::string corpus_xml;
  std::string work_dir = "work";

  int variant = 1;  // experiment / corpus version id, 1..7
  SplitSpec split;  // granularity is chosen per experiment when harnessed

  TokenizerOptions tokenizer;
  CleaningRules cleaning;
  EmConfig em;
  size_t phrase_max_len = 7;
  int lm_order = 3;
  KnDiscount lm_discount;
  FeatureWeights weights;
  DecoderConfig decoder;

  std::string dictionary_path;
  std::string external_mode = "offline";  // offline | live
  std::string external_endpoint;
  std::string external_stub_path;  // TSV term<TAB>translation for the stub
  std::string lang_src = "en";
  std::string lang_tgt = "ckb";

  uint64_t seed = 0;
  int jobs = DefaultJobs();  // stage-internal parallelism

  // Available cores, at least 1.
  static int DefaultJobs();

  // Applies one `key = value` assignment; unknown keys throw.
  void Set(const std::string& key, const std::string& value);
  void Validate() const;

  static PipelineConfig FromFile(const std::string& path);
  std::string ToText() const;  // round-trippable key = value dump
};

// Everything training produces; what translation consumes.
struct TrainedModels {
  TruecaseModel src_truecaser;
  TruecaseModel tgt_truecaser;
  TranslationTable forward;   // t(tgt|src)
  TranslationTable backward;  // t(src|tgt)
  PhraseTable phrase_table;
  NGramModel lm;
};

// tokenize -> truecase -> clean -> IBM1 both directions -> symmetrized
// alignments -> phrase table -> target language model. The symmetrized
// per-pair alignments are written to alignments_out when given.
TrainedModels TrainPipeline(const ParallelCorpus& train,
                            const PipelineConfig& config,
                            std::vector<AlignmentMatrix>* alignments_out = nullptr);

// Model artifact filenames under a directory.
void SaveModels(const TrainedModels& models, const std::string& dir);
TrainedModels LoadModels(const std::string& dir);

// tokenize + truecase the source lines, decode, recase.
std::vector<TranslationOutput> TranslateLines(
    const std::vector<std::string>& lines, const TrainedModels& models,
    const PipelineConfig& config);

}  // namespace pbmt

#endif  // PBMT_PIPELINE_H_
