// evalmetrics.h
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
// Corpus-level BLEU (single reference, case-sensitive, no smoothing) and
// the seven-experiment harness: variant preparation chain, full
// train/decode/score runs, and the pre/post-editing comparison.

#ifndef PBMT_EVALMETRICS_H_
#define PBMT_EVALMETRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pbmt/corpus.h"
#include "pbmt/pipeline.h"

namespace pbmt {

struct BleuReport {
  std::vector<double> precisions;  // p_1..p_max_n; 1.0 when vacuous (0/0)
  double brevity_penalty = 0.0;
  double score = 0.0;  // 0..100
  uint64_t candidate_length = 0;
  uint64_t reference_length = 0;
};

// Modified n-gram precision with per-sentence clipping, aggregated over the
// corpus; BP = 1 when candidates run longer than references, else
// exp(1 - ref/cand). Any zero precision zeroes the score (plain BLEU).
BleuReport Bleu(const std::vector<std::vector<std::string>>& candidates,
                const std::vector<std::vector<std::string>>& references,
                int max_n = 4);

// The preparation chain of one experiment: variant op(s) + the split the
// experiment calls for (line granularity for 1-2, brochure for 3-7).
struct PreparedExperiment {
  ParallelCorpus variant;
  SplitResult split;
  SplitSpec spec;
};

PreparedExperiment PrepareExperiment(int id, const ParallelCorpus& base,
                                     const PipelineConfig& config);

struct ExperimentReport {
  int id = 0;
  std::string variant_tag;
  size_t train_lines = 0;
  size_t test_lines = 0;
  size_t train_brochures = 0;
  size_t test_brochures = 0;
  BleuReport bleu;
  double wall_ms = 0.0;
  std::string config_text;  // snapshot of the effective configuration

  std::string ToJson() const;
  void WriteJson(const std::string& path) const;
  static ExperimentReport FromJsonFile(const std::string& path);
};

// Preparation chain, full training on the train side, decoding of the test
// side, BLEU against the held-out references.
ExperimentReport RunExperiment(int id, const ParallelCorpus& base,
                               const PipelineConfig& config);

struct PrePostReport {
  BleuReport pre;
  BleuReport post;
  double delta = 0.0;
};

PrePostReport ComparePrePost(
    const std::vector<std::vector<std::string>>& pre,
    const std::vector<std::vector<std::string>>& post,
    const std::vector<std::vector<std::string>>& references, int max_n = 4);

// TSV layouts mirroring the report tables: experiment -> BLEU, and
// label -> before/after.
std::string ExperimentTableTsv(const std::vector<ExperimentReport>& reports);
struct PrePostRow {
  std::string label;
  double before = 0.0;
  double after = 0.0;
};
std::string PrePostTableTsv(const std::vector<PrePostRow>& rows);

}  // namespace pbmt

#endif  // PBMT_EVALMETRICS_H_
