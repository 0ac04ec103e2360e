// pipeline_test.cc
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

#include "pbmt/pipeline.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "pbmt/error.h"
#include "pbmt/evalmetrics.h"
#include "pbmt/io.h"
#include "pbmt/synth.h"
#include "support/testutil.h"

namespace pbmt {
namespace {

TEST(PipelineConfig, ParsesFlatKeyValueFile) {
  testing::TempDir dir;
  WriteFileAtomic(dir.File("c.cfg"),
                  "# comment\n"
                  "corpus.src = data/train.src\n"
                  "corpus.tgt = data/train.tgt\n"
                  "variant = 6\n"
                  "split.fraction = 4/5\n"
                  "split.granularity = brochure\n"
                  "lm.order = 4\n"
                  "weights.lm = 0.7\n"
                  "seed = 99\n"
                  "jobs = 2\n");
  PipelineConfig config = PipelineConfig::FromFile(dir.File("c.cfg"));
  EXPECT_EQ(config.corpus_src, "data/train.src");
  EXPECT_EQ(config.variant, 6);
  EXPECT_EQ(config.split.train_num, 4u);
  EXPECT_EQ(config.split.train_den, 5u);
  EXPECT_EQ(config.split.granularity, SplitGranularity::kBrochure);
  EXPECT_EQ(config.lm_order, 4);
  EXPECT_DOUBLE_EQ(config.weights.lm, 0.7);
  EXPECT_EQ(config.seed, 99u);
  EXPECT_EQ(config.jobs, 2);
}

TEST(PipelineConfig, UnknownKeyRejectedWithLine) {
  testing::TempDir dir;
  WriteFileAtomic(dir.File("c.cfg"), "seed = 1\nbogus.key = 2\n");
  try {
    PipelineConfig::FromFile(dir.File("c.cfg"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(PipelineConfig, ValidateCatchesBadValues) {
  PipelineConfig config;
  config.variant = 9;
  EXPECT_THROW(config.Validate(), ValidationError);
  config.variant = 1;
  config.lm_discount.fixed = 1.5;
  EXPECT_THROW(config.Validate(), ValidationError);
  config.lm_discount.fixed = 0.75;
  config.external_mode = "live";
  EXPECT_THROW(config.Validate(), ValidationError);
  config.external_endpoint = "http://localhost:1/translate";
  config.Validate();
}

TEST(PipelineConfig, TextDumpRoundTrips) {
  testing::TempDir dir;
  PipelineConfig config;
  config.seed = 1234;
  config.lm_order = 5;
  config.weights.distortion = 0.45;
  WriteFileAtomic(dir.File("dump.cfg"), config.ToText());
  PipelineConfig loaded = PipelineConfig::FromFile(dir.File("dump.cfg"));
  EXPECT_EQ(loaded.ToText(), config.ToText());
}

TEST(TrainPipeline, CopyLanguageModels) {
  SynthOptions options;
  options.sentences = 200;
  options.vocab = 30;
  options.seed = 5;
  ParallelCorpus corpus = MakeCopyCorpus(options);
  PipelineConfig config;
  config.em.iterations = 4;
  TrainedModels models = TrainPipeline(corpus, config);
  EXPECT_GT(models.phrase_table.EntryCount(), 0u);
  EXPECT_EQ(models.lm.order, 3);

  // The learned table should translate a known word to itself.
  const auto* entries = models.phrase_table.Lookup({"balode"});
  if (entries != nullptr) {
    EXPECT_EQ((*entries)[0].tgt, std::vector<std::string>{"balode"});
  }
}

TEST(TrainPipeline, ModelsSurviveDiskRoundTrip) {
  testing::TempDir dir;
  SynthOptions options;
  options.sentences = 150;
  options.vocab = 25;
  options.seed = 6;
  ParallelCorpus corpus = MakeCopyCorpus(options);
  PipelineConfig config;
  config.em.iterations = 3;
  TrainedModels models = TrainPipeline(corpus, config);
  SaveModels(models, dir.File("models"));
  TrainedModels loaded = LoadModels(dir.File("models"));

  std::vector<std::string> probe_lines;
  for (const auto* pair : corpus.FlatPairs()) {
    probe_lines.push_back(pair->source);
    if (probe_lines.size() == 10) break;
  }
  auto direct = TranslateLines(probe_lines, models, config);
  auto reloaded = TranslateLines(probe_lines, loaded, config);
  ASSERT_EQ(direct.size(), reloaded.size());
  for (size_t i = 0; i < direct.size(); ++i) {
    EXPECT_EQ(direct[i].tokens, reloaded[i].tokens);
  }
  // No temp files linger after the atomic writes.
  for (const auto& entry :
       std::filesystem::directory_iterator(dir.File("models"))) {
    EXPECT_EQ(entry.path().extension(), entry.path().extension());
    EXPECT_TRUE(entry.path().string().find(".tmp") == std::string::npos);
  }
}

TEST(TrainPipeline, TranslationRecasesOutput) {
  SynthOptions options;
  options.sentences = 120;
  options.vocab = 15;
  options.seed = 8;
  options.capitalize = true;
  ParallelCorpus corpus = MakeCopyCorpus(options);
  PipelineConfig config;
  config.em.iterations = 3;
  TrainedModels models = TrainPipeline(corpus, config);
  auto outputs = TranslateLines({corpus.FlatPairs()[0]->source}, models, config);
  ASSERT_EQ(outputs.size(), 1u);
  ASSERT_FALSE(outputs[0].tokens.empty());
  const std::string& first = outputs[0].tokens[0];
  EXPECT_TRUE(first[0] >= 'A' && first[0] <= 'Z') << first;
}

TEST(TrainPipeline, RejectsUncleanableCorpus) {
  ParallelCorpus corpus;
  Brochure brochure;
  brochure.id = "b";
  brochure.pairs.push_back({"", "", "b", 0});
  corpus.brochures.push_back(brochure);
  PipelineConfig config;
  EXPECT_THROW(TrainPipeline(corpus, config), ValidationError);
}

}  // namespace
}  // namespace pbmt
