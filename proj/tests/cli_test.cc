// cli_test.cc
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
// End-to-end checks against the installed command-line binaries: exit
// codes, idempotent artifacts, and the full prepare/train/translate/
// postedit/bleu chain on a synthetic corpus.

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "pbmt/corpus.h"
#include "pbmt/io.h"
#include "pbmt/synth.h"
#include "support/testutil.h"

namespace pbmt {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult RunCli(const std::string& args) {
  testing::TempDir scratch;
  std::string out_file = scratch.File("stdout.txt");
  std::string command =
      std::string(PBMT_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
  int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  result.stdout_text = testing::ReadAll(out_file);
  return result;
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(RunCli("--help").exit_code, 0);
  EXPECT_EQ(RunCli("bleu --help").exit_code, 0);
  EXPECT_EQ(RunCli("experiment --help").exit_code, 0);
}

TEST(Cli, UnknownSubcommandExitsOne) {
  EXPECT_EQ(RunCli("frobnicate").exit_code, 1);
  EXPECT_EQ(RunCli("").exit_code, 1);
}

TEST(Cli, BleuIdentityPrintsHundred) {
  testing::TempDir dir;
  WriteLinesAtomic(dir.File("a.txt"), {"take one tablet", "store safely"});
  RunResult result =
      RunCli("bleu --cand " + dir.File("a.txt") + " --ref " + dir.File("a.txt"));
  EXPECT_EQ(result.exit_code, 0);
  EXPECT_EQ(result.stdout_text.substr(0, 5), "100.0");
}

TEST(Cli, MissingInputIsIoError) {
  EXPECT_EQ(RunCli("bleu --cand /no/such.txt --ref /no/such.txt").exit_code, 2);
}

TEST(Cli, BadConfigValueIsValidationError) {
  testing::TempDir dir;
  WriteLinesAtomic(dir.File("a.txt"), {"x"});
  RunResult result = RunCli("bleu --cand " + dir.File("a.txt") + " --ref " +
                         dir.File("a.txt") + " --set lm.order=zero");
  EXPECT_EQ(result.exit_code, 1);
}

TEST(Cli, SynthGeneratesCorpora) {
  testing::TempDir dir;
  std::string prefix = dir.File("copy");
  std::string command = std::string(PBMT_SYNTH_PATH) +
                        " --kind copy --sentences 50 --vocab 10 --out-prefix " +
                        prefix + " 2>/dev/null";
  ASSERT_EQ(WEXITSTATUS(std::system(command.c_str())), 0);
  EXPECT_EQ(ReadLines(prefix + ".src").size(), 50u);
  EXPECT_EQ(ReadLines(prefix + ".src"), ReadLines(prefix + ".tgt"));

  std::string xml_prefix = dir.File("eval");
  command = std::string(PBMT_SYNTH_PATH) +
            " --kind brochures --out-prefix " + xml_prefix + " 2>/dev/null";
  ASSERT_EQ(WEXITSTATUS(std::system(command.c_str())), 0);
  EXPECT_EQ(LoadBrochureXml(xml_prefix + ".xml").brochures.size(), 319u);
}

class PipelineChain : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthOptions options;
    options.sentences = 300;
    options.vocab = 25;
    options.seed = 21;
    SavePlaintext(MakeCopyCorpus(options), dir_.File("c.src"),
                  dir_.File("c.tgt"));
    config_ = " --set corpus.src=" + dir_.File("c.src") +
              " --set corpus.tgt=" + dir_.File("c.tgt") +
              " --set work_dir=" + dir_.File("work") +
              " --set em.iterations=3";
  }

  testing::TempDir dir_;
  std::string config_;
};

TEST_F(PipelineChain, PrepareTrainTranslatePosteditBleu) {
  ASSERT_EQ(RunCli("prepare" + config_).exit_code, 0);
  std::string prepared = dir_.File("work") + "/prepared";
  ASSERT_TRUE(fs::exists(prepared + "/train.src"));
  EXPECT_EQ(ReadLines(prepared + "/train.src").size(), 270u);
  EXPECT_EQ(ReadLines(prepared + "/test.src").size(), 30u);

  ASSERT_EQ(RunCli("train" + config_ + " --train-src " + prepared +
                "/train.src --train-tgt " + prepared + "/train.tgt")
                .exit_code,
            0);
  ASSERT_TRUE(fs::exists(dir_.File("work") + "/models/phrase-table.txt"));
  ASSERT_TRUE(fs::exists(dir_.File("work") + "/models/lm.arpa"));

  ASSERT_EQ(RunCli("translate" + config_ + " --input " + prepared +
                "/test.src --output " + dir_.File("out.txt"))
                .exit_code,
            0);
  ASSERT_TRUE(fs::exists(dir_.File("out.txt")));
  ASSERT_TRUE(fs::exists(dir_.File("work") + "/translate.report.jsonl"));

  ASSERT_EQ(RunCli("postedit" + config_ + " --report " + dir_.File("work") +
                "/translate.report.jsonl --output " + dir_.File("post.txt") +
                " --edits " + dir_.File("edits.tsv"))
                .exit_code,
            0);
  ASSERT_TRUE(fs::exists(dir_.File("post.txt")));

  RunResult bleu = RunCli("bleu --cand " + dir_.File("post.txt") + " --ref " +
                       prepared + "/test.tgt");
  ASSERT_EQ(bleu.exit_code, 0);
  double score = std::stod(bleu.stdout_text);
  EXPECT_GE(score, 99.0);
}

TEST_F(PipelineChain, ExperimentWritesReportAndIsIdempotent) {
  std::string report = dir_.File("exp1.json");
  RunResult first =
      RunCli("experiment 1" + config_ + " --report-out " + report);
  ASSERT_EQ(first.exit_code, 0);
  ASSERT_TRUE(fs::exists(report));
  std::string first_bytes = testing::ReadAll(report);
  EXPECT_NE(first_bytes.find("\"experiment\": 1"), std::string::npos);

  RunResult again =
      RunCli("experiment 1" + config_ + " --report-out " + report);
  ASSERT_EQ(again.exit_code, 0);
  std::string second_bytes = testing::ReadAll(report);
  // Timing differs run to run; everything else must be byte-identical.
  auto strip_wall = [](std::string text) {
    size_t at = text.find("\"wall_ms\"");
    if (at == std::string::npos) return text;
    size_t end = text.find('\n', at);
    return text.erase(at, end - at);
  };
  EXPECT_EQ(strip_wall(first_bytes), strip_wall(second_bytes));

  RunResult table = RunCli("report " + report);
  EXPECT_EQ(table.exit_code, 0);
  EXPECT_EQ(table.stdout_text.substr(0, 16), "experiment\tbleu\n");
}

TEST_F(PipelineChain, PrepareReRunsAreByteIdentical) {
  ASSERT_EQ(RunCli("prepare" + config_ + " --set variant=2 --set seed=5")
                .exit_code,
            0);
  std::string train_src = dir_.File("work") + "/prepared/train.src";
  std::string first = testing::ReadAll(train_src);
  ASSERT_EQ(RunCli("prepare" + config_ + " --set variant=2 --set seed=5")
                .exit_code,
            0);
  EXPECT_EQ(testing::ReadAll(train_src), first);
}

TEST(CliReport, PrePostTable) {
  testing::TempDir dir;
  WriteLinesAtomic(dir.File("ref.txt"), {"a b c d"});
  WriteLinesAtomic(dir.File("pre.txt"), {"a b x d"});
  WriteLinesAtomic(dir.File("post.txt"), {"a b c d"});
  RunResult result = RunCli("report --pre " + dir.File("pre.txt") + " --post " +
                         dir.File("post.txt") + " --ref " + dir.File("ref.txt") +
                         " --label doc1");
  ASSERT_EQ(result.exit_code, 0);
  EXPECT_NE(result.stdout_text.find("brochure\tbefore\tafter\n"),
            std::string::npos);
  EXPECT_NE(result.stdout_text.find("doc1\t"), std::string::npos);
  EXPECT_NE(result.stdout_text.find("100.00"), std::string::npos);
}

}  // namespace
}  // namespace pbmt
