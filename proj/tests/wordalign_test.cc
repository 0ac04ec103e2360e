// wordalign_test.cc
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

#include "pbmt/wordalign.h"

#include <cmath>

#include <gtest/gtest.h>

#include "pbmt/error.h"
#include "pbmt/rng.h"
#include "support/oracles.h"
#include "support/testutil.h"

namespace pbmt {
namespace {

TokenPair Pair(std::vector<std::string> src, std::vector<std::string> tgt) {
  return TokenPair{std::move(src), std::move(tgt)};
}

// One pair (x, y). Hand EM with NULL: the E-step splits the count of y
// evenly between x and NULL (denominator 2), and per-row normalization then
// drives both t(y|x) and t(y|NULL) to 1 -- the single predicted type takes
// each row's whole mass. This is the fixed point from the first iteration.
TEST(TrainIbm1, SinglePairFixedPoint) {
  std::vector<TokenPair> corpus{Pair({"x"}, {"y"})};
  for (int iterations : {1, 3, 7}) {
    EmConfig config;
    config.iterations = iterations;
    Ibm1TrainResult result = TrainIbm1(corpus, config, Direction::kSrcToTgt);
    EXPECT_NEAR(result.table.ProbTokens("x", "y"), 1.0, 1e-9);
    EXPECT_NEAR(result.table.ProbTokens("<NULL>", "y"), 1.0, 1e-9);
    // Agreement with the independent dense EM.
    testing::NaiveIbm1Result oracle = testing::NaiveIbm1(corpus, iterations);
    EXPECT_NEAR(oracle.table["x"]["y"], 1.0, 1e-12);
  }
}

TEST(TrainIbm1, LearnsLexiconFromThreePairs) {
  std::vector<TokenPair> corpus{
      Pair({"das", "haus"}, {"the", "house"}),
      Pair({"das", "buch"}, {"the", "book"}),
      Pair({"ein", "buch"}, {"a", "book"}),
  };
  EmConfig config;
  config.iterations = 5;
  config.convergence_epsilon = 0.0;  // run all five
  Ibm1TrainResult result = TrainIbm1(corpus, config, Direction::kSrcToTgt);

  testing::NaiveIbm1Result oracle = testing::NaiveIbm1(corpus, 5);
  for (const auto& [e, row] : oracle.table) {
    for (const auto& [f, p] : row) {
      EXPECT_NEAR(result.table.ProbTokens(e, f), p, 1e-9)
          << "t(" << f << "|" << e << ")";
    }
  }

  // argmax_f t(f|das) = "the"
  double best = 0.0;
  std::string best_f;
  for (const auto& f : {"the", "house", "book", "a"}) {
    double p = result.table.ProbTokens("das", f);
    if (p > best) {
      best = p;
      best_f = f;
    }
  }
  EXPECT_EQ(best_f, "the");
  // Matching log-likelihood traces.
  ASSERT_EQ(result.log_likelihood.size(), oracle.log_likelihood.size());
  for (size_t i = 0; i < result.log_likelihood.size(); ++i) {
    EXPECT_NEAR(result.log_likelihood[i], oracle.log_likelihood[i], 1e-9);
  }
}

std::vector<TokenPair> RandomToyCorpus(Rng& rng) {
  static const std::vector<std::string> src_vocab{"s0", "s1", "s2", "s3", "s4",
                                                  "s5", "s6", "s7", "s8", "s9"};
  static const std::vector<std::string> tgt_vocab{"t0", "t1", "t2", "t3", "t4",
                                                  "t5", "t6", "t7", "t8", "t9"};
  std::vector<TokenPair> corpus;
  size_t pairs = 1 + rng.Below(20);
  for (size_t n = 0; n < pairs; ++n) {
    TokenPair pair;
    size_t src_len = 1 + rng.Below(6);
    size_t tgt_len = 1 + rng.Below(6);
    for (size_t i = 0; i < src_len; ++i)
      pair.src.push_back(src_vocab[rng.Below(src_vocab.size())]);
    for (size_t j = 0; j < tgt_len; ++j)
      pair.tgt.push_back(tgt_vocab[rng.Below(tgt_vocab.size())]);
    corpus.push_back(std::move(pair));
  }
  return corpus;
}

// The EM acceptance behavior: monotone likelihood and normalized rows on
// random toy corpora.
TEST(TrainIbm1, MonotoneAndNormalizedOnRandomCorpora) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TokenPair> corpus = RandomToyCorpus(rng);
    EmConfig config;
    config.iterations = 6;
    config.convergence_epsilon = 0.0;
    Ibm1TrainResult result = TrainIbm1(corpus, config, Direction::kSrcToTgt);
    for (size_t k = 1; k < result.log_likelihood.size(); ++k) {
      EXPECT_GE(result.log_likelihood[k], result.log_likelihood[k - 1] - 1e-9)
          << "trial " << trial << " iteration " << k;
    }
    for (uint32_t e = 0; e < result.table.rows.size(); ++e) {
      if (result.table.rows[e].empty()) continue;
      EXPECT_NEAR(result.table.RowSum(e), 1.0, 1e-6)
          << "trial " << trial << " row "
          << result.table.cond_vocab.TokenOf(e);
    }
  }
}

TEST(TrainIbm1, EmptyCorpusRejected) {
  EXPECT_THROW(TrainIbm1({}, EmConfig{}, Direction::kSrcToTgt),
               ValidationError);
}

TEST(TrainIbm1, DeterministicAcrossRunsAndWorkers) {
  Rng rng(7);
  std::vector<TokenPair> corpus = RandomToyCorpus(rng);
  EmConfig config;
  config.iterations = 4;
  std::string first =
      TrainIbm1(corpus, config, Direction::kSrcToTgt).table.ToTsv();
  std::string second =
      TrainIbm1(corpus, config, Direction::kSrcToTgt).table.ToTsv();
  EXPECT_EQ(first, second);
  config.jobs = 4;
  std::string parallel =
      TrainIbm1(corpus, config, Direction::kSrcToTgt).table.ToTsv();
  EXPECT_EQ(first, parallel);
}

TEST(TranslationTableTsv, RoundTrip) {
  testing::TempDir dir;
  std::vector<TokenPair> corpus{Pair({"das", "haus"}, {"the", "house"}),
                                Pair({"ein", "buch"}, {"a", "book"})};
  EmConfig config;
  Ibm1TrainResult result = TrainIbm1(corpus, config, Direction::kSrcToTgt);
  result.table.Save(dir.File("lex.tsv"));
  TranslationTable loaded =
      TranslationTable::Load(dir.File("lex.tsv"), Direction::kSrcToTgt);
  EXPECT_EQ(loaded.ToTsv(), result.table.ToTsv());
  EXPECT_NEAR(loaded.ProbTokens("das", "the"),
              result.table.ProbTokens("das", "the"), 1e-12);
}

TranslationTable TinyTable(
    const std::vector<std::tuple<std::string, std::string, double>>& rows) {
  TranslationTable table;
  table.cond_vocab.IdOf(TranslationTable::kNullToken);
  table.rows.emplace_back();
  for (const auto& [e, f, p] : rows) {
    uint32_t ei = table.cond_vocab.IdOf(e);
    uint32_t fi = table.pred_vocab.IdOf(f);
    if (table.rows.size() <= ei) table.rows.resize(ei + 1);
    table.rows[ei][fi] = p;
  }
  return table;
}

TEST(ViterbiAlign, ForcedArgmax) {
  TranslationTable table = TinyTable({{"x", "y", 1.0}});
  AlignmentMatrix matrix = ViterbiAlign(Pair({"x"}, {"y"}), table);
  EXPECT_EQ(matrix.links,
            (std::vector<std::pair<uint32_t, uint32_t>>{{0, 0}}));
}

TEST(ViterbiAlign, NullDominanceUnlinks) {
  TranslationTable table =
      TinyTable({{"x", "y", 0.2}, {"<NULL>", "y", 0.5}});
  AlignmentMatrix matrix = ViterbiAlign(Pair({"x"}, {"y"}), table);
  EXPECT_TRUE(matrix.links.empty());
}

TEST(ViterbiAlign, TieGoesToSmallestIndex) {
  TranslationTable table = TinyTable({{"x0", "y", 0.4}, {"x1", "y", 0.4}});
  AlignmentMatrix matrix = ViterbiAlign(Pair({"x0", "x1"}, {"y"}), table);
  EXPECT_EQ(matrix.links,
            (std::vector<std::pair<uint32_t, uint32_t>>{{0, 0}}));
}

AlignmentMatrix MatrixOf(size_t src_len, size_t tgt_len,
                         std::vector<std::pair<uint32_t, uint32_t>> links) {
  AlignmentMatrix m;
  m.src_len = src_len;
  m.tgt_len = tgt_len;
  for (const auto& [i, j] : links) m.Add(i, j);
  return m;
}

TEST(Symmetrize, AgreementIsFixedPoint) {
  AlignmentMatrix forward = MatrixOf(2, 2, {{0, 0}, {1, 1}});
  AlignmentMatrix backward = MatrixOf(2, 2, {{0, 0}, {1, 1}});
  for (auto heuristic : {SymmetrizationHeuristic::kIntersection,
                         SymmetrizationHeuristic::kUnion,
                         SymmetrizationHeuristic::kGrowDiagFinalAnd}) {
    EXPECT_EQ(Symmetrize(forward, backward, heuristic).links, forward.links);
  }
}

TEST(Symmetrize, IntersectionAndUnionSetAlgebra) {
  // src = 2 words, tgt = 1 word; backward is (tgt x src).
  AlignmentMatrix forward = MatrixOf(2, 1, {{0, 0}});
  AlignmentMatrix backward = MatrixOf(1, 2, {{0, 1}});
  EXPECT_TRUE(Symmetrize(forward, backward,
                         SymmetrizationHeuristic::kIntersection)
                  .links.empty());
  EXPECT_EQ(
      Symmetrize(forward, backward, SymmetrizationHeuristic::kUnion).links,
      (std::vector<std::pair<uint32_t, uint32_t>>{{0, 0}, {1, 0}}));
}

TEST(Symmetrize, DimensionMismatchRejected) {
  AlignmentMatrix forward = MatrixOf(2, 3, {});
  AlignmentMatrix backward = MatrixOf(2, 3, {});
  EXPECT_THROW(
      Symmetrize(forward, backward, SymmetrizationHeuristic::kIntersection),
      ValidationError);
}

TEST(Symmetrize, SandwichPropertyOnRandomMatrices) {
  Rng rng(555);
  for (int trial = 0; trial < 1000; ++trial) {
    AlignmentMatrix forward, backward;
    forward.src_len = backward.tgt_len = 4;
    forward.tgt_len = backward.src_len = 4;
    for (uint32_t i = 0; i < 4; ++i) {
      for (uint32_t j = 0; j < 4; ++j) {
        if (rng.Below(4) == 0) forward.Add(i, j);
        if (rng.Below(4) == 0) backward.Add(j, i);
      }
    }
    AlignmentMatrix inter =
        Symmetrize(forward, backward, SymmetrizationHeuristic::kIntersection);
    AlignmentMatrix gdfa = Symmetrize(forward, backward,
                                      SymmetrizationHeuristic::kGrowDiagFinalAnd);
    AlignmentMatrix uni =
        Symmetrize(forward, backward, SymmetrizationHeuristic::kUnion);
    for (const auto& [i, j] : inter.links) {
      EXPECT_TRUE(gdfa.Has(i, j)) << "trial " << trial;
    }
    for (const auto& [i, j] : gdfa.links) {
      EXPECT_TRUE(uni.Has(i, j)) << "trial " << trial;
    }
  }
}

TEST(AlignmentFiles, RoundTrip) {
  testing::TempDir dir;
  std::vector<AlignmentMatrix> alignments{
      MatrixOf(2, 2, {{0, 0}, {1, 1}}),
      MatrixOf(3, 1, {}),
      MatrixOf(2, 3, {{0, 2}, {1, 0}}),
  };
  SaveAlignments(alignments, dir.File("a.align"));
  auto loaded = LoadAlignmentLinks(dir.File("a.align"));
  ASSERT_EQ(loaded.size(), 3u);
  EXPECT_EQ(loaded[0], alignments[0].links);
  EXPECT_TRUE(loaded[1].empty());
  EXPECT_EQ(loaded[2], alignments[2].links);
  EXPECT_EQ(testing::ReadAll(dir.File("a.align")), "0-0 1-1\n\n0-2 1-0\n");
}

}  // namespace
}  // namespace pbmt
