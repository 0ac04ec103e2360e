// lm_test.cc
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

#include "pbmt/lm.h"

#include <cmath>

#include <gtest/gtest.h>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/rng.h"
#include "pbmt/synth.h"
#include "pbmt/textprep.h"
#include "support/oracles.h"
#include "support/testutil.h"

namespace pbmt {
namespace {

std::vector<std::vector<std::string>> SplitCorpus(
    const std::vector<std::string>& lines) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : lines) out.push_back(Tokenize(line).tokens);
  return out;
}

NGramKey Key(const NGramCounts& counts, const std::vector<std::string>& toks) {
  NGramKey key;
  LmVocab vocab = counts.vocab;  // copy; IdOf below must not mutate counts
  for (const auto& t : toks) key.push_back(vocab.Lookup(t));
  return key;
}

TEST(CountNgrams, BigramEnumeration) {
  NGramCounts counts = CountNgrams(SplitCorpus({"a b"}), 2);
  EXPECT_EQ(counts.events[1].size(), 3u);
  EXPECT_EQ(counts.events[1].at(Key(counts, {"<s>", "a"})), 1u);
  EXPECT_EQ(counts.events[1].at(Key(counts, {"a", "b"})), 1u);
  EXPECT_EQ(counts.events[1].at(Key(counts, {"b", "</s>"})), 1u);
}

TEST(CountNgrams, EmptyCorpus) {
  NGramCounts counts = CountNgrams({}, 3);
  for (const auto& level : counts.events) EXPECT_TRUE(level.empty());
}

TEST(CountNgrams, UnigramTotals) {
  NGramCounts counts = CountNgrams(SplitCorpus({"a a a"}), 1);
  EXPECT_EQ(counts.events[0].at(Key(counts, {"a"})), 3u);
  EXPECT_EQ(counts.events[0].at(Key(counts, {"</s>"})), 1u);
  // total unigram events = token count + sentence count
  EXPECT_EQ(counts.TotalEvents(1), 4u);
}

TEST(CountNgrams, PrefixClosureForEvents) {
  NGramCounts counts = CountNgrams(SplitCorpus({"a b c", "b c d"}), 3);
  for (const auto& [gram, c] : counts.events[2]) {
    if (gram.front() == LmVocab::kBosId) continue;  // <s> is context only
    NGramKey prefix(gram.begin(), gram.end() - 1);
    EXPECT_TRUE(counts.events[1].count(prefix));
  }
}

// Hand-computed interpolated Kneser-Ney for ["a b", "a b"], order 2,
// D = 0.5. Adjusted unigram (continuation) counts: a, b, </s> each have one
// distinct predecessor, so A1 = 3 and the unigram distribution is
//   P1(w) = (1 - 0.5)/3 + (0.5 * 3/3) * 1/4 = 7/24,   P1(<unk>) = 1/8.
// Bigram level, context "a": count 2, one follower type:
//   P(b|a) = (2 - 0.5)/2 + (0.5 * 1/2) * P1(b) = 3/4 + 7/96 = 79/96,
//   backoff(a) = 0.5 * 1/2 = 1/4.
TEST(EstimateKn, HandComputedBigramModel) {
  NGramCounts counts = CountNgrams(SplitCorpus({"a b", "a b"}), 2);
  KnDiscount discount;
  discount.fixed = 0.5;
  NGramModel model = EstimateKn(counts, discount);

  uint32_t a = model.vocab.Lookup("a");
  uint32_t b = model.vocab.Lookup("b");
  EXPECT_NEAR(std::pow(10, model.log_prob[0].at({b})), 7.0 / 24.0, 1e-12);
  EXPECT_NEAR(std::pow(10, model.log_prob[0].at({LmVocab::kUnkId})), 1.0 / 8.0,
              1e-12);
  EXPECT_NEAR(std::pow(10, model.log_prob[1].at({a, b})), 79.0 / 96.0, 1e-12);
  EXPECT_NEAR(std::pow(10, model.backoff[0].at({a})), 0.25, 1e-12);
  // The context is exactly normalized over vocabulary + <unk>.
  EXPECT_NEAR(testing::SumOverVocab(model, {a}), 1.0, 1e-9);
  EXPECT_NEAR(testing::SumOverVocab(model, {model.vocab.Lookup("<s>")}), 1.0,
              1e-9);
}

TEST(EstimateKn, SingleWordCorpusNormalizes) {
  NGramCounts counts = CountNgrams(SplitCorpus({"a"}), 1);
  NGramModel model = EstimateKn(counts, {});
  double pa = std::pow(10, model.log_prob[0].at({model.vocab.Lookup("a")}));
  double pe = std::pow(10, model.log_prob[0].at({LmVocab::kEosId}));
  double pu = std::pow(10, model.log_prob[0].at({LmVocab::kUnkId}));
  EXPECT_NEAR(pa, 0.375, 1e-12);
  EXPECT_NEAR(pe, 0.375, 1e-12);
  EXPECT_NEAR(pu, 0.25, 1e-12);
  EXPECT_NEAR(pa + pe + pu, 1.0, 1e-12);
}

TEST(EstimateKn, DiscountOutsideUnitIntervalRejected) {
  NGramCounts counts = CountNgrams(SplitCorpus({"a b"}), 2);
  KnDiscount discount;
  discount.fixed = 1.0;
  EXPECT_THROW(EstimateKn(counts, discount), ValidationError);
  discount.fixed = 0.0;
  EXPECT_THROW(EstimateKn(counts, discount), ValidationError);
}

std::vector<std::vector<std::string>> SyntheticTargets(size_t sentences,
                                                       size_t vocab,
                                                       uint64_t seed) {
  SynthOptions options;
  options.sentences = sentences;
  options.vocab = vocab;
  options.seed = seed;
  options.capitalize = false;
  ParallelCorpus corpus = MakeCopyCorpus(options);
  std::vector<std::vector<std::string>> out;
  for (const auto* pair : corpus.FlatPairs()) {
    out.push_back(Tokenize(pair->target).tokens);
  }
  return out;
}

// The LM acceptance behavior: a trigram model over a 200-word vocabulary
// must be exactly normalized at 100 random observed contexts.
TEST(EstimateKn, NormalizationSweepTrigram) {
  NGramModel model = EstimateKn(CountNgrams(SyntheticTargets(2000, 200, 3), 3));
  ASSERT_GE(model.vocab.size(), 200u);

  std::vector<NGramKey> contexts;
  for (const auto& [ctx, bo] : model.backoff[1]) contexts.push_back(ctx);
  for (const auto& [ctx, bo] : model.backoff[0]) contexts.push_back(ctx);
  Rng rng(17);
  for (int probe = 0; probe < 100; ++probe) {
    const NGramKey& ctx = contexts[rng.Below(contexts.size())];
    EXPECT_NEAR(testing::SumOverVocab(model, ctx), 1.0, 1e-6);
  }
  // Unseen contexts fall straight through to lower orders and stay
  // normalized as well.
  NGramKey unseen{model.vocab.Lookup("zzz-unseen"), model.vocab.Lookup("also")};
  EXPECT_NEAR(testing::SumOverVocab(model, unseen), 1.0, 1e-6);
}

TEST(EstimateKn, CountOfCountsDiscountInRange) {
  KnDiscount discount;
  discount.mode = KnDiscount::Mode::kCountOfCounts;
  NGramModel model =
      EstimateKn(CountNgrams(SyntheticTargets(500, 50, 5), 3), discount);
  for (double d : model.discounts) {
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, 1.0);
  }
  // Estimated discounts keep every context exactly normalized too.
  int checked = 0;
  for (const auto& [ctx, bo] : model.backoff[0]) {
    EXPECT_NEAR(testing::SumOverVocab(model, ctx), 1.0, 1e-6);
    if (++checked == 5) break;
  }
}

TEST(SentenceLogProb, TrainingSentenceBeatsPeers) {
  NGramModel model = EstimateKn(CountNgrams(SplitCorpus({"a b"}), 2));
  double trained = model.SentenceLogProb({"a", "b"});
  for (const auto& w1 : {"a", "b"}) {
    for (const auto& w2 : {"a", "b"}) {
      double other = model.SentenceLogProb({w1, w2});
      EXPECT_LE(other, trained + 1e-12)
          << w1 << " " << w2 << " should not beat the training sentence";
    }
  }
}

TEST(SentenceLogProb, EmptySentenceIsBoundaryTransition) {
  NGramModel model = EstimateKn(CountNgrams(SplitCorpus({"a b"}), 2));
  double direct = model.WordLogProb({LmVocab::kBosId}, LmVocab::kEosId);
  EXPECT_NEAR(model.SentenceLogProb({}), direct, 1e-12);
}

TEST(Perplexity, UnknownVocabularyCostsMore) {
  NGramModel model = EstimateKn(CountNgrams(SyntheticTargets(300, 30, 9), 3));
  auto train = SyntheticTargets(300, 30, 9);
  std::vector<std::vector<std::string>> gibberish{
      {"qq1", "qq2", "qq3"}, {"qq4", "qq5"}};
  EXPECT_LE(model.Perplexity(train), model.Perplexity(gibberish));
}

TEST(Perplexity, MoreDataHelps) {
  auto holdout = SyntheticTargets(200, 25, 1001);
  NGramModel small = EstimateKn(CountNgrams(SyntheticTargets(150, 25, 1), 3));
  NGramModel large = EstimateKn(CountNgrams(SyntheticTargets(1500, 25, 2), 3));
  EXPECT_LE(large.Perplexity(holdout), small.Perplexity(holdout));
}

TEST(Arpa, SaveLoadSaveIsByteFixedPoint) {
  testing::TempDir dir;
  NGramModel model = EstimateKn(CountNgrams(SyntheticTargets(200, 40, 4), 3));
  model.SaveArpa(dir.File("m.arpa"));
  NGramModel loaded = NGramModel::LoadArpa(dir.File("m.arpa"));
  loaded.SaveArpa(dir.File("m2.arpa"));
  EXPECT_EQ(testing::ReadAll(dir.File("m.arpa")),
            testing::ReadAll(dir.File("m2.arpa")));
}

TEST(Arpa, RoundTripPreservesScores) {
  testing::TempDir dir;
  NGramModel model = EstimateKn(CountNgrams(SplitCorpus({"a b c", "a b"}), 3));
  model.SaveArpa(dir.File("m.arpa"));
  NGramModel loaded = NGramModel::LoadArpa(dir.File("m.arpa"));
  std::vector<std::string> probe{"a", "b", "c"};
  EXPECT_NEAR(loaded.SentenceLogProb(probe), model.SentenceLogProb(probe),
              1e-4);
}

TEST(Arpa, CountMismatchIsParseError) {
  testing::TempDir dir;
  WriteFileAtomic(dir.File("bad.arpa"),
                  "\\data\\\n"
                  "ngram 1=3\n"
                  "\n"
                  "\\1-grams:\n"
                  "-0.5\t<unk>\n"
                  "-0.5\ta\n"
                  "\n"
                  "\\end\\\n");
  try {
    NGramModel::LoadArpa(dir.File("bad.arpa"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 1u);
  }
}

TEST(Arpa, MissingHeaderIsParseError) {
  testing::TempDir dir;
  WriteFileAtomic(dir.File("nohdr.arpa"), "\\1-grams:\n-0.5\ta\n\\end\\\n");
  EXPECT_THROW(NGramModel::LoadArpa(dir.File("nohdr.arpa")), ParseError);
}

TEST(Arpa, SectionsAreTabSeparated) {
  testing::TempDir dir;
  NGramModel model = EstimateKn(CountNgrams(SplitCorpus({"a b"}), 2));
  model.SaveArpa(dir.File("m.arpa"));
  std::string text = testing::ReadAll(dir.File("m.arpa"));
  EXPECT_NE(text.find("\\data\\\n"), std::string::npos);
  EXPECT_NE(text.find("ngram 1="), std::string::npos);
  EXPECT_NE(text.find("\\1-grams:\n"), std::string::npos);
  EXPECT_NE(text.find("\ta b"), std::string::npos);
  EXPECT_NE(text.find("\\end\\\n"), std::string::npos);
}

}  // namespace
}  // namespace pbmt
