// textprep_test.cc
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

#include "pbmt/textprep.h"

#include <gtest/gtest.h>

#include "pbmt/error.h"
#include "pbmt/rng.h"
#include "support/testutil.h"

namespace pbmt {
namespace {

std::vector<std::string> Toks(const std::string& line) {
  return Tokenize(line).tokens;
}

TEST(Tokenize, SplitsPunctuation) {
  EXPECT_EQ(Toks("Take 2 tablets."),
            (std::vector<std::string>{"Take", "2", "tablets", "."}));
  EXPECT_EQ(Toks(""), std::vector<std::string>{});
  EXPECT_EQ(Toks("(see note), ok!"),
            (std::vector<std::string>{"(", "see", "note", ")", ",", "ok", "!"}));
}

TEST(Tokenize, ArabicScriptPunctuation) {
  EXPECT_EQ(Toks("چۆنی؟"), (std::vector<std::string>{"چۆنی", "؟"}));
  EXPECT_EQ(Toks("یەک، دوو"), (std::vector<std::string>{"یەک", "،", "دوو"}));
}

TEST(Tokenize, PreservesIntraWordHyphens) {
  EXPECT_EQ(Toks("well-known dose-"),
            (std::vector<std::string>{"well-known", "dose", "-"}));
}

TEST(Tokenize, MapsArabicLetterVariants) {
  // Arabic yeh/kaf left by OCR map to their Kurdish forms by default.
  EXPECT_EQ(Toks("كي"), (std::vector<std::string>{"کی"}));
  TokenizerOptions off;
  off.map_arabic_variants = false;
  EXPECT_EQ(Tokenize("كي", off).tokens,
            (std::vector<std::string>{"كي"}));
}

TEST(Tokenize, PunctuationOnlyChunks) {
  EXPECT_EQ(Toks("..."), (std::vector<std::string>{".", ".", "."}));
  EXPECT_EQ(Toks("-"), (std::vector<std::string>{"-"}));
}

TEST(Tokenize, IdempotentOverRandomLines) {
  Rng rng(99);
  const std::string alphabet = "ab2.,!? -";
  for (int trial = 0; trial < 300; ++trial) {
    std::string line;
    size_t len = rng.Below(30);
    for (size_t i = 0; i < len; ++i) {
      line.push_back(alphabet[rng.Below(alphabet.size())]);
    }
    TokenizedSentence first = Tokenize(line);
    TokenizedSentence second = Tokenize(Detokenize(first));
    EXPECT_EQ(first.tokens, second.tokens) << "line: [" << line << "]";

    // Concatenation preserves every non-space character in order.
    std::string squashed;
    for (char c : line) {
      if (c != ' ') squashed.push_back(c);
    }
    std::string joined;
    for (const auto& token : first.tokens) joined += token;
    EXPECT_EQ(joined, squashed) << "line: [" << line << "]";
  }
}

std::vector<TokenizedSentence> Sentences(
    const std::vector<std::string>& lines) {
  std::vector<TokenizedSentence> out;
  for (const auto& line : lines) out.push_back(Tokenize(line));
  return out;
}

TEST(Truecaser, MajorityFormWins) {
  std::vector<std::string> lines;
  for (int i = 0; i < 10; ++i) lines.push_back("x the dose");
  TruecaseModel model = TrainTruecaser(Sentences(lines));
  ASSERT_NE(model.BestForm("the"), nullptr);
  EXPECT_EQ(*model.BestForm("the"), "the");
}

TEST(Truecaser, SingleMidSentenceOccurrence) {
  TruecaseModel model = TrainTruecaser(Sentences({"visit Paris today"}));
  ASSERT_NE(model.BestForm("paris"), nullptr);
  EXPECT_EQ(*model.BestForm("paris"), "Paris");
}

TEST(Truecaser, TieBreaksToCodePointOrder) {
  // One mid-sentence occurrence each; uppercase sorts before lowercase.
  ASSERT_LT(std::string("Abc"), std::string("abc"));
  TruecaseModel model = TrainTruecaser(Sentences({"x Abc y", "x abc y"}));
  ASSERT_NE(model.BestForm("abc"), nullptr);
  EXPECT_EQ(*model.BestForm("abc"), "Abc");
}

TEST(Truecaser, SentenceInitialHalfWeight) {
  // "The" opens two sentences (weight 2x1); "the" appears once
  // mid-sentence (weight 2). The tie resolves to "The" by code point, so
  // add one more interior "the" to tip the balance.
  TruecaseModel model = TrainTruecaser(
      Sentences({"The dose", "The dose", "take the dose", "take the dose"}));
  EXPECT_EQ(*model.BestForm("the"), "the");
  TruecaseModel initial_only = TrainTruecaser(Sentences({"The dose", "The dose"}));
  EXPECT_EQ(*initial_only.BestForm("the"), "The");
}

TEST(Truecaser, EmptyCorpusRejected) {
  EXPECT_THROW(TrainTruecaser({}), ValidationError);
}

TEST(Truecase, LowersKnownSentenceInitial) {
  TruecaseModel model = TrainTruecaser(Sentences({"take the dose"}));
  TokenizedSentence sentence;
  sentence.tokens = {"The", "dose"};
  EXPECT_EQ(Truecase(sentence, model).tokens,
            (std::vector<std::string>{"the", "dose"}));
}

TEST(Truecase, UnknownTokenPassesThrough) {
  TruecaseModel model = TrainTruecaser(Sentences({"take the dose"}));
  TokenizedSentence sentence;
  sentence.tokens = {"Xyzzy"};
  EXPECT_EQ(Truecase(sentence, model).tokens,
            (std::vector<std::string>{"Xyzzy"}));
}

TEST(Truecase, OnlyInitialTokenChanges) {
  TruecaseModel model = TrainTruecaser(Sentences({"take the dose"}));
  TokenizedSentence sentence;
  sentence.tokens = {"The", "The", "Dose"};
  auto out = Truecase(sentence, model).tokens;
  EXPECT_EQ(out[0], "the");
  EXPECT_EQ(out[1], "The");
  EXPECT_EQ(out[2], "Dose");
}

TEST(Recase, RestoresSentenceInitialUppercase) {
  TruecaseModel model = TrainTruecaser(Sentences({"take the dose"}));
  TokenizedSentence sentence;
  sentence.tokens = {"The", "dose"};
  TokenizedSentence round = Recase(Truecase(sentence, model), model);
  EXPECT_EQ(round.tokens, sentence.tokens);
}

TEST(Recase, KeepsAllCapsBestForm) {
  TruecaseModel model = TrainTruecaser(Sentences({"the NASA probe"}));
  TokenizedSentence sentence;
  sentence.tokens = {"nasa", "probe"};
  EXPECT_EQ(Recase(sentence, model).tokens[0], "NASA");
}

TEST(Recase, RoundTripOverRandomSentences) {
  TruecaseModel model = TrainTruecaser(
      Sentences({"alpha beta gamma delta", "beta gamma", "alpha delta"}));
  Rng rng(4);
  std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta"};
  for (int trial = 0; trial < 100; ++trial) {
    TokenizedSentence sentence;
    size_t len = 1 + rng.Below(6);
    for (size_t i = 0; i < len; ++i) {
      std::string w = vocab[rng.Below(vocab.size())];
      if (i == 0) w[0] = static_cast<char>(w[0] - 32);  // capitalize
      sentence.tokens.push_back(w);
    }
    TokenizedSentence round = Recase(Truecase(sentence, model), model);
    EXPECT_EQ(round.tokens, sentence.tokens);
  }
}

TEST(TruecaseModelTsv, RoundTrip) {
  testing::TempDir dir;
  TruecaseModel model = TrainTruecaser(
      Sentences({"The dose", "take the dose", "visit Paris"}));
  model.Save(dir.File("tc.tsv"));
  TruecaseModel loaded = TruecaseModel::Load(dir.File("tc.tsv"));
  EXPECT_EQ(*loaded.BestForm("the"), *model.BestForm("the"));
  EXPECT_EQ(*loaded.BestForm("paris"), "Paris");
  // Half weights of the persisted best forms survive the decimal round
  // trip (the TSV stores best forms only).
  EXPECT_DOUBLE_EQ(loaded.CountOf("the"), model.CountOf("the"));
  EXPECT_DOUBLE_EQ(loaded.CountOf("Paris"), model.CountOf("Paris"));
}

ParallelCorpus CorpusOf(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  ParallelCorpus corpus;
  Brochure brochure;
  brochure.id = "b";
  for (size_t i = 0; i < pairs.size(); ++i) {
    brochure.pairs.push_back({pairs[i].first, pairs[i].second, "b", i});
  }
  corpus.brochures.push_back(std::move(brochure));
  return corpus;
}

TEST(CleanPairs, RemovesEmptySide) {
  auto [cleaned, report] = CleanPairs(CorpusOf({{"", "x"}, {"a b", "c"}}));
  EXPECT_EQ(cleaned.pair_count(), 1u);
  EXPECT_EQ(report.removed_empty, 1u);
}

TEST(CleanPairs, RemovesBadRatio) {
  std::string long_side = "t1 t2 t3 t4 t5 t6 t7 t8 t9 t10";
  auto [cleaned, report] = CleanPairs(CorpusOf({{long_side, "one"}}));
  EXPECT_EQ(cleaned.pair_count(), 0u);
  EXPECT_EQ(report.removed_ratio, 1u);
}

TEST(CleanPairs, RemovesOverlong) {
  std::string words;
  for (int i = 0; i < 81; ++i) words += "w ";
  auto [cleaned, report] = CleanPairs(CorpusOf({{words, words}}));
  EXPECT_EQ(cleaned.pair_count(), 0u);
  EXPECT_EQ(report.removed_too_long, 1u);
}

TEST(CleanPairs, CompliantCorpusUntouched) {
  ParallelCorpus corpus = CorpusOf({{"a b c", "x y"}, {"d", "z"}});
  auto [cleaned, report] = CleanPairs(corpus);
  EXPECT_EQ(cleaned.pair_count(), 2u);
  EXPECT_EQ(report.total(), 0u);
}

TEST(CleanPairs, RetainedPairsSatisfyAllRules) {
  CleaningRules rules;
  rules.max_tokens = 5;
  rules.max_length_ratio = 2.0;
  ParallelCorpus corpus = CorpusOf({{"a b c d e f", "x"},
                                    {"a b c", "x"},
                                    {"a b", "x y"},
                                    {"", ""},
                                    {"q w e", "x y z"}});
  auto [cleaned, report] = CleanPairs(corpus, rules);
  for (const auto* pair : cleaned.FlatPairs()) {
    size_t s = Tokenize(pair->source).tokens.size();
    size_t t = Tokenize(pair->target).tokens.size();
    EXPECT_GE(s, 1u);
    EXPECT_LE(s, 5u);
    EXPECT_LE(static_cast<double>(std::max(s, t)) /
                  static_cast<double>(std::min(s, t)),
              2.0);
  }
  EXPECT_EQ(cleaned.pair_count() + report.total(), corpus.pair_count());
}

}  // namespace
}  // namespace pbmt
