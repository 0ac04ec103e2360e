// synth.cc
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

#include "pbmt/synth.h"

#include <algorithm>
#include <cstdio>

#include "pbmt/rng.h"
#include "pbmt/utf8.h"

namespace pbmt {

namespace {

// Pronounceable lowercase words: syllable triples indexed by word id.
std::string WordFor(size_t index, const char* flavor) {
  static constexpr const char* kSyllables[] = {"ba", "de", "ki", "lo", "mu",
                                               "na", "po", "ra", "su", "ta"};
  std::string word = flavor;
  word += kSyllables[(index / 100) % 10];
  word += kSyllables[(index / 10) % 10];
  word += kSyllables[index % 10];
  return word;
}

// Words are drawn without replacement and kept in ascending vocabulary
// order. Distinct words keep the positionless IBM Model 1 alignment from
// tying on repeats, and the fixed order gives the language sequential
// structure an n-gram model can learn; order-free text would make
// reordering score-neutral and untranslatable by construction.
std::vector<size_t> RandomSentence(Rng& rng, const SynthOptions& options) {
  size_t len = options.min_len +
               static_cast<size_t>(rng.Below(options.max_len - options.min_len + 1));
  len = std::min(len, options.vocab);
  return rng.SampleWithoutReplacement(options.vocab, len);  // sorted
}

std::string Render(const std::vector<size_t>& ids, const char* flavor,
                   bool capitalize) {
  std::string line;
  for (size_t k = 0; k < ids.size(); ++k) {
    if (k > 0) line += ' ';
    std::string word = WordFor(ids[k], flavor);
    if (k == 0 && capitalize) word = utf8::UpperFirst(word);
    line += word;
  }
  return line;
}

void FinishSingleBrochure(ParallelCorpus& corpus, Brochure&& brochure) {
  for (size_t i = 0; i < brochure.pairs.size(); ++i) {
    brochure.pairs[i].origin_brochure = brochure.id;
    brochure.pairs[i].origin_line = i;
  }
  corpus.brochures.push_back(std::move(brochure));
}

}  // namespace

ParallelCorpus MakeCopyCorpus(const SynthOptions& options) {
  Rng rng(options.seed);
  ParallelCorpus corpus;
  corpus.rng_seed = options.seed;
  Brochure brochure;
  brochure.id = "copy";
  for (size_t s = 0; s < options.sentences; ++s) {
    std::vector<size_t> ids = RandomSentence(rng, options);
    std::string line = Render(ids, "", options.capitalize);
    brochure.pairs.push_back({line, line, "", 0});
  }
  FinishSingleBrochure(corpus, std::move(brochure));
  return corpus;
}

ParallelCorpus MakeBijectiveCorpus(const SynthOptions& options) {
  Rng rng(options.seed);
  ParallelCorpus corpus;
  corpus.rng_seed = options.seed;
  Brochure brochure;
  brochure.id = "bijective";
  for (size_t s = 0; s < options.sentences; ++s) {
    std::vector<size_t> ids = RandomSentence(rng, options);
    brochure.pairs.push_back({Render(ids, "", options.capitalize),
                              Render(ids, "zu", options.capitalize), "", 0});
  }
  FinishSingleBrochure(corpus, std::move(brochure));
  return corpus;
}

ParallelCorpus MakeBrochureEvalCorpus() {
  // Per-category brochure sizes. Categories c001..c014 mix short and long
  // brochures, c015..c068 are five- and four-brochure categories with a
  // common middle size, c069..c076 are flat. The exact numbers pin the
  // corpus total at 22,940 pairs with the variant totals documented in the
  // header.
  std::vector<std::vector<size_t>> category_sizes(77);
  static constexpr size_t kPairCats[10][2] = {
      {53, 105}, {54, 106}, {55, 107}, {56, 108}, {57, 109},
      {58, 110}, {59, 111}, {60, 112}, {61, 113}, {59, 114}};
  for (size_t k = 0; k < 10; ++k) {
    category_sizes[k + 1] = {kPairCats[k][0], kPairCats[k][1]};
  }
  static constexpr size_t kTripleCats[4][3] = {
      {41, 45, 87}, {45, 50, 91}, {49, 55, 95}, {54, 55, 100}};
  for (size_t k = 0; k < 4; ++k) {
    category_sizes[k + 11] = {kTripleCats[k][0], kTripleCats[k][1],
                              kTripleCats[k][2]};
  }
  for (size_t k = 0; k < 39; ++k) {
    size_t low = k < 27 ? 52 : 55;
    size_t high = k < 25 ? 111 : 112;
    auto mid = [&](size_t offset) -> size_t {
      return 3 * k + offset < 95 ? 67 : 68;
    };
    category_sizes[k + 15] = {low, mid(0), mid(1), mid(2), high};
  }
  for (size_t k = 0; k < 15; ++k) {
    size_t low = k < 14 ? 40 : 42;
    size_t high = k < 13 ? 90 : 94;
    category_sizes[k + 54] = {low, 65, 65, high};
  }
  static constexpr size_t kFlatSizes[8] = {69, 70, 71, 72, 73, 74, 75, 78};
  for (size_t k = 0; k < 8; ++k) {
    category_sizes[k + 69].assign(4, kFlatSizes[k]);
  }

  // Document order: the flat categories first, the mid-size block, then the
  // mixed-size categories last.
  std::vector<size_t> category_order;
  for (size_t c = 69; c <= 76; ++c) category_order.push_back(c);
  for (size_t c = 15; c <= 68; ++c) category_order.push_back(c);
  for (size_t c = 1; c <= 14; ++c) category_order.push_back(c);

  ParallelCorpus corpus;
  corpus.variant_tag = VariantTag::kBrochureTagged;
  size_t brochure_index = 0;
  for (size_t c : category_order) {
    char category[8];
    std::snprintf(category, sizeof(category), "c%03zu", c);
    for (size_t size : category_sizes[c]) {
      ++brochure_index;
      char id[8];
      std::snprintf(id, sizeof(id), "b%03zu", brochure_index);
      Brochure brochure;
      brochure.id = id;
      brochure.category = category;
      for (size_t line = 0; line < size; ++line) {
        std::string stem = std::string(id) + " line " + std::to_string(line);
        brochure.pairs.push_back(
            {"Take dose " + stem + " daily.", "بیخۆ دۆز " + stem + " ڕۆژانە.",
             brochure.id, line});
      }
      corpus.brochures.push_back(std::move(brochure));
    }
  }
  return corpus;
}

}  // namespace pbmt
