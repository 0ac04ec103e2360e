// corpus.h
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
// Aligned bilingual corpora: the data model, plain-text / XML / TMX input,
// cleaning, the seven preparation variants, and train/test splitting.
//
// Corpora are immutable values; every operation returns a new corpus. The
// origin fields of a SentencePair identify the pair's position within the
// corpus that holds it, so structural operations reassign them.

#ifndef PBMT_CORPUS_H_
#define PBMT_CORPUS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pbmt {

struct SentencePair {
  std::string source;
  std::string target;
  std::string origin_brochure;
  size_t origin_line = 0;
};

struct Brochure {
  std::string id;
  std::string category;  // may be empty until category tags are assigned
  std::vector<SentencePair> pairs;
};

// Which preparation produced a corpus. Values follow the pipeline's corpus
// version numbering.
enum class VariantTag {
  kOriginal = 1,
  kShuffled = 2,
  kBrochureTagged = 3,
  kMixed = 4,
  kCategoryGrouped = 5,
  kUndersampled = 6,
  kOversampled = 7,
};

const char* VariantTagName(VariantTag tag);

struct ParallelCorpus {
  std::vector<Brochure> brochures;
  VariantTag variant_tag = VariantTag::kOriginal;
  uint64_t rng_seed = 0;

  size_t pair_count() const;
  bool empty() const { return pair_count() == 0; }

  // All pairs in corpus order (brochures concatenated).
  std::vector<const SentencePair*> FlatPairs() const;

  // Checks structural invariants (ids unique, origins resolvable, no line
  // breaks inside sentences); throws ValidationError on violation.
  void CheckInvariants() const;
};

enum class SplitGranularity { kLine, kBrochure };

// The train fraction is kept rational so cut points are exact integers.
struct SplitSpec {
  uint32_t train_num = 9;
  uint32_t train_den = 10;
  SplitGranularity granularity = SplitGranularity::kLine;
  uint64_t seed = 0;  // reserved; the prefix split consumes no randomness
};

struct SplitResult {
  ParallelCorpus train;
  ParallelCorpus test;
};

enum class RemovalReason { kDuplicate, kIncomplete };

struct RemovalReport {
  std::vector<std::pair<std::string, RemovalReason>> removed;

  std::string ToTsv() const;
  void WriteTsv(const std::string& path) const;
};

struct CleanOptions {
  // Duplicate groups share the id stem left after stripping this suffix
  // pattern (ECMAScript regex, anchored at the end by the caller's pattern).
  std::string key_suffix_regex = "[-_. ](v|ver|rev|batch)?[0-9]+$";
  // Which duplicate survives within a group.
  enum class Prefer { kLast, kFirst } prefer = Prefer::kLast;
};

// ---- Input / output ----------------------------------------------------

// Two line-parallel plain-text files; returns a single-brochure corpus.
ParallelCorpus LoadPlaintext(const std::string& src_path,
                             const std::string& tgt_path);

// Brochure XML: <corpus> of <brochure id=".." category=".."> of
// <pair><src>..</src><tgt>..</tgt></pair>.
ParallelCorpus LoadBrochureXml(const std::string& path);

// TMX 1.4 as written by the sentence aligner: <tu> with two <tuv> variants,
// first variant = source. Returns a single-brochure corpus.
ParallelCorpus LoadTmx(const std::string& path);

void SavePlaintext(const ParallelCorpus& corpus, const std::string& src_path,
                   const std::string& tgt_path);
void SaveBrochureXml(const ParallelCorpus& corpus, const std::string& path);

// ---- Cleaning ----------------------------------------------------------

// Removes incomplete brochures (no non-blank target line), then collapses
// duplicate groups to one preferred member. Always succeeds.
std::pair<ParallelCorpus, RemovalReport> CleanDuplicates(
    const std::vector<Brochure>& brochures, const CleanOptions& options = {});

// ---- Preparation variants ----------------------------------------------

// V2: line-level shuffle of the aligned stream; pairs stay bound. Returns a
// single-brochure corpus.
ParallelCorpus ShuffleAligned(const ParallelCorpus& corpus, uint64_t seed);

// V4: global interleaving of pairs across brochures. Brochure identities,
// categories, and sizes are kept; the pairs are dealt randomly across all
// brochure slots.
ParallelCorpus MixSentences(const ParallelCorpus& corpus, uint64_t seed);

// V5 support: stable-sorts brochures by category label.
ParallelCorpus GroupByCategory(const ParallelCorpus& corpus);

// V6: trims every brochure to its category's minimum length by removing
// random pairs; survivors keep their relative order.
ParallelCorpus Undersample(const ParallelCorpus& corpus, uint64_t seed);

// V7: pads every brochure to its category's maximum length by appending
// random duplicates drawn from the brochure's own pairs.
ParallelCorpus Oversample(const ParallelCorpus& corpus, uint64_t seed);

// Deterministic prefix split at the requested granularity.
SplitResult Split(const ParallelCorpus& corpus, const SplitSpec& spec);

}  // namespace pbmt

#endif  // PBMT_CORPUS_H_
