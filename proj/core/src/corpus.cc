// corpus.cc
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

#include "pbmt/corpus.h"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/rng.h"
#include "pbmt/xml.h"

namespace pbmt {

namespace {

bool IsBlank(const std::string& s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

void ReassignOrigins(ParallelCorpus& corpus) {
  for (auto& brochure : corpus.brochures) {
    for (size_t i = 0; i < brochure.pairs.size(); ++i) {
      brochure.pairs[i].origin_brochure = brochure.id;
      brochure.pairs[i].origin_line = i;
    }
  }
}

void RejectLineBreaks(const std::string& text, const std::string& where) {
  if (text.find('\n') != std::string::npos ||
      text.find('\r') != std::string::npos) {
    throw ValidationError(where + ": sentence contains a line break");
  }
}

}  // namespace

const char* VariantTagName(VariantTag tag) {
  switch (tag) {
    case VariantTag::kOriginal:
      return "original";
    case VariantTag::kShuffled:
      return "shuffled";
    case VariantTag::kBrochureTagged:
      return "brochure-tagged";
    case VariantTag::kMixed:
      return "mixed";
    case VariantTag::kCategoryGrouped:
      return "category-grouped";
    case VariantTag::kUndersampled:
      return "undersampled";
    case VariantTag::kOversampled:
      return "oversampled";
  }
  return "unknown";
}

size_t ParallelCorpus::pair_count() const {
  size_t n = 0;
  for (const auto& b : brochures) n += b.pairs.size();
  return n;
}

std::vector<const SentencePair*> ParallelCorpus::FlatPairs() const {
  std::vector<const SentencePair*> out;
  out.reserve(pair_count());
  for (const auto& b : brochures) {
    for (const auto& p : b.pairs) out.push_back(&p);
  }
  return out;
}

void ParallelCorpus::CheckInvariants() const {
  std::unordered_set<std::string> ids;
  for (const auto& b : brochures) {
    if (!ids.insert(b.id).second) {
      throw ValidationError("duplicate brochure id '" + b.id + "'");
    }
    for (size_t i = 0; i < b.pairs.size(); ++i) {
      const auto& p = b.pairs[i];
      RejectLineBreaks(p.source, "brochure " + b.id);
      RejectLineBreaks(p.target, "brochure " + b.id);
      if (p.origin_brochure != b.id || p.origin_line != i) {
        throw ValidationError("brochure " + b.id + " pair " +
                              std::to_string(i) + " has stale origin fields");
      }
    }
  }
}

std::string RemovalReport::ToTsv() const {
  std::string out;
  for (const auto& [id, reason] : removed) {
    out += id;
    out += '\t';
    out += reason == RemovalReason::kDuplicate ? "duplicate" : "incomplete";
    out += '\n';
  }
  return out;
}

void RemovalReport::WriteTsv(const std::string& path) const {
  WriteFileAtomic(path, ToTsv());
}

ParallelCorpus LoadPlaintext(const std::string& src_path,
                             const std::string& tgt_path) {
  std::vector<std::string> src = ReadLines(src_path);
  std::vector<std::string> tgt = ReadLines(tgt_path);
  if (src.size() != tgt.size()) {
    throw ValidationError("line count mismatch: " + src_path + " has " +
                          std::to_string(src.size()) + " lines, " + tgt_path +
                          " has " + std::to_string(tgt.size()));
  }
  ParallelCorpus corpus;
  Brochure brochure;
  brochure.id = "merged";
  brochure.pairs.reserve(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    brochure.pairs.push_back({std::move(src[i]), std::move(tgt[i]), "", 0});
  }
  if (!brochure.pairs.empty()) corpus.brochures.push_back(std::move(brochure));
  ReassignOrigins(corpus);
  return corpus;
}

ParallelCorpus LoadBrochureXml(const std::string& path) {
  xml::Element root = xml::Parse(ReadFileBytes(path), path);
  if (root.name != "corpus") {
    throw ParseError(path, root.line, "root element must be <corpus>");
  }
  ParallelCorpus corpus;
  corpus.variant_tag = VariantTag::kBrochureTagged;
  std::unordered_set<std::string> seen_ids;
  for (const auto& child : root.children) {
    if (child.name != "brochure") {
      throw ParseError(path, child.line, "unexpected element <" + child.name +
                                             "> inside <corpus>");
    }
    const std::string* id = child.FindAttribute("id");
    if (id == nullptr || id->empty()) {
      throw ParseError(path, child.line, "<brochure> requires an id");
    }
    if (!seen_ids.insert(*id).second) {
      throw ValidationError(path + ": duplicate brochure id '" + *id + "'");
    }
    Brochure brochure;
    brochure.id = *id;
    if (const std::string* cat = child.FindAttribute("category")) {
      brochure.category = *cat;
    }
    for (const auto& pair_elem : child.children) {
      if (pair_elem.name != "pair") {
        throw ParseError(path, pair_elem.line,
                         "unexpected element <" + pair_elem.name +
                             "> inside <brochure>");
      }
      const xml::Element* src = pair_elem.FirstChild("src");
      const xml::Element* tgt = pair_elem.FirstChild("tgt");
      if (src == nullptr || tgt == nullptr) {
        throw ParseError(path, pair_elem.line,
                         "<pair> requires <src> and <tgt>");
      }
      if (src->text.find('\n') != std::string::npos ||
          tgt->text.find('\n') != std::string::npos) {
        throw ParseError(path, pair_elem.line,
                         "sentence text must not span lines");
      }
      brochure.pairs.push_back({src->text, tgt->text, "", 0});
    }
    corpus.brochures.push_back(std::move(brochure));
  }
  ReassignOrigins(corpus);
  return corpus;
}

ParallelCorpus LoadTmx(const std::string& path) {
  xml::Element root = xml::Parse(ReadFileBytes(path), path);
  if (root.name != "tmx") {
    throw ParseError(path, root.line, "root element must be <tmx>");
  }
  const xml::Element* body = root.FirstChild("body");
  if (body == nullptr) {
    throw ParseError(path, root.line, "<tmx> requires a <body>");
  }
  ParallelCorpus corpus;
  Brochure brochure;
  brochure.id = "tmx";
  for (const auto* tu : body->ChildrenNamed("tu")) {
    auto tuvs = tu->ChildrenNamed("tuv");
    if (tuvs.size() != 2) {
      throw ParseError(path, tu->line,
                       "<tu> requires exactly two <tuv> variants, found " +
                           std::to_string(tuvs.size()));
    }
    std::string sides[2];
    for (int k = 0; k < 2; ++k) {
      if (const xml::Element* seg = tuvs[k]->FirstChild("seg")) {
        sides[k] = seg->text;
      }
    }
    brochure.pairs.push_back({sides[0], sides[1], "", 0});
  }
  if (!brochure.pairs.empty()) corpus.brochures.push_back(std::move(brochure));
  ReassignOrigins(corpus);
  return corpus;
}

void SavePlaintext(const ParallelCorpus& corpus, const std::string& src_path,
                   const std::string& tgt_path) {
  std::vector<std::string> src, tgt;
  src.reserve(corpus.pair_count());
  tgt.reserve(corpus.pair_count());
  for (const auto* p : corpus.FlatPairs()) {
    src.push_back(p->source);
    tgt.push_back(p->target);
  }
  WriteLinesAtomic(src_path, src);
  WriteLinesAtomic(tgt_path, tgt);
}

void SaveBrochureXml(const ParallelCorpus& corpus, const std::string& path) {
  // Layout is one element per line with pairs on a single line, so the file
  // line count is 2 + 2*brochures + pairs.
  std::string out = "<corpus>\n";
  for (const auto& b : corpus.brochures) {
    out += "<brochure id=\"" + xml::Escape(b.id) + "\"";
    if (!b.category.empty()) {
      out += " category=\"" + xml::Escape(b.category) + "\"";
    }
    out += ">\n";
    for (const auto& p : b.pairs) {
      out += "<pair><src>" + xml::Escape(p.source) + "</src><tgt>" +
             xml::Escape(p.target) + "</tgt></pair>\n";
    }
    out += "</brochure>\n";
  }
  out += "</corpus>\n";
  WriteFileAtomic(path, out);
}

std::pair<ParallelCorpus, RemovalReport> CleanDuplicates(
    const std::vector<Brochure>& brochures, const CleanOptions& options) {
  RemovalReport report;
  std::vector<const Brochure*> complete;
  for (const auto& b : brochures) {
    bool has_target = false;
    for (const auto& p : b.pairs) {
      if (!IsBlank(p.target)) {
        has_target = true;
        break;
      }
    }
    if (has_target) {
      complete.push_back(&b);
    } else {
      report.removed.emplace_back(b.id, RemovalReason::kIncomplete);
    }
  }

  std::regex suffix(options.key_suffix_regex);
  auto stem_of = [&suffix](std::string id) {
    // Strip version/batch suffixes repeatedly: "amoxi_v2_batch3" -> "amoxi".
    for (;;) {
      std::string next = std::regex_replace(id, suffix, "");
      if (next == id || next.empty()) return id;
      id = std::move(next);
    }
  };

  std::unordered_map<std::string, size_t> keeper;  // stem -> index in complete
  for (size_t i = 0; i < complete.size(); ++i) {
    std::string stem = stem_of(complete[i]->id);
    auto [it, inserted] = keeper.try_emplace(stem, i);
    if (!inserted && options.prefer == CleanOptions::Prefer::kLast) {
      it->second = i;
    }
  }

  std::unordered_set<size_t> kept;
  for (const auto& [stem, idx] : keeper) kept.insert(idx);

  ParallelCorpus corpus;
  for (size_t i = 0; i < complete.size(); ++i) {
    if (kept.count(i)) {
      corpus.brochures.push_back(*complete[i]);
    } else {
      report.removed.emplace_back(complete[i]->id, RemovalReason::kDuplicate);
    }
  }
  ReassignOrigins(corpus);
  return {std::move(corpus), std::move(report)};
}

ParallelCorpus ShuffleAligned(const ParallelCorpus& corpus, uint64_t seed) {
  std::vector<SentencePair> pairs;
  pairs.reserve(corpus.pair_count());
  for (const auto* p : corpus.FlatPairs()) pairs.push_back(*p);
  Rng rng(seed);
  rng.Shuffle(pairs);

  ParallelCorpus out;
  out.variant_tag = VariantTag::kShuffled;
  out.rng_seed = seed;
  Brochure brochure;
  brochure.id = "shuffled";
  brochure.pairs = std::move(pairs);
  if (!brochure.pairs.empty()) out.brochures.push_back(std::move(brochure));
  ReassignOrigins(out);
  return out;
}

ParallelCorpus MixSentences(const ParallelCorpus& corpus, uint64_t seed) {
  std::vector<SentencePair> pairs;
  pairs.reserve(corpus.pair_count());
  for (const auto* p : corpus.FlatPairs()) pairs.push_back(*p);
  Rng rng(seed);
  rng.Shuffle(pairs);

  ParallelCorpus out;
  out.variant_tag = VariantTag::kMixed;
  out.rng_seed = seed;
  size_t next = 0;
  for (const auto& b : corpus.brochures) {
    Brochure mixed;
    mixed.id = b.id;
    mixed.category = b.category;
    mixed.pairs.assign(pairs.begin() + static_cast<ptrdiff_t>(next),
                       pairs.begin() + static_cast<ptrdiff_t>(next) +
                           static_cast<ptrdiff_t>(b.pairs.size()));
    next += b.pairs.size();
    out.brochures.push_back(std::move(mixed));
  }
  ReassignOrigins(out);
  return out;
}

ParallelCorpus GroupByCategory(const ParallelCorpus& corpus) {
  ParallelCorpus out = corpus;
  out.variant_tag = VariantTag::kCategoryGrouped;
  std::stable_sort(
      out.brochures.begin(), out.brochures.end(),
      [](const Brochure& a, const Brochure& b) { return a.category < b.category; });
  ReassignOrigins(out);
  return out;
}

namespace {

std::map<std::string, size_t> CategoryExtreme(const ParallelCorpus& corpus,
                                              bool want_min) {
  std::map<std::string, size_t> extreme;
  for (const auto& b : corpus.brochures) {
    if (b.category.empty()) {
      throw ValidationError("brochure '" + b.id +
                            "' has no category label; tag categories before "
                            "resampling");
    }
    auto [it, inserted] = extreme.try_emplace(b.category, b.pairs.size());
    if (!inserted) {
      it->second = want_min ? std::min(it->second, b.pairs.size())
                            : std::max(it->second, b.pairs.size());
    }
  }
  return extreme;
}

}  // namespace

ParallelCorpus Undersample(const ParallelCorpus& corpus, uint64_t seed) {
  auto target = CategoryExtreme(corpus, /*want_min=*/true);
  Rng rng(seed);
  ParallelCorpus out;
  out.variant_tag = VariantTag::kUndersampled;
  out.rng_seed = seed;
  for (const auto& b : corpus.brochures) {
    size_t keep = target.at(b.category);
    Brochure trimmed;
    trimmed.id = b.id;
    trimmed.category = b.category;
    std::vector<size_t> kept = rng.SampleWithoutReplacement(b.pairs.size(), keep);
    trimmed.pairs.reserve(kept.size());
    for (size_t i : kept) trimmed.pairs.push_back(b.pairs[i]);
    out.brochures.push_back(std::move(trimmed));
  }
  ReassignOrigins(out);
  return out;
}

ParallelCorpus Oversample(const ParallelCorpus& corpus, uint64_t seed) {
  auto target = CategoryExtreme(corpus, /*want_min=*/false);
  Rng rng(seed);
  ParallelCorpus out;
  out.variant_tag = VariantTag::kOversampled;
  out.rng_seed = seed;
  for (const auto& b : corpus.brochures) {
    size_t want = target.at(b.category);
    Brochure padded;
    padded.id = b.id;
    padded.category = b.category;
    padded.pairs = b.pairs;
    while (padded.pairs.size() < want) {
      size_t pick = static_cast<size_t>(rng.Below(b.pairs.size()));
      padded.pairs.push_back(b.pairs[pick]);
    }
    out.brochures.push_back(std::move(padded));
  }
  ReassignOrigins(out);
  return out;
}

SplitResult Split(const ParallelCorpus& corpus, const SplitSpec& spec) {
  if (spec.train_num == 0 || spec.train_num >= spec.train_den) {
    throw ValidationError("train fraction must lie strictly between 0 and 1");
  }
  if (corpus.empty()) throw ValidationError("cannot split an empty corpus");

  SplitResult result;
  result.train.variant_tag = corpus.variant_tag;
  result.test.variant_tag = corpus.variant_tag;
  result.train.rng_seed = corpus.rng_seed;
  result.test.rng_seed = corpus.rng_seed;

  if (spec.granularity == SplitGranularity::kBrochure) {
    size_t total = corpus.brochures.size();
    size_t cut = total * spec.train_num / spec.train_den;
    if (cut == 0 || cut == total) {
      throw ValidationError(
          "split fraction leaves an empty side: " + std::to_string(cut) +
          " of " + std::to_string(total) + " brochures in train");
    }
    result.train.brochures.assign(corpus.brochures.begin(),
                                  corpus.brochures.begin() + static_cast<ptrdiff_t>(cut));
    result.test.brochures.assign(corpus.brochures.begin() + static_cast<ptrdiff_t>(cut),
                                 corpus.brochures.end());
  } else {
    size_t total = corpus.pair_count();
    size_t cut = total * spec.train_num / spec.train_den;
    if (cut == 0 || cut == total) {
      throw ValidationError(
          "split fraction leaves an empty side: " + std::to_string(cut) +
          " of " + std::to_string(total) + " lines in train");
    }
    size_t taken = 0;
    for (const auto& b : corpus.brochures) {
      if (taken >= cut) {
        result.test.brochures.push_back(b);
        continue;
      }
      if (taken + b.pairs.size() <= cut) {
        result.train.brochures.push_back(b);
        taken += b.pairs.size();
        continue;
      }
      // The cut falls inside this brochure; both halves keep its identity.
      size_t head = cut - taken;
      Brochure front{b.id, b.category, {}};
      front.pairs.assign(b.pairs.begin(), b.pairs.begin() + static_cast<ptrdiff_t>(head));
      Brochure back{b.id, b.category, {}};
      back.pairs.assign(b.pairs.begin() + static_cast<ptrdiff_t>(head), b.pairs.end());
      result.train.brochures.push_back(std::move(front));
      result.test.brochures.push_back(std::move(back));
      taken = cut;
    }
  }
  ReassignOrigins(result.train);
  ReassignOrigins(result.test);
  return result;
}

}  // namespace pbmt
