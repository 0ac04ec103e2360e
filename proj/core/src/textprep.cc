// textprep.cc
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

#include <algorithm>
#include <cmath>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/utf8.h"

namespace pbmt {

namespace {

// OCR of Kurdish text frequently leaves Arabic ya and kaf behind.
constexpr std::pair<char32_t, char32_t> kArabicSubstitutions[] = {
    {U'ي', U'ی'},  // ARABIC YEH -> FARSI/KURDISH YEH
    {U'ك', U'ک'},  // ARABIC KAF -> KEHEH
};

bool IsPeelablePunct(char32_t cp) {
  if (cp < 0x80) {
    return std::ispunct(static_cast<int>(cp)) != 0;
  }
  switch (cp) {
    case U'،':  // Arabic comma
    case U'؛':  // Arabic semicolon
    case U'؟':  // Arabic question mark
    case U'٪':  // Arabic percent sign
    case U'۔':  // Arabic full stop
    case U'«':
    case U'»':
    case U'‘':
    case U'’':
    case U'“':
    case U'”':
    case U'–':
    case U'—':
    case U'…':
      return true;
    default:
      return false;
  }
}

std::string EncodeRange(const std::vector<char32_t>& cps, size_t begin,
                        size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) utf8::Encode(cps[i], out);
  return out;
}

}  // namespace

TokenizedSentence Tokenize(std::string_view line,
                           const TokenizerOptions& options) {
  TokenizedSentence result;
  std::vector<char32_t> cps = utf8::Codepoints(line);
  if (options.map_arabic_variants) {
    for (auto& cp : cps) {
      for (const auto& [from, to] : kArabicSubstitutions) {
        if (cp == from) cp = to;
      }
    }
  }

  size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && utf8::IsAsciiSpace(cps[i])) ++i;
    if (i >= cps.size()) break;
    size_t j = i;
    while (j < cps.size() && !utf8::IsAsciiSpace(cps[j])) ++j;

    // Peel punctuation off both ends; never split a chunk down to nothing.
    size_t lo = i;
    size_t hi = j;
    size_t lead_end = lo;
    while (hi - lead_end > 1 && IsPeelablePunct(cps[lead_end])) ++lead_end;
    size_t trail_begin = hi;
    while (trail_begin - lead_end > 1 && IsPeelablePunct(cps[trail_begin - 1]))
      --trail_begin;

    for (size_t k = lo; k < lead_end; ++k)
      result.tokens.push_back(EncodeRange(cps, k, k + 1));
    result.tokens.push_back(EncodeRange(cps, lead_end, trail_begin));
    for (size_t k = trail_begin; k < hi; ++k)
      result.tokens.push_back(EncodeRange(cps, k, k + 1));
    i = j;
  }
  return result;
}

std::string Detokenize(const TokenizedSentence& sentence) {
  std::string out;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += sentence.tokens[i];
  }
  return out;
}

void TruecaseModel::Add(const std::string& surface, int64_t weight) {
  weights_[surface] += weight;
}

void TruecaseModel::Finalize() {
  best_form_.clear();
  for (const auto& [surface, weight] : weights_) {
    std::string folded = utf8::Fold(surface);
    auto it = best_form_.find(folded);
    if (it == best_form_.end()) {
      best_form_.emplace(std::move(folded), surface);
      continue;
    }
    int64_t incumbent = weights_.at(it->second);
    // Higher weight wins; ties go to the code-point-smallest surface form.
    if (weight > incumbent || (weight == incumbent && surface < it->second)) {
      it->second = surface;
    }
  }
}

const std::string* TruecaseModel::BestForm(const std::string& folded) const {
  auto it = best_form_.find(folded);
  return it == best_form_.end() ? nullptr : &it->second;
}

double TruecaseModel::CountOf(const std::string& surface) const {
  auto it = weights_.find(surface);
  return it == weights_.end() ? 0.0 : static_cast<double>(it->second) / 2.0;
}

std::string TruecaseModel::ToTsv() const {
  std::string out;
  for (const auto& [folded, best] : best_form_) {
    out += folded;
    out += '\t';
    out += best;
    out += '\t';
    out += FormatShort(static_cast<double>(weights_.at(best)) / 2.0);
    out += '\n';
  }
  return out;
}

void TruecaseModel::Save(const std::string& path) const {
  WriteFileAtomic(path, ToTsv());
}

TruecaseModel TruecaseModel::Load(const std::string& path) {
  TruecaseModel model;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos
                                        : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw ParseError(path, i + 1, "expected folded<TAB>best<TAB>count");
    }
    std::string folded = line.substr(0, t1);
    std::string best = line.substr(t1 + 1, t2 - t1 - 1);
    double count = std::stod(line.substr(t2 + 1));
    if (utf8::Fold(best) != folded) {
      throw ParseError(path, i + 1,
                       "best form '" + best + "' does not fold to key");
    }
    model.weights_[best] = static_cast<int64_t>(std::llround(count * 2.0));
    model.best_form_[folded] = best;
  }
  return model;
}

TruecaseModel TrainTruecaser(const std::vector<TokenizedSentence>& corpus) {
  if (corpus.empty()) {
    throw ValidationError("cannot train a truecaser on an empty corpus");
  }
  TruecaseModel model;
  for (const auto& sentence : corpus) {
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      model.Add(sentence.tokens[i], i == 0 ? TruecaseModel::kInitialWeight
                                           : TruecaseModel::kInteriorWeight);
    }
  }
  model.Finalize();
  return model;
}

TokenizedSentence Truecase(const TokenizedSentence& sentence,
                           const TruecaseModel& model) {
  TokenizedSentence out = sentence;
  out.was_truecased = true;
  if (out.tokens.empty()) return out;
  if (const std::string* best = model.BestForm(utf8::Fold(out.tokens[0]))) {
    out.tokens[0] = *best;
  }
  return out;
}

TokenizedSentence Recase(const TokenizedSentence& sentence,
                         const TruecaseModel& model) {
  TokenizedSentence out = sentence;
  out.was_truecased = false;
  if (out.tokens.empty()) return out;
  // Known tokens whose best form already starts uppercase keep it (NASA);
  // everything else gets plain sentence-initial capitalization.
  if (const std::string* best = model.BestForm(utf8::Fold(out.tokens[0]))) {
    if (*best == utf8::UpperFirst(*best)) {
      out.tokens[0] = *best;
      return out;
    }
  }
  out.tokens[0] = utf8::UpperFirst(out.tokens[0]);
  return out;
}

std::pair<ParallelCorpus, CleanReport> CleanPairs(
    const ParallelCorpus& corpus, const CleaningRules& rules,
    const TokenizerOptions& options) {
  if (rules.min_tokens > rules.max_tokens) {
    throw ValidationError("min_tokens exceeds max_tokens");
  }
  ParallelCorpus out;
  out.variant_tag = corpus.variant_tag;
  out.rng_seed = corpus.rng_seed;
  CleanReport report;
  for (const auto& b : corpus.brochures) {
    Brochure kept{b.id, b.category, {}};
    for (const auto& p : b.pairs) {
      size_t src_len = Tokenize(p.source, options).tokens.size();
      size_t tgt_len = Tokenize(p.target, options).tokens.size();
      if (src_len == 0 || tgt_len == 0) {
        ++report.removed_empty;
        continue;
      }
      if (src_len < static_cast<size_t>(rules.min_tokens) ||
          tgt_len < static_cast<size_t>(rules.min_tokens)) {
        ++report.removed_too_short;
        continue;
      }
      if (src_len > static_cast<size_t>(rules.max_tokens) ||
          tgt_len > static_cast<size_t>(rules.max_tokens)) {
        ++report.removed_too_long;
        continue;
      }
      double hi = static_cast<double>(std::max(src_len, tgt_len));
      double lo = static_cast<double>(std::min(src_len, tgt_len));
      if (hi / lo > rules.max_length_ratio) {
        ++report.removed_ratio;
        continue;
      }
      kept.pairs.push_back(p);
    }
    if (!kept.pairs.empty()) out.brochures.push_back(std::move(kept));
  }
  for (auto& brochure : out.brochures) {
    for (size_t i = 0; i < brochure.pairs.size(); ++i) {
      brochure.pairs[i].origin_brochure = brochure.id;
      brochure.pairs[i].origin_line = i;
    }
  }
  return {std::move(out), report};
}

}  // namespace pbmt
