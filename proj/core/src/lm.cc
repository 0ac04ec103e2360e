// lm.cc
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

#include <algorithm>
#include <cmath>

#include "pbmt/error.h"
#include "pbmt/io.h"

namespace pbmt {

namespace {

constexpr const char* kUnkToken = "<unk>";
constexpr const char* kBosToken = "<s>";
constexpr const char* kEosToken = "</s>";
constexpr double kBosLogProb = -99.0;  // conventional placeholder for <s>

}  // namespace

LmVocab::LmVocab() {
  IdOf(kUnkToken);
  IdOf(kBosToken);
  IdOf(kEosToken);
}

uint32_t LmVocab::IdOf(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<uint32_t>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

uint32_t LmVocab::Lookup(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnkId : it->second;
}

uint64_t NGramCounts::TotalEvents(int n) const {
  uint64_t total = 0;
  for (const auto& [key, c] : events[static_cast<size_t>(n) - 1]) total += c;
  return total;
}

NGramCounts CountNgrams(const std::vector<std::vector<std::string>>& sentences,
                        int order) {
  if (order < 1) throw ValidationError("n-gram order must be at least 1");
  NGramCounts counts;
  counts.order = order;
  counts.events.resize(static_cast<size_t>(order));
  for (const auto& sentence : sentences) {
    ++counts.sentence_count;
    NGramKey padded;
    padded.reserve(sentence.size() + 2);
    padded.push_back(LmVocab::kBosId);
    for (const auto& tok : sentence) padded.push_back(counts.vocab.IdOf(tok));
    padded.push_back(LmVocab::kEosId);

    for (int n = 1; n <= order; ++n) {
      size_t un = static_cast<size_t>(n);
      if (padded.size() < un) continue;
      for (size_t end = un; end <= padded.size(); ++end) {
        // A window is an event only if it ends in a predicted token.
        if (padded[end - 1] == LmVocab::kBosId) continue;
        NGramKey key(padded.begin() + static_cast<ptrdiff_t>(end - un),
                     padded.begin() + static_cast<ptrdiff_t>(end));
        ++counts.events[un - 1][key];
      }
    }
  }
  return counts;
}

namespace {

struct ContextStats {
  double total = 0.0;    // sum of adjusted counts over followers
  uint64_t types = 0;    // distinct followers
};

NGramKey PrefixOf(const NGramKey& gram) {
  return NGramKey(gram.begin(), gram.end() - 1);
}

NGramKey SuffixOf(const NGramKey& gram) {
  return NGramKey(gram.begin() + 1, gram.end());
}

}  // namespace

NGramModel EstimateKn(const NGramCounts& counts, const KnDiscount& discount) {
  if (discount.mode == KnDiscount::Mode::kFixed &&
      (discount.fixed <= 0.0 || discount.fixed >= 1.0)) {
    throw ValidationError("Kneser-Ney discount must lie strictly in (0,1)");
  }
  const int order = counts.order;
  bool any = false;
  for (const auto& m : counts.events) any = any || !m.empty();
  if (!any) throw ValidationError("cannot estimate a model from empty counts");

  NGramModel model;
  model.order = order;
  model.vocab = counts.vocab;
  model.log_prob.resize(static_cast<size_t>(order));
  model.backoff.resize(static_cast<size_t>(order) > 0 ? order - 1 : 0);
  model.discounts.resize(static_cast<size_t>(order));

  // Adjusted counts per order: raw at the top, continuation below, except
  // grams starting with <s>, which keep raw counts.
  std::vector<std::map<NGramKey, uint64_t>> adjusted(static_cast<size_t>(order));
  adjusted[static_cast<size_t>(order) - 1] = counts.events[static_cast<size_t>(order) - 1];
  for (int n = order - 1; n >= 1; --n) {
    std::map<NGramKey, uint64_t> cont;
    for (const auto& [gram, c] : adjusted[static_cast<size_t>(n)]) {
      // Distinct map keys sharing a suffix differ in their first token.
      ++cont[SuffixOf(gram)];
    }
    auto& level = adjusted[static_cast<size_t>(n) - 1];
    for (const auto& [gram, c] : counts.events[static_cast<size_t>(n) - 1]) {
      level[gram] = gram.front() == LmVocab::kBosId ? c : cont[gram];
    }
  }

  // Discounts.
  for (int n = 1; n <= order; ++n) {
    if (discount.mode == KnDiscount::Mode::kFixed) {
      model.discounts[static_cast<size_t>(n) - 1] = discount.fixed;
      continue;
    }
    uint64_t n1 = 0;
    uint64_t n2 = 0;
    for (const auto& [gram, a] : adjusted[static_cast<size_t>(n) - 1]) {
      if (a == 1) ++n1;
      if (a == 2) ++n2;
    }
    double d = n1 + 2 * n2 > 0
                   ? static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2)
                   : 0.0;
    if (d <= 0.0 || d >= 1.0) d = 0.75;  // degenerate count-of-counts
    model.discounts[static_cast<size_t>(n) - 1] = d;
  }

  // Unigram level: interpolate with uniform over vocabulary + <unk>.
  {
    const double d1 = model.discounts[0];
    const auto& uni = adjusted[0];
    double total = 0.0;
    for (const auto& [gram, a] : uni) total += static_cast<double>(a);
    double types = static_cast<double>(uni.size());
    double uniform = 1.0 / (types + 1.0);
    double lambda = d1 * types / total;
    for (const auto& [gram, a] : uni) {
      double p = (static_cast<double>(a) - d1) / total + lambda * uniform;
      model.log_prob[0][gram] = std::log10(p);
    }
    model.log_prob[0][{LmVocab::kUnkId}] = std::log10(lambda * uniform);
  }

  // Conditional probability of an observed (n-1)-gram, for interpolation.
  auto stored_prob = [&model](int n, const NGramKey& gram) {
    return std::pow(10.0, model.log_prob[static_cast<size_t>(n) - 1].at(gram));
  };

  for (int n = 2; n <= order; ++n) {
    const double dn = model.discounts[static_cast<size_t>(n) - 1];
    const auto& level = adjusted[static_cast<size_t>(n) - 1];
    std::map<NGramKey, ContextStats> contexts;
    for (const auto& [gram, a] : level) {
      ContextStats& s = contexts[PrefixOf(gram)];
      s.total += static_cast<double>(a);
      s.types += 1;
    }
    for (const auto& [gram, a] : level) {
      const ContextStats& s = contexts.at(PrefixOf(gram));
      double lambda = dn * static_cast<double>(s.types) / s.total;
      double lower = stored_prob(n - 1, SuffixOf(gram));
      double p = (static_cast<double>(a) - dn) / s.total + lambda * lower;
      model.log_prob[static_cast<size_t>(n) - 1][gram] = std::log10(p);
    }
    for (const auto& [ctx, s] : contexts) {
      double lambda = dn * static_cast<double>(s.types) / s.total;
      model.backoff[static_cast<size_t>(n) - 2][ctx] = std::log10(lambda);
    }
  }

  // <s> participates as context only; give it the conventional placeholder
  // probability so it appears in the unigram section.
  if (order >= 2) {
    model.log_prob[0].emplace(NGramKey{LmVocab::kBosId}, kBosLogProb);
  }
  return model;
}

double NGramModel::WordLogProb(const NGramKey& context, uint32_t word) const {
  size_t usable = std::min(context.size(), static_cast<size_t>(order) - 1);
  double accumulated_backoff = 0.0;
  for (size_t n = usable + 1; n >= 1; --n) {
    NGramKey gram(context.end() - static_cast<ptrdiff_t>(n - 1), context.end());
    gram.push_back(word);
    const auto& level = log_prob[n - 1];
    auto it = level.find(gram);
    if (it != level.end()) return accumulated_backoff + it->second;
    if (n >= 2) {
      NGramKey ctx(context.end() - static_cast<ptrdiff_t>(n - 1), context.end());
      const auto& bo = backoff[n - 2];
      auto bit = bo.find(ctx);
      if (bit != bo.end()) accumulated_backoff += bit->second;
    }
  }
  // Unreachable for estimated models: the <unk> unigram always exists.
  return accumulated_backoff + log_prob[0].at({LmVocab::kUnkId});
}

double NGramModel::SentenceLogProb(const std::vector<std::string>& tokens) const {
  NGramKey ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(LmVocab::kBosId);
  for (const auto& tok : tokens) ids.push_back(vocab.Lookup(tok));
  ids.push_back(LmVocab::kEosId);

  double total = 0.0;
  for (size_t t = 1; t < ids.size(); ++t) {
    size_t ctx_begin = t > static_cast<size_t>(order) - 1
                           ? t - (static_cast<size_t>(order) - 1)
                           : 0;
    NGramKey context(ids.begin() + static_cast<ptrdiff_t>(ctx_begin),
                     ids.begin() + static_cast<ptrdiff_t>(t));
    total += WordLogProb(context, ids[t]);
  }
  return total;
}

double NGramModel::Perplexity(
    const std::vector<std::vector<std::string>>& corpus) const {
  double total = 0.0;
  uint64_t tokens = 0;
  for (const auto& sentence : corpus) {
    total += SentenceLogProb(sentence);
    tokens += sentence.size() + 1;  // </s>
  }
  if (tokens == 0) return 0.0;
  return std::pow(10.0, -total / static_cast<double>(tokens));
}

namespace {

std::string GramToText(const NGramKey& gram, const LmVocab& vocab) {
  std::string out;
  for (size_t i = 0; i < gram.size(); ++i) {
    if (i > 0) out += ' ';
    out += vocab.TokenOf(gram[i]);
  }
  return out;
}

}  // namespace

std::string NGramModel::ToArpa() const {
  // Section lines: every gram with a probability or a backoff weight. A
  // context-only gram (just <s> in practice) gets the placeholder prob.
  std::vector<std::vector<std::pair<std::string, std::string>>> rendered(
      static_cast<size_t>(order));

  std::string out = "\\data\\\n";
  for (int n = 1; n <= order; ++n) {
    std::map<std::string, std::pair<double, const double*>> lines;
    for (const auto& [gram, lp] : log_prob[static_cast<size_t>(n) - 1]) {
      lines[GramToText(gram, vocab)] = {lp, nullptr};
    }
    if (n < order) {
      for (const auto& [ctx, bw] : backoff[static_cast<size_t>(n) - 1]) {
        auto [it, inserted] =
            lines.try_emplace(GramToText(ctx, vocab), kBosLogProb, &bw);
        if (!inserted) it->second.second = &bw;
      }
    }
    rendered[static_cast<size_t>(n) - 1].reserve(lines.size());
    for (const auto& [text, pb] : lines) {
      std::string row = FormatFixed(pb.first, 6) + "\t" + text;
      if (pb.second != nullptr) row += "\t" + FormatFixed(*pb.second, 6);
      rendered[static_cast<size_t>(n) - 1].emplace_back(text, std::move(row));
    }
    out += "ngram " + std::to_string(n) + "=" + std::to_string(lines.size()) +
           "\n";
  }
  out += "\n";
  for (int n = 1; n <= order; ++n) {
    out += "\\" + std::to_string(n) + "-grams:\n";
    for (const auto& [text, row] : rendered[static_cast<size_t>(n) - 1]) {
      out += row;
      out += '\n';
    }
    out += "\n";
  }
  out += "\\end\\\n";
  return out;
}

void NGramModel::SaveArpa(const std::string& path) const {
  WriteFileAtomic(path, ToArpa());
}

NGramModel NGramModel::LoadArpa(const std::string& path) {
  std::vector<std::string> lines = ReadLines(path);
  size_t ln = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(path, ln + 1, msg);
  };

  while (ln < lines.size() && lines[ln].empty()) ++ln;
  if (ln >= lines.size() || lines[ln] != "\\data\\") {
    throw fail("expected \\data\\ header");
  }
  ++ln;
  std::vector<size_t> declared;
  while (ln < lines.size() && lines[ln].rfind("ngram ", 0) == 0) {
    size_t eq = lines[ln].find('=');
    if (eq == std::string::npos) throw fail("malformed ngram count line");
    int n = std::stoi(lines[ln].substr(6, eq - 6));
    if (n != static_cast<int>(declared.size()) + 1) {
      throw fail("ngram counts must be declared in order");
    }
    declared.push_back(std::stoul(lines[ln].substr(eq + 1)));
    ++ln;
  }
  if (declared.empty()) throw fail("no ngram counts declared");

  NGramModel model;
  model.order = static_cast<int>(declared.size());
  model.log_prob.resize(declared.size());
  model.backoff.resize(declared.size() - 1);

  for (int n = 1; n <= model.order; ++n) {
    while (ln < lines.size() && lines[ln].empty()) ++ln;
    std::string header = "\\" + std::to_string(n) + "-grams:";
    if (ln >= lines.size() || lines[ln] != header) {
      throw fail("expected section header " + header);
    }
    ++ln;
    size_t rows = 0;
    while (ln < lines.size() && !lines[ln].empty()) {
      const std::string& line = lines[ln];
      size_t t1 = line.find('\t');
      if (t1 == std::string::npos) throw fail("expected prob<TAB>ngram");
      size_t t2 = line.find('\t', t1 + 1);
      double prob = std::stod(line.substr(0, t1));
      std::string text = line.substr(
          t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1);
      NGramKey gram;
      size_t pos = 0;
      while (pos <= text.size()) {
        size_t sp = text.find(' ', pos);
        if (sp == std::string::npos) sp = text.size();
        gram.push_back(model.vocab.IdOf(text.substr(pos, sp - pos)));
        pos = sp + 1;
      }
      if (gram.size() != static_cast<size_t>(n)) {
        throw fail("n-gram arity does not match its section");
      }
      model.log_prob[static_cast<size_t>(n) - 1][gram] = prob;
      if (t2 != std::string::npos) {
        if (n >= model.order) throw fail("backoff weight on the last order");
        model.backoff[static_cast<size_t>(n) - 1][gram] =
            std::stod(line.substr(t2 + 1));
      }
      ++rows;
      ++ln;
    }
    if (rows != declared[static_cast<size_t>(n) - 1]) {
      throw fail("section " + std::to_string(n) + " has " +
                 std::to_string(rows) + " rows, header declared " +
                 std::to_string(declared[static_cast<size_t>(n) - 1]));
    }
  }
  while (ln < lines.size() && lines[ln].empty()) ++ln;
  if (ln >= lines.size() || lines[ln] != "\\end\\") {
    throw fail("expected \\end\\");
  }
  // Context-only grams carry the placeholder probability and no actual
  // event mass; nothing further to reconstruct.
  return model;
}

}  // namespace pbmt
