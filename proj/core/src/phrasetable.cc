// phrasetable.cc
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

#include "pbmt/phrasetable.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pbmt/error.h"
#include "pbmt/io.h"

namespace pbmt {

std::vector<ExtractedSpan> ExtractPhrases(const AlignmentMatrix& alignment,
                                          size_t max_len) {
  std::vector<ExtractedSpan> out;
  const size_t n = alignment.src_len;
  const size_t m = alignment.tgt_len;
  std::vector<bool> tgt_aligned(m, false);
  for (const auto& [i, j] : alignment.links) tgt_aligned[j] = true;

  for (size_t s_begin = 0; s_begin < n; ++s_begin) {
    for (size_t s_end = s_begin + 1; s_end <= std::min(n, s_begin + max_len);
         ++s_end) {
      // Target window spanned by links out of [s_begin, s_end).
      size_t t_min = m;
      size_t t_max = 0;
      bool any = false;
      for (const auto& [i, j] : alignment.links) {
        if (i >= s_begin && i < s_end) {
          t_min = any ? std::min(t_min, static_cast<size_t>(j)) : j;
          t_max = any ? std::max(t_max, static_cast<size_t>(j)) : j;
          any = true;
        }
      }
      if (!any) continue;
      bool consistent = true;
      for (const auto& [i, j] : alignment.links) {
        if (j >= t_min && j <= t_max && (i < s_begin || i >= s_end)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;

      // Grow over unaligned boundary words on the target side.
      size_t ts = t_min;
      for (;;) {
        size_t te = t_max;
        for (;;) {
          if (te - ts + 1 <= max_len) {
            out.push_back({static_cast<uint32_t>(s_begin),
                           static_cast<uint32_t>(s_end),
                           static_cast<uint32_t>(ts),
                           static_cast<uint32_t>(te + 1)});
          }
          if (te + 1 >= m || tgt_aligned[te + 1]) break;
          ++te;
        }
        if (ts == 0 || tgt_aligned[ts - 1]) break;
        --ts;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<PhraseEntry>* PhraseTable::Lookup(
    const std::vector<std::string>& src) const {
  auto it = entries.find(src);
  return it == entries.end() ? nullptr : &it->second;
}

size_t PhraseTable::EntryCount() const {
  size_t n = 0;
  for (const auto& [src, list] : entries) n += list.size();
  return n;
}

namespace {

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> SplitTokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string Format6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string PhraseTable::ToText() const {
  std::string out;
  for (const auto& [src, list] : entries) {
    for (const auto& entry : list) {
      out += JoinTokens(src);
      out += " ||| ";
      out += JoinTokens(entry.tgt);
      out += " ||| ";
      out += Format6(entry.phi_fwd);
      out += ' ';
      out += Format6(entry.lex_fwd);
      out += ' ';
      out += Format6(entry.phi_bwd);
      out += ' ';
      out += Format6(entry.lex_bwd);
      out += '\n';
    }
  }
  return out;
}

void PhraseTable::Save(const std::string& path) const {
  WriteFileAtomic(path, ToText());
}

PhraseTable PhraseTable::Load(const std::string& path) {
  PhraseTable table;
  size_t longest = 1;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty()) continue;
    size_t sep1 = line.find(" ||| ");
    size_t sep2 = sep1 == std::string::npos
                      ? std::string::npos
                      : line.find(" ||| ", sep1 + 5);
    if (sep2 == std::string::npos) {
      throw ParseError(path, ln + 1, "expected src ||| tgt ||| features");
    }
    std::vector<std::string> src = SplitTokens(line.substr(0, sep1));
    PhraseEntry entry;
    entry.tgt = SplitTokens(line.substr(sep1 + 5, sep2 - sep1 - 5));
    std::vector<std::string> feats = SplitTokens(line.substr(sep2 + 5));
    if (feats.size() != 4) {
      throw ParseError(path, ln + 1,
                       "expected 4 feature values, found " +
                           std::to_string(feats.size()));
    }
    if (src.empty() || entry.tgt.empty()) {
      throw ParseError(path, ln + 1, "phrase sides must be non-empty");
    }
    entry.phi_fwd = std::stod(feats[0]);
    entry.lex_fwd = std::stod(feats[1]);
    entry.phi_bwd = std::stod(feats[2]);
    entry.lex_bwd = std::stod(feats[3]);
    longest = std::max({longest, src.size(), entry.tgt.size()});
    table.entries[src].push_back(std::move(entry));
  }
  for (auto& [src, list] : table.entries) {
    std::sort(list.begin(), list.end(),
              [](const PhraseEntry& a, const PhraseEntry& b) {
                return a.tgt < b.tgt;
              });
  }
  table.max_len = std::max<size_t>(longest, 7);
  return table;
}

PhraseTable BuildTable(const std::vector<TokenPair>& corpus,
                       const std::vector<AlignmentMatrix>& alignments,
                       const TranslationTable& fwd_lex,
                       const TranslationTable& bwd_lex, size_t max_len) {
  if (corpus.size() != alignments.size()) {
    throw ValidationError("corpus and alignment counts differ");
  }

  struct Accum {
    uint64_t count = 0;
    double lex_fwd = 0.0;
    double lex_bwd = 0.0;
  };
  std::map<std::pair<std::vector<std::string>, std::vector<std::string>>, Accum>
      acc;
  std::map<std::vector<std::string>, uint64_t> src_count;
  std::map<std::vector<std::string>, uint64_t> tgt_count;

  constexpr double kLexFloor = 1e-12;

  for (size_t k = 0; k < corpus.size(); ++k) {
    const TokenPair& pair = corpus[k];
    const AlignmentMatrix& alignment = alignments[k];
    if (alignment.src_len != pair.src.size() ||
        alignment.tgt_len != pair.tgt.size()) {
      throw ValidationError("alignment dimensions do not match pair " +
                            std::to_string(k));
    }
    for (const ExtractedSpan& span : ExtractPhrases(alignment, max_len)) {
      std::vector<std::string> src(pair.src.begin() + span.src_begin,
                                   pair.src.begin() + span.src_end);
      std::vector<std::string> tgt(pair.tgt.begin() + span.tgt_begin,
                                   pair.tgt.begin() + span.tgt_end);

      // Lexical weights under this occurrence's internal alignment.
      double lex_fwd = 1.0;
      for (uint32_t j = span.tgt_begin; j < span.tgt_end; ++j) {
        double best = -1.0;
        for (const auto& [li, lj] : alignment.links) {
          if (lj == j && li >= span.src_begin && li < span.src_end) {
            best = std::max(best, fwd_lex.ProbTokens(pair.src[li], pair.tgt[j]));
          }
        }
        if (best < 0.0) {
          auto f = fwd_lex.pred_vocab.Find(pair.tgt[j]);
          best = f ? fwd_lex.Prob(TranslationTable::kNullId, *f) : 0.0;
        }
        lex_fwd *= std::max(best, kLexFloor);
      }
      double lex_bwd = 1.0;
      for (uint32_t i = span.src_begin; i < span.src_end; ++i) {
        double best = -1.0;
        for (const auto& [li, lj] : alignment.links) {
          if (li == i && lj >= span.tgt_begin && lj < span.tgt_end) {
            best = std::max(best, bwd_lex.ProbTokens(pair.tgt[lj], pair.src[i]));
          }
        }
        if (best < 0.0) {
          auto f = bwd_lex.pred_vocab.Find(pair.src[i]);
          best = f ? bwd_lex.Prob(TranslationTable::kNullId, *f) : 0.0;
        }
        lex_bwd *= std::max(best, kLexFloor);
      }

      Accum& a = acc[{src, tgt}];
      a.count += 1;
      a.lex_fwd = std::max(a.lex_fwd, lex_fwd);
      a.lex_bwd = std::max(a.lex_bwd, lex_bwd);
      src_count[src] += 1;
      tgt_count[tgt] += 1;
    }
  }

  PhraseTable table;
  table.max_len = max_len;
  for (const auto& [key, a] : acc) {
    const auto& [src, tgt] = key;
    PhraseEntry entry;
    entry.tgt = tgt;
    entry.phi_fwd = static_cast<double>(a.count) /
                    static_cast<double>(src_count.at(src));
    entry.phi_bwd = static_cast<double>(a.count) /
                    static_cast<double>(tgt_count.at(tgt));
    entry.lex_fwd = a.lex_fwd;
    entry.lex_bwd = a.lex_bwd;
    table.entries[src].push_back(std::move(entry));
  }
  // acc is ordered by (src, tgt), so per-source lists are already sorted.
  return table;
}

}  // namespace pbmt
