// salign.cc
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

#include "pbmt/salign.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/utf8.h"
#include "pbmt/xml.h"

namespace pbmt {

namespace {

// Classic bead priors; 1-1 dominates, expansions and contractions are rare.
double BeadPrior(BeadKind kind) {
  switch (kind) {
    case BeadKind::k11:
      return 0.89;
    case BeadKind::k01:
    case BeadKind::k10:
      return 0.0099;
    case BeadKind::k12:
    case BeadKind::k21:
      return 0.089;
    case BeadKind::k22:
      return 0.011;
  }
  return 0.0;
}

// Tie preference: 1-1 first, then enumeration order.
constexpr BeadKind kSearchOrder[] = {BeadKind::k11, BeadKind::k01,
                                     BeadKind::k10, BeadKind::k12,
                                     BeadKind::k21, BeadKind::k22};

constexpr double kBigCost = 1e4;

BeadKind KindFor(size_t src_count, size_t tgt_count) {
  if (src_count == 0 && tgt_count == 1) return BeadKind::k01;
  if (src_count == 1 && tgt_count == 0) return BeadKind::k10;
  if (src_count == 1 && tgt_count == 1) return BeadKind::k11;
  if (src_count == 1 && tgt_count == 2) return BeadKind::k12;
  if (src_count == 2 && tgt_count == 1) return BeadKind::k21;
  if (src_count == 2 && tgt_count == 2) return BeadKind::k22;
  throw ValidationError("no bead kind covers " + std::to_string(src_count) +
                        "-" + std::to_string(tgt_count));
}

size_t SpanChars(const SegmentedDocument& doc, size_t begin, size_t end) {
  size_t total = 0;
  for (size_t i = begin; i < end; ++i) total += doc.lengths[i];
  return total;
}

std::string SpanText(const SegmentedDocument& doc, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += doc.sentences[i];
  }
  return out;
}

Bead MakeBead(size_t src_begin, size_t src_end, size_t tgt_begin,
              size_t tgt_end, const SegmentedDocument& src,
              const SegmentedDocument& tgt, const GaleChurchParams& params) {
  Bead bead;
  bead.kind = KindFor(src_end - src_begin, tgt_end - tgt_begin);
  bead.src_begin = src_begin;
  bead.src_end = src_end;
  bead.tgt_begin = tgt_begin;
  bead.tgt_end = tgt_end;
  bead.cost = BeadCost(SpanChars(src, src_begin, src_end),
                       SpanChars(tgt, tgt_begin, tgt_end), bead.kind, params);
  return bead;
}

}  // namespace

SegmentedDocument SegmentedDocument::FromSentences(
    std::vector<std::string> sentences) {
  SegmentedDocument doc;
  doc.lengths.reserve(sentences.size());
  for (const auto& s : sentences) doc.lengths.push_back(utf8::CharCount(s));
  doc.sentences = std::move(sentences);
  return doc;
}

SegmentedDocument Segment(const std::string& text) {
  std::vector<char32_t> cps = utf8::Codepoints(text);
  std::vector<std::string> sentences;
  std::string current;
  auto flush = [&]() {
    // Trim surrounding ASCII whitespace.
    size_t b = current.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
      current.clear();
      return;
    }
    size_t e = current.find_last_not_of(" \t\r\n");
    sentences.push_back(current.substr(b, e - b + 1));
    current.clear();
  };
  for (size_t i = 0; i < cps.size(); ++i) {
    utf8::Encode(cps[i], current);
    bool terminator = cps[i] == U'.' || cps[i] == U'!' || cps[i] == U'?' ||
                      cps[i] == U'؟';
    if (terminator &&
        (i + 1 == cps.size() || utf8::IsAsciiSpace(cps[i + 1]))) {
      flush();
    }
  }
  flush();
  return SegmentedDocument::FromSentences(std::move(sentences));
}

size_t BeadSrcCount(BeadKind kind) {
  switch (kind) {
    case BeadKind::k01:
      return 0;
    case BeadKind::k10:
    case BeadKind::k11:
    case BeadKind::k12:
      return 1;
    case BeadKind::k21:
    case BeadKind::k22:
      return 2;
  }
  return 0;
}

size_t BeadTgtCount(BeadKind kind) {
  switch (kind) {
    case BeadKind::k10:
      return 0;
    case BeadKind::k01:
    case BeadKind::k11:
    case BeadKind::k21:
      return 1;
    case BeadKind::k12:
    case BeadKind::k22:
      return 2;
  }
  return 0;
}

void AlignmentResult::CheckCoverage(size_t src_size, size_t tgt_size) const {
  size_t s = 0;
  size_t t = 0;
  for (const auto& bead : beads) {
    if (bead.src_begin != s || bead.tgt_begin != t ||
        bead.src_end < bead.src_begin || bead.tgt_end < bead.tgt_begin ||
        bead.src_end - bead.src_begin != BeadSrcCount(bead.kind) ||
        bead.tgt_end - bead.tgt_begin != BeadTgtCount(bead.kind)) {
      throw ValidationError("bead sequence is not contiguous");
    }
    s = bead.src_end;
    t = bead.tgt_end;
  }
  if (s != src_size || t != tgt_size) {
    throw ValidationError("beads do not cover both documents exactly");
  }
}

double BeadCost(size_t src_chars, size_t tgt_chars, BeadKind kind,
                const GaleChurchParams& params) {
  double prior_cost = -std::log(BeadPrior(kind));
  double ls = static_cast<double>(src_chars);
  double lt = static_cast<double>(tgt_chars);
  if (src_chars == 0 && tgt_chars == 0) return prior_cost;

  // Target length is modeled as normal around mean_ratio * source length
  // with variance proportional to the mean length.
  double c = params.mean_ratio;
  double mean = (ls + lt / c) / 2.0;
  double delta = (c * ls - lt) / std::sqrt(params.variance * mean);
  // Two-sided tail probability 2*(1 - Phi(|delta|)) = erfc(|delta|/sqrt(2)).
  double tail = std::erfc(std::fabs(delta) / std::sqrt(2.0));
  double length_cost =
      tail > 0.0 ? -std::log(tail) : kBigCost;
  return std::min(length_cost, kBigCost) + prior_cost;
}

AlignmentResult GaleChurchAlign(const SegmentedDocument& src,
                                const SegmentedDocument& tgt,
                                const GaleChurchParams& params) {
  if (src.size() == 0 || tgt.size() == 0) {
    throw ValidationError("cannot align empty documents");
  }
  const size_t n = src.size();
  const size_t m = tgt.size();
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> best((n + 1) * (m + 1), kInf);
  std::vector<int8_t> back((n + 1) * (m + 1), -1);
  auto idx = [m](size_t i, size_t j) { return i * (m + 1) + j; };
  best[idx(0, 0)] = 0.0;

  for (size_t i = 0; i <= n; ++i) {
    for (size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      double cell_best = kInf;
      int8_t cell_back = -1;
      for (int8_t k = 0; k < 6; ++k) {
        BeadKind kind = kSearchOrder[k];
        size_t ds = BeadSrcCount(kind);
        size_t dt = BeadTgtCount(kind);
        if (ds > i || dt > j) continue;
        double prev = best[idx(i - ds, j - dt)];
        if (prev == kInf) continue;
        double cost = prev + BeadCost(SpanChars(src, i - ds, i),
                                      SpanChars(tgt, j - dt, j), kind, params);
        if (cost < cell_best) {
          cell_best = cost;
          cell_back = k;
        }
      }
      best[idx(i, j)] = cell_best;
      back[idx(i, j)] = cell_back;
    }
  }

  AlignmentResult result;
  result.total_cost = best[idx(n, m)];
  size_t i = n;
  size_t j = m;
  while (i > 0 || j > 0) {
    BeadKind kind = kSearchOrder[back[idx(i, j)]];
    size_t ds = BeadSrcCount(kind);
    size_t dt = BeadTgtCount(kind);
    result.beads.push_back(
        MakeBead(i - ds, i, j - dt, j, src, tgt, params));
    i -= ds;
    j -= dt;
  }
  std::reverse(result.beads.begin(), result.beads.end());
  return result;
}

AlignmentResult ApplyEdit(const AlignmentResult& result, const BeadEdit& edit,
                          const SegmentedDocument& src,
                          const SegmentedDocument& tgt,
                          const GaleChurchParams& params) {
  if (edit.bead_index >= result.beads.size()) {
    throw ValidationError("bead index out of range");
  }
  AlignmentResult out;
  out.beads = result.beads;
  const size_t i = edit.bead_index;

  switch (edit.kind) {
    case BeadEdit::Kind::kMerge: {
      if (i + 1 >= out.beads.size()) {
        throw ValidationError("merge requires a following bead");
      }
      const Bead& a = out.beads[i];
      const Bead& b = out.beads[i + 1];
      Bead merged = MakeBead(a.src_begin, b.src_end, a.tgt_begin, b.tgt_end,
                             src, tgt, params);
      out.beads[i] = merged;
      out.beads.erase(out.beads.begin() + static_cast<ptrdiff_t>(i) + 1);
      break;
    }
    case BeadEdit::Kind::kSplit: {
      const Bead b = out.beads[i];
      size_t src_count = b.src_end - b.src_begin;
      size_t tgt_count = b.tgt_end - b.tgt_begin;
      if (edit.split_src > src_count || edit.split_tgt > tgt_count) {
        throw ValidationError("split offsets exceed bead spans");
      }
      Bead first = MakeBead(b.src_begin, b.src_begin + edit.split_src,
                            b.tgt_begin, b.tgt_begin + edit.split_tgt, src,
                            tgt, params);
      Bead second = MakeBead(b.src_begin + edit.split_src, b.src_end,
                             b.tgt_begin + edit.split_tgt, b.tgt_end, src,
                             tgt, params);
      out.beads[i] = first;
      out.beads.insert(out.beads.begin() + static_cast<ptrdiff_t>(i) + 1,
                       second);
      break;
    }
    case BeadEdit::Kind::kShift: {
      if (i + 1 >= out.beads.size()) {
        throw ValidationError("shift on the last bead has nowhere to go");
      }
      Bead a = out.beads[i];
      Bead b = out.beads[i + 1];
      auto move_boundary = [&](size_t& a_end, size_t& b_begin, size_t a_begin,
                               size_t b_end) {
        int64_t boundary = static_cast<int64_t>(a_end) - edit.shift;
        if (boundary < static_cast<int64_t>(a_begin) ||
            boundary > static_cast<int64_t>(b_end)) {
          throw ValidationError("shift moves the boundary out of range");
        }
        a_end = static_cast<size_t>(boundary);
        b_begin = static_cast<size_t>(boundary);
      };
      if (edit.shift_src_side) {
        move_boundary(a.src_end, b.src_begin, a.src_begin, b.src_end);
      } else {
        move_boundary(a.tgt_end, b.tgt_begin, a.tgt_begin, b.tgt_end);
      }
      out.beads[i] = MakeBead(a.src_begin, a.src_end, a.tgt_begin, a.tgt_end,
                              src, tgt, params);
      out.beads[i + 1] = MakeBead(b.src_begin, b.src_end, b.tgt_begin,
                                  b.tgt_end, src, tgt, params);
      break;
    }
  }

  out.total_cost = 0.0;
  for (const auto& bead : out.beads) out.total_cost += bead.cost;
  out.CheckCoverage(src.size(), tgt.size());
  return out;
}

void ExportPlaintextPair(const AlignmentResult& result,
                         const SegmentedDocument& src,
                         const SegmentedDocument& tgt,
                         const std::string& src_path,
                         const std::string& tgt_path) {
  std::vector<std::string> src_lines, tgt_lines;
  for (const auto& bead : result.beads) {
    if (bead.kind == BeadKind::k01 || bead.kind == BeadKind::k10) continue;
    src_lines.push_back(SpanText(src, bead.src_begin, bead.src_end));
    tgt_lines.push_back(SpanText(tgt, bead.tgt_begin, bead.tgt_end));
  }
  WriteLinesAtomic(src_path, src_lines);
  WriteLinesAtomic(tgt_path, tgt_lines);
}

void ExportXml(const AlignmentResult& result, const SegmentedDocument& src,
               const SegmentedDocument& tgt, const std::string& path) {
  std::string out = "<corpus>\n<brochure id=\"aligned\">\n";
  for (const auto& bead : result.beads) {
    out += "<pair><src>" +
           xml::Escape(SpanText(src, bead.src_begin, bead.src_end)) +
           "</src><tgt>" +
           xml::Escape(SpanText(tgt, bead.tgt_begin, bead.tgt_end)) +
           "</tgt></pair>\n";
  }
  out += "</brochure>\n</corpus>\n";
  WriteFileAtomic(path, out);
}

void ExportTmx(const AlignmentResult& result, const SegmentedDocument& src,
               const SegmentedDocument& tgt, const std::string& path,
               const std::string& src_lang, const std::string& tgt_lang) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<tmx version=\"1.4\">\n"
      "<header creationtool=\"pbmt\" segtype=\"sentence\" "
      "adminlang=\"en\" srclang=\"" +
      xml::Escape(src_lang) + "\" datatype=\"plaintext\"/>\n<body>\n";
  for (const auto& bead : result.beads) {
    out += "<tu>\n<tuv xml:lang=\"" + xml::Escape(src_lang) + "\"><seg>" +
           xml::Escape(SpanText(src, bead.src_begin, bead.src_end)) +
           "</seg></tuv>\n<tuv xml:lang=\"" + xml::Escape(tgt_lang) +
           "\"><seg>" +
           xml::Escape(SpanText(tgt, bead.tgt_begin, bead.tgt_end)) +
           "</seg></tuv>\n</tu>\n";
  }
  out += "</body>\n</tmx>\n";
  WriteFileAtomic(path, out);
}

}  // namespace pbmt
