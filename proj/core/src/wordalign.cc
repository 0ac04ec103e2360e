// wordalign.cc
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

#include <algorithm>
#include <cmath>
#include <thread>

#include "pbmt/error.h"
#include "pbmt/io.h"

namespace pbmt {

uint32_t VocabIndex::IdOf(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<uint32_t>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<uint32_t> VocabIndex::Find(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

double TranslationTable::Prob(uint32_t cond_id, uint32_t pred_id) const {
  if (cond_id >= rows.size()) return 0.0;
  auto it = rows[cond_id].find(pred_id);
  return it == rows[cond_id].end() ? 0.0 : it->second;
}

double TranslationTable::ProbTokens(const std::string& cond,
                                    const std::string& pred) const {
  auto e = cond_vocab.Find(cond);
  auto f = pred_vocab.Find(pred);
  if (!e || !f) return 0.0;
  return Prob(*e, *f);
}

double TranslationTable::RowSum(uint32_t cond_id) const {
  double sum = 0.0;
  for (const auto& [f, p] : rows[cond_id]) sum += p;
  return sum;
}

std::string TranslationTable::ToTsv() const {
  // Sort rows by conditioning token so output is stable across runs.
  std::vector<uint32_t> order(rows.size());
  for (uint32_t e = 0; e < rows.size(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [this](uint32_t a, uint32_t b) {
    return cond_vocab.TokenOf(a) < cond_vocab.TokenOf(b);
  });
  std::string out;
  for (uint32_t e : order) {
    std::vector<std::pair<uint32_t, double>> entries(rows[e].begin(),
                                                     rows[e].end());
    std::sort(entries.begin(), entries.end(),
              [this](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return pred_vocab.TokenOf(a.first) < pred_vocab.TokenOf(b.first);
              });
    for (const auto& [f, p] : entries) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12g", p);
      out += cond_vocab.TokenOf(e);
      out += '\t';
      out += pred_vocab.TokenOf(f);
      out += '\t';
      out += buf;
      out += '\n';
    }
  }
  return out;
}

void TranslationTable::Save(const std::string& path) const {
  WriteFileAtomic(path, ToTsv());
}

TranslationTable TranslationTable::Load(const std::string& path,
                                        Direction direction) {
  TranslationTable table;
  table.direction = direction;
  table.cond_vocab.IdOf(kNullToken);
  table.rows.emplace_back();
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    size_t t1 = lines[i].find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos
                                        : lines[i].find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw ParseError(path, i + 1, "expected cond<TAB>pred<TAB>prob");
    }
    uint32_t e = table.cond_vocab.IdOf(lines[i].substr(0, t1));
    uint32_t f = table.pred_vocab.IdOf(lines[i].substr(t1 + 1, t2 - t1 - 1));
    double p = std::stod(lines[i].substr(t2 + 1));
    if (table.rows.size() <= e) table.rows.resize(e + 1);
    table.rows[e][f] = p;
  }
  return table;
}

namespace {

struct IdPair {
  std::vector<uint32_t> cond;  // without NULL; NULL is implicit
  std::vector<uint32_t> pred;
};

struct ChunkAccumulator {
  std::vector<std::map<uint32_t, double>> counts;
  double log_likelihood = 0.0;
};

void AccumulateChunk(const std::vector<IdPair>& pairs, size_t begin,
                     size_t end,
                     const std::vector<std::map<uint32_t, double>>& t,
                     ChunkAccumulator& acc) {
  for (size_t n = begin; n < end; ++n) {
    const IdPair& pair = pairs[n];
    const double len_term =
        std::log(static_cast<double>(pair.cond.size()) + 1.0);
    for (uint32_t f : pair.pred) {
      double denom = 0.0;
      auto prob = [&](uint32_t e) {
        auto it = t[e].find(f);
        return it == t[e].end() ? 0.0 : it->second;
      };
      denom += prob(TranslationTable::kNullId);
      for (uint32_t e : pair.cond) denom += prob(e);
      acc.log_likelihood += std::log(denom) - len_term;
      double inv = 1.0 / denom;
      acc.counts[TranslationTable::kNullId][f] +=
          prob(TranslationTable::kNullId) * inv;
      for (uint32_t e : pair.cond) acc.counts[e][f] += prob(e) * inv;
    }
  }
}

}  // namespace

Ibm1TrainResult TrainIbm1(const std::vector<TokenPair>& corpus,
                          const EmConfig& config, Direction direction) {
  if (corpus.empty()) {
    throw ValidationError("cannot train IBM Model 1 on an empty corpus");
  }
  if (config.iterations < 1) {
    throw ValidationError("EM requires at least one iteration");
  }

  Ibm1TrainResult result;
  TranslationTable& table = result.table;
  table.direction = direction;
  table.cond_vocab.IdOf(TranslationTable::kNullToken);

  const bool swap = direction == Direction::kTgtToSrc;
  std::vector<IdPair> pairs;
  pairs.reserve(corpus.size());
  for (const auto& tp : corpus) {
    const auto& cond_tokens = swap ? tp.tgt : tp.src;
    const auto& pred_tokens = swap ? tp.src : tp.tgt;
    IdPair ids;
    ids.cond.reserve(cond_tokens.size());
    ids.pred.reserve(pred_tokens.size());
    for (const auto& tok : cond_tokens) ids.cond.push_back(table.cond_vocab.IdOf(tok));
    for (const auto& tok : pred_tokens) ids.pred.push_back(table.pred_vocab.IdOf(tok));
    pairs.push_back(std::move(ids));
  }

  const size_t cond_size = table.cond_vocab.size();
  const double uniform = 1.0 / static_cast<double>(table.pred_vocab.size());

  // Uniform initialization over co-occurring pairs; NULL co-occurs with all.
  table.rows.assign(cond_size, {});
  for (const auto& pair : pairs) {
    for (uint32_t f : pair.pred) {
      table.rows[TranslationTable::kNullId][f] = uniform;
      for (uint32_t e : pair.cond) table.rows[e][f] = uniform;
    }
  }

  const int jobs = std::max(1, config.jobs);
  for (int iter = 0; iter < config.iterations; ++iter) {
    std::vector<ChunkAccumulator> chunks(static_cast<size_t>(jobs));
    for (auto& c : chunks) c.counts.assign(cond_size, {});

    if (jobs == 1) {
      AccumulateChunk(pairs, 0, pairs.size(), table.rows, chunks[0]);
    } else {
      // Fixed contiguous chunks; merge order below is what makes the
      // reduction deterministic at a given worker count.
      std::vector<std::thread> workers;
      size_t per = (pairs.size() + static_cast<size_t>(jobs) - 1) /
                   static_cast<size_t>(jobs);
      for (int w = 0; w < jobs; ++w) {
        size_t begin = std::min(pairs.size(), static_cast<size_t>(w) * per);
        size_t end = std::min(pairs.size(), begin + per);
        workers.emplace_back(AccumulateChunk, std::cref(pairs), begin, end,
                             std::cref(table.rows), std::ref(chunks[static_cast<size_t>(w)]));
      }
      for (auto& t : workers) t.join();
    }

    double log_likelihood = 0.0;
    std::vector<std::map<uint32_t, double>> counts(cond_size);
    for (const auto& chunk : chunks) {
      log_likelihood += chunk.log_likelihood;
      for (size_t e = 0; e < cond_size; ++e) {
        for (const auto& [f, c] : chunk.counts[e]) counts[e][f] += c;
      }
    }
    result.log_likelihood.push_back(log_likelihood);

    // M-step: renormalize each row, flooring probabilities first so no
    // translation is locked out permanently.
    for (size_t e = 0; e < cond_size; ++e) {
      double total = 0.0;
      for (const auto& [f, c] : counts[e]) total += c;
      if (total <= 0.0) continue;
      std::map<uint32_t, double> row;
      double floored_total = 0.0;
      for (const auto& [f, c] : counts[e]) {
        double p = std::max(c / total, config.min_prob_floor);
        row[f] = p;
        floored_total += p;
      }
      for (auto& [f, p] : row) p /= floored_total;
      table.rows[e] = std::move(row);
    }

    if (iter > 0) {
      double prev = result.log_likelihood[static_cast<size_t>(iter) - 1];
      double change = std::fabs(log_likelihood - prev);
      if (change / std::max(1.0, std::fabs(prev)) < config.convergence_epsilon) {
        break;
      }
    }
  }
  return result;
}

void AlignmentMatrix::Add(uint32_t i, uint32_t j) {
  auto link = std::make_pair(i, j);
  auto it = std::lower_bound(links.begin(), links.end(), link);
  if (it == links.end() || *it != link) links.insert(it, link);
}

bool AlignmentMatrix::Has(uint32_t i, uint32_t j) const {
  return std::binary_search(links.begin(), links.end(), std::make_pair(i, j));
}

AlignmentMatrix AlignmentMatrix::Transposed() const {
  AlignmentMatrix out;
  out.src_len = tgt_len;
  out.tgt_len = src_len;
  out.links.reserve(links.size());
  for (const auto& [i, j] : links) out.links.emplace_back(j, i);
  std::sort(out.links.begin(), out.links.end());
  return out;
}

AlignmentMatrix ViterbiAlign(const TokenPair& pair,
                             const TranslationTable& table) {
  const bool swap = table.direction == Direction::kTgtToSrc;
  const auto& cond_tokens = swap ? pair.tgt : pair.src;
  const auto& pred_tokens = swap ? pair.src : pair.tgt;

  AlignmentMatrix matrix;
  matrix.src_len = cond_tokens.size();
  matrix.tgt_len = pred_tokens.size();

  std::vector<uint32_t> cond_ids;
  cond_ids.reserve(cond_tokens.size());
  for (const auto& tok : cond_tokens) {
    auto id = table.cond_vocab.Find(tok);
    cond_ids.push_back(id ? *id : UINT32_MAX);
  }

  for (size_t j = 0; j < pred_tokens.size(); ++j) {
    auto f = table.pred_vocab.Find(pred_tokens[j]);
    if (!f) continue;  // nothing known about this word, leave unlinked
    double best = 0.0;
    size_t best_i = SIZE_MAX;
    for (size_t i = 0; i < cond_ids.size(); ++i) {
      if (cond_ids[i] == UINT32_MAX) continue;
      double p = table.Prob(cond_ids[i], *f);
      if (p > best) {
        best = p;
        best_i = i;
      }
    }
    double null_prob = table.Prob(TranslationTable::kNullId, *f);
    // NULL must strictly beat every real word to leave the position
    // unlinked; and a link needs actual evidence.
    if (best_i == SIZE_MAX || null_prob > best || best <= 0.0) continue;
    matrix.Add(static_cast<uint32_t>(best_i), static_cast<uint32_t>(j));
  }
  return matrix;
}

AlignmentMatrix Symmetrize(const AlignmentMatrix& forward,
                           const AlignmentMatrix& backward,
                           SymmetrizationHeuristic heuristic) {
  if (forward.src_len != backward.tgt_len ||
      forward.tgt_len != backward.src_len) {
    throw ValidationError(
        "alignment dimensions disagree: forward " +
        std::to_string(forward.src_len) + "x" + std::to_string(forward.tgt_len) +
        " vs backward " + std::to_string(backward.src_len) + "x" +
        std::to_string(backward.tgt_len));
  }
  const AlignmentMatrix flipped = backward.Transposed();

  AlignmentMatrix result;
  result.src_len = forward.src_len;
  result.tgt_len = forward.tgt_len;

  if (heuristic == SymmetrizationHeuristic::kUnion) {
    for (const auto& [i, j] : forward.links) result.Add(i, j);
    for (const auto& [i, j] : flipped.links) result.Add(i, j);
    return result;
  }

  for (const auto& [i, j] : forward.links) {
    if (flipped.Has(i, j)) result.Add(i, j);
  }
  if (heuristic == SymmetrizationHeuristic::kIntersection) return result;

  // grow-diag-final-and, starting from the intersection.
  AlignmentMatrix uni;
  uni.src_len = result.src_len;
  uni.tgt_len = result.tgt_len;
  for (const auto& [i, j] : forward.links) uni.Add(i, j);
  for (const auto& [i, j] : flipped.links) uni.Add(i, j);

  std::vector<bool> src_covered(result.src_len, false);
  std::vector<bool> tgt_covered(result.tgt_len, false);
  for (const auto& [i, j] : result.links) {
    src_covered[i] = true;
    tgt_covered[j] = true;
  }

  static constexpr int kNeighbors[8][2] = {{-1, 0}, {0, -1}, {1, 0}, {0, 1},
                                           {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  bool changed = true;
  while (changed) {
    changed = false;
    // Snapshot: growth sweeps over the links present at sweep start.
    auto snapshot = result.links;
    for (const auto& [i, j] : snapshot) {
      for (const auto& d : kNeighbors) {
        int64_t ni = static_cast<int64_t>(i) + d[0];
        int64_t nj = static_cast<int64_t>(j) + d[1];
        if (ni < 0 || nj < 0 || ni >= static_cast<int64_t>(result.src_len) ||
            nj >= static_cast<int64_t>(result.tgt_len)) {
          continue;
        }
        uint32_t ui = static_cast<uint32_t>(ni);
        uint32_t uj = static_cast<uint32_t>(nj);
        if (result.Has(ui, uj)) continue;
        if (!uni.Has(ui, uj)) continue;
        if (src_covered[ui] && tgt_covered[uj]) continue;
        result.Add(ui, uj);
        src_covered[ui] = true;
        tgt_covered[uj] = true;
        changed = true;
      }
    }
  }

  // final-and: links from either direction whose endpoints are both still
  // free, forward first.
  for (const AlignmentMatrix* side : {&forward, &flipped}) {
    for (const auto& [i, j] : side->links) {
      if (!src_covered[i] && !tgt_covered[j]) {
        result.Add(i, j);
        src_covered[i] = true;
        tgt_covered[j] = true;
      }
    }
  }
  return result;
}

void SaveAlignments(const std::vector<AlignmentMatrix>& alignments,
                    const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(alignments.size());
  for (const auto& m : alignments) {
    std::string line;
    for (size_t k = 0; k < m.links.size(); ++k) {
      if (k > 0) line += ' ';
      line += std::to_string(m.links[k].first);
      line += '-';
      line += std::to_string(m.links[k].second);
    }
    lines.push_back(std::move(line));
  }
  WriteLinesAtomic(path, lines);
}

std::vector<std::vector<std::pair<uint32_t, uint32_t>>> LoadAlignmentLinks(
    const std::string& path) {
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> out;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t n = 0; n < lines.size(); ++n) {
    std::vector<std::pair<uint32_t, uint32_t>> links;
    const std::string& line = lines[n];
    size_t pos = 0;
    while (pos < line.size()) {
      size_t end = line.find(' ', pos);
      if (end == std::string::npos) end = line.size();
      if (end > pos) {
        size_t dash = line.find('-', pos);
        if (dash == std::string::npos || dash >= end) {
          throw ParseError(path, n + 1, "expected links like 3-5");
        }
        links.emplace_back(
            static_cast<uint32_t>(std::stoul(line.substr(pos, dash - pos))),
            static_cast<uint32_t>(std::stoul(line.substr(dash + 1, end - dash - 1))));
      }
      pos = end + 1;
    }
    std::sort(links.begin(), links.end());
    out.push_back(std::move(links));
  }
  return out;
}

}  // namespace pbmt
