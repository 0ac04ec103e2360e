// decoder.cc
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

#include "pbmt/decoder.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <thread>

#include <json.hpp>

#include "pbmt/error.h"
#include "pbmt/io.h"

namespace pbmt {

namespace {

constexpr double kLn10 = 2.302585092994045684;

struct PhraseOption {
  uint32_t src_begin = 0;
  uint32_t src_end = 0;
  const PhraseEntry* entry = nullptr;  // nullptr = OOV pass-through
  std::vector<uint32_t> tgt_ids;       // LM ids of the target tokens
  double static_score = 0.0;           // translation features + word penalty
  double future_estimate = 0.0;        // static + unigram LM estimate
};

double TranslationFeatureScore(const PhraseEntry& entry,
                               const FeatureWeights& w) {
  return w.phi_fwd * std::log(entry.phi_fwd) +
         w.lex_fwd * std::log(entry.lex_fwd) +
         w.phi_bwd * std::log(entry.phi_bwd) +
         w.lex_bwd * std::log(entry.lex_bwd);
}

struct Hypothesis {
  std::vector<uint64_t> coverage;
  std::vector<uint32_t> lm_state;  // last (order-1) emitted LM ids
  uint32_t last_end = 0;           // source position after the last phrase
  double score = 0.0;
  double future = 0.0;
  int32_t parent = -1;
  int32_t option = -1;  // index into the option list
};

struct StateKey {
  std::vector<uint64_t> coverage;
  std::vector<uint32_t> lm_state;
  uint32_t last_end;

  bool operator<(const StateKey& other) const {
    if (coverage != other.coverage) return coverage < other.coverage;
    if (lm_state != other.lm_state) return lm_state < other.lm_state;
    return last_end < other.last_end;
  }
};

size_t CoverageWords(size_t n) { return (n + 63) / 64; }

bool SpanFree(const std::vector<uint64_t>& coverage, uint32_t begin,
              uint32_t end) {
  for (uint32_t i = begin; i < end; ++i) {
    if (coverage[i / 64] & (1ULL << (i % 64))) return false;
  }
  return true;
}

void SetSpan(std::vector<uint64_t>& coverage, uint32_t begin, uint32_t end) {
  for (uint32_t i = begin; i < end; ++i) coverage[i / 64] |= 1ULL << (i % 64);
}

}  // namespace

TranslationOutput Decode(const std::vector<std::string>& sentence,
                         const PhraseTable& table, const NGramModel& model,
                         const FeatureWeights& weights,
                         const DecoderConfig& config) {
  const size_t n = sentence.size();
  TranslationOutput output;
  if (n == 0) {
    output.model_score =
        weights.lm * kLn10 * model.SentenceLogProb({});
    return output;
  }

  // OOV positions: no single-token entry.
  std::vector<bool> oov(n, false);
  for (size_t i = 0; i < n; ++i) {
    oov[i] = table.Lookup({sentence[i]}) == nullptr;
  }

  // Collect phrase options. Spans containing an OOV position only admit the
  // pass-through option for that position.
  std::vector<PhraseOption> options;
  for (uint32_t begin = 0; begin < n; ++begin) {
    if (oov[begin]) {
      PhraseOption opt;
      opt.src_begin = begin;
      opt.src_end = begin + 1;
      opt.tgt_ids = {model.vocab.Lookup(sentence[begin])};
      opt.static_score = -weights.word_penalty;
      opt.future_estimate =
          opt.static_score +
          weights.lm * kLn10 * model.WordLogProb({}, opt.tgt_ids[0]);
      options.push_back(std::move(opt));
      continue;
    }
    std::vector<std::string> phrase;
    for (uint32_t end = begin + 1;
         end <= std::min<size_t>(n, begin + table.max_len); ++end) {
      if (oov[end - 1]) break;
      phrase.push_back(sentence[end - 1]);
      const std::vector<PhraseEntry>* entries = table.Lookup(phrase);
      if (entries == nullptr) continue;
      for (const PhraseEntry& entry : *entries) {
        PhraseOption opt;
        opt.src_begin = begin;
        opt.src_end = end;
        opt.entry = &entry;
        opt.tgt_ids.reserve(entry.tgt.size());
        for (const auto& tok : entry.tgt)
          opt.tgt_ids.push_back(model.vocab.Lookup(tok));
        opt.static_score =
            TranslationFeatureScore(entry, weights) -
            weights.word_penalty * static_cast<double>(entry.tgt.size());
        double lm_est = 0.0;
        for (uint32_t id : opt.tgt_ids) lm_est += model.WordLogProb({}, id);
        opt.future_estimate = opt.static_score + weights.lm * kLn10 * lm_est;
        options.push_back(std::move(opt));
      }
    }
  }

  // Span-based future cost table over uncovered stretches: best option per
  // span, then best split.
  const double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> fc(n + 1, std::vector<double>(n + 1, kNegInf));
  for (const auto& opt : options) {
    fc[opt.src_begin][opt.src_end] =
        std::max(fc[opt.src_begin][opt.src_end], opt.future_estimate);
  }
  for (size_t len = 2; len <= n; ++len) {
    for (size_t begin = 0; begin + len <= n; ++begin) {
      size_t end = begin + len;
      for (size_t mid = begin + 1; mid < end; ++mid) {
        if (fc[begin][mid] == kNegInf || fc[mid][end] == kNegInf) continue;
        fc[begin][end] = std::max(fc[begin][end], fc[begin][mid] + fc[mid][end]);
      }
    }
  }
  auto future_of = [&](const std::vector<uint64_t>& coverage) {
    double total = 0.0;
    size_t run_begin = n;
    for (size_t i = 0; i <= n; ++i) {
      bool covered =
          i == n || (coverage[i / 64] & (1ULL << (i % 64))) != 0;
      if (!covered && run_begin == n) run_begin = i;
      if (covered && run_begin != n) {
        total += fc[run_begin][i];
        run_begin = n;
      }
    }
    return total;
  };

  const size_t lm_context = static_cast<size_t>(model.order) - 1;
  auto advance_state = [&](std::vector<uint32_t> state,
                           const std::vector<uint32_t>& tgt_ids,
                           double& lm_score) {
    for (uint32_t id : tgt_ids) {
      lm_score += model.WordLogProb(state, id);
      state.push_back(id);
      if (state.size() > lm_context) {
        state.erase(state.begin(),
                    state.end() - static_cast<ptrdiff_t>(lm_context));
      }
    }
    return state;
  };

  // Arena of all hypotheses; stacks hold indices.
  std::vector<Hypothesis> arena;
  std::vector<std::vector<int32_t>> stacks(n + 1);
  std::vector<std::map<StateKey, int32_t>> recombination(n + 1);

  Hypothesis root;
  root.coverage.assign(CoverageWords(n), 0);
  root.lm_state = {LmVocab::kBosId};
  root.future = future_of(root.coverage);
  arena.push_back(root);
  stacks[0].push_back(0);

  auto covered_count = [&](const std::vector<uint64_t>& coverage) {
    size_t c = 0;
    for (uint64_t w : coverage) c += static_cast<size_t>(__builtin_popcountll(w));
    return c;
  };

  for (size_t level = 0; level < n; ++level) {
    // Histogram pruning by score + future estimate, stable by creation.
    auto& stack = stacks[level];
    if (stack.size() > config.beam_size) {
      std::sort(stack.begin(), stack.end(), [&](int32_t a, int32_t b) {
        double ta = arena[a].score + arena[a].future;
        double tb = arena[b].score + arena[b].future;
        if (ta != tb) return ta > tb;
        return a < b;
      });
      stack.resize(config.beam_size);
    }

    for (int32_t hyp_index : stack) {
      for (size_t opt_index = 0; opt_index < options.size(); ++opt_index) {
        const PhraseOption& opt = options[opt_index];
        // Reload: expansions may have grown the arena.
        const Hypothesis& hyp = arena[static_cast<size_t>(hyp_index)];
        if (!SpanFree(hyp.coverage, opt.src_begin, opt.src_end)) continue;
        if (config.distortion_limit >= 0) {
          int64_t jump = static_cast<int64_t>(opt.src_begin) -
                         static_cast<int64_t>(hyp.last_end);
          if (std::llabs(jump) > config.distortion_limit) continue;
        }

        Hypothesis next;
        next.coverage = hyp.coverage;
        SetSpan(next.coverage, opt.src_begin, opt.src_end);
        double lm_score = 0.0;
        next.lm_state = advance_state(hyp.lm_state, opt.tgt_ids, lm_score);
        double jump = std::fabs(static_cast<double>(opt.src_begin) -
                                static_cast<double>(hyp.last_end));
        next.last_end = opt.src_end;
        next.score = hyp.score + opt.static_score +
                     weights.lm * kLn10 * lm_score -
                     weights.distortion * jump;
        next.parent = hyp_index;
        next.option = static_cast<int32_t>(opt_index);

        size_t level_next = covered_count(next.coverage);
        if (level_next == n) {
          // Close the sentence so complete hypotheses rank by full score.
          next.score += weights.lm * kLn10 *
                        model.WordLogProb(next.lm_state, LmVocab::kEosId);
        }
        next.future = level_next == n ? 0.0 : future_of(next.coverage);

        StateKey key{next.coverage, next.lm_state, next.last_end};
        auto& recomb = recombination[level_next];
        auto it = recomb.find(key);
        if (it == recomb.end()) {
          int32_t id = static_cast<int32_t>(arena.size());
          arena.push_back(std::move(next));
          stacks[level_next].push_back(id);
          recomb.emplace(std::move(key), id);
        } else if (next.score > arena[static_cast<size_t>(it->second)].score) {
          // Keep the stronger path; ties keep the earlier hypothesis.
          arena[static_cast<size_t>(it->second)] = std::move(next);
        }
      }
    }
  }

  const auto& final_stack = stacks[n];
  if (final_stack.empty()) {
    // A tight distortion limit can strand every path; retry unlimited.
    if (config.distortion_limit >= 0) {
      DecoderConfig relaxed = config;
      relaxed.distortion_limit = -1;
      return Decode(sentence, table, model, weights, relaxed);
    }
    throw ValidationError("decoder produced no complete hypothesis");
  }
  int32_t best = final_stack[0];
  for (int32_t candidate : final_stack) {
    if (arena[candidate].score > arena[best].score) best = candidate;
  }

  // Trace back the applied options.
  std::vector<int32_t> applied;
  for (int32_t at = best; arena[at].parent >= 0; at = arena[at].parent) {
    applied.push_back(arena[at].option);
  }
  std::reverse(applied.begin(), applied.end());

  output.model_score = arena[best].score;
  for (int32_t opt_index : applied) {
    const PhraseOption& opt = options[static_cast<size_t>(opt_index)];
    SegmentStep step;
    step.src_begin = opt.src_begin;
    step.src_end = opt.src_end;
    step.is_oov = opt.entry == nullptr;
    if (opt.entry != nullptr) {
      step.tgt = opt.entry->tgt;
      step.phi_fwd = opt.entry->phi_fwd;
      step.lex_fwd = opt.entry->lex_fwd;
      step.phi_bwd = opt.entry->phi_bwd;
      step.lex_bwd = opt.entry->lex_bwd;
    } else {
      step.tgt = {sentence[opt.src_begin]};
    }
    for (const auto& tok : step.tgt) {
      if (step.is_oov) output.oov_spans.push_back(output.tokens.size());
      output.tokens.push_back(tok);
    }
    output.segmentation.push_back(std::move(step));
  }
  return output;
}

std::vector<TranslationOutput> DecodeCorpus(
    const std::vector<std::vector<std::string>>& sentences,
    const PhraseTable& table, const NGramModel& model,
    const FeatureWeights& weights, const DecoderConfig& config, int jobs) {
  std::vector<TranslationOutput> outputs(sentences.size());
  jobs = std::max(1, jobs);
  if (jobs == 1 || sentences.size() < 2) {
    for (size_t i = 0; i < sentences.size(); ++i) {
      outputs[i] = Decode(sentences[i], table, model, weights, config);
    }
    return outputs;
  }
  std::vector<std::thread> workers;
  std::atomic<size_t> cursor{0};
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        size_t i = cursor.fetch_add(1);
        if (i >= sentences.size()) return;
        outputs[i] = Decode(sentences[i], table, model, weights, config);
      }
    });
  }
  for (auto& t : workers) t.join();
  return outputs;
}

double RescoreSegmentation(const TranslationOutput& output,
                           const NGramModel& model,
                           const FeatureWeights& weights) {
  double score = 0.0;
  uint32_t last_end = 0;
  for (const auto& step : output.segmentation) {
    if (!step.is_oov) {
      PhraseEntry entry;
      entry.phi_fwd = step.phi_fwd;
      entry.lex_fwd = step.lex_fwd;
      entry.phi_bwd = step.phi_bwd;
      entry.lex_bwd = step.lex_bwd;
      score += TranslationFeatureScore(entry, weights);
    }
    score -= weights.word_penalty * static_cast<double>(step.tgt.size());
    score -= weights.distortion *
             std::fabs(static_cast<double>(step.src_begin) -
                       static_cast<double>(last_end));
    last_end = step.src_end;
  }
  score += weights.lm * kLn10 * model.SentenceLogProb(output.tokens);
  return score;
}

namespace {

constexpr const char* kOovOpen = "⟦";
constexpr const char* kOovClose = "⟧";

}  // namespace

void WriteTranslationText(const std::vector<TranslationOutput>& outputs,
                          const std::string& path, bool oov_markers) {
  std::vector<std::string> lines;
  lines.reserve(outputs.size());
  for (const auto& out : outputs) {
    std::string line;
    for (size_t i = 0; i < out.tokens.size(); ++i) {
      if (i > 0) line += ' ';
      bool marked =
          oov_markers && std::binary_search(out.oov_spans.begin(),
                                            out.oov_spans.end(), i);
      if (marked) line += kOovOpen;
      line += out.tokens[i];
      if (marked) line += kOovClose;
    }
    lines.push_back(std::move(line));
  }
  WriteLinesAtomic(path, lines);
}

void WriteDecodeReport(const std::vector<TranslationOutput>& outputs,
                       const std::string& path) {
  std::string content;
  for (const auto& out : outputs) {
    nlohmann::json j;
    j["tokens"] = out.tokens;
    j["score"] = out.model_score;
    j["oov_spans"] = out.oov_spans;
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& step : out.segmentation) {
      segs.push_back({{"src_begin", step.src_begin},
                      {"src_end", step.src_end},
                      {"tgt", step.tgt},
                      {"oov", step.is_oov},
                      {"features",
                       {step.phi_fwd, step.lex_fwd, step.phi_bwd, step.lex_bwd}}});
    }
    j["segmentation"] = std::move(segs);
    content += j.dump();
    content += '\n';
  }
  WriteFileAtomic(path, content);
}

std::vector<TranslationOutput> ReadDecodeReport(const std::string& path) {
  std::vector<TranslationOutput> outputs;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[ln]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path, ln + 1, e.what());
    }
    TranslationOutput out;
    out.tokens = j.at("tokens").get<std::vector<std::string>>();
    out.model_score = j.at("score").get<double>();
    out.oov_spans = j.at("oov_spans").get<std::vector<size_t>>();
    for (const auto& seg : j.at("segmentation")) {
      SegmentStep step;
      step.src_begin = seg.at("src_begin").get<uint32_t>();
      step.src_end = seg.at("src_end").get<uint32_t>();
      step.tgt = seg.at("tgt").get<std::vector<std::string>>();
      step.is_oov = seg.at("oov").get<bool>();
      const auto& features = seg.at("features");
      step.phi_fwd = features.at(0).get<double>();
      step.lex_fwd = features.at(1).get<double>();
      step.phi_bwd = features.at(2).get<double>();
      step.lex_bwd = features.at(3).get<double>();
      out.segmentation.push_back(std::move(step));
    }
    outputs.push_back(std::move(out));
  }
  return outputs;
}

}  // namespace pbmt
