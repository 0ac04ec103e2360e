// evalmetrics.cc
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

#include "pbmt/evalmetrics.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <json.hpp>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/rng.h"

namespace pbmt {

BleuReport Bleu(const std::vector<std::vector<std::string>>& candidates,
                const std::vector<std::vector<std::string>>& references,
                int max_n) {
  if (candidates.size() != references.size()) {
    throw ValidationError("candidate/reference counts differ: " +
                          std::to_string(candidates.size()) + " vs " +
                          std::to_string(references.size()));
  }
  if (references.empty()) {
    throw ValidationError("BLEU needs at least one sentence pair");
  }

  BleuReport report;
  report.precisions.assign(static_cast<size_t>(max_n), 1.0);
  std::vector<uint64_t> matched(static_cast<size_t>(max_n), 0);
  std::vector<uint64_t> total(static_cast<size_t>(max_n), 0);

  using Gram = std::vector<std::string>;
  for (size_t s = 0; s < candidates.size(); ++s) {
    const auto& cand = candidates[s];
    const auto& ref = references[s];
    report.candidate_length += cand.size();
    report.reference_length += ref.size();
    for (int n = 1; n <= max_n; ++n) {
      size_t un = static_cast<size_t>(n);
      if (cand.size() < un) continue;
      std::map<Gram, uint64_t> cand_counts, ref_counts;
      for (size_t i = 0; i + un <= cand.size(); ++i) {
        ++cand_counts[Gram(cand.begin() + static_cast<ptrdiff_t>(i),
                           cand.begin() + static_cast<ptrdiff_t>(i + un))];
      }
      for (size_t i = 0; i + un <= ref.size(); ++i) {
        ++ref_counts[Gram(ref.begin() + static_cast<ptrdiff_t>(i),
                          ref.begin() + static_cast<ptrdiff_t>(i + un))];
      }
      total[un - 1] += cand.size() - un + 1;
      for (const auto& [gram, count] : cand_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) {
          matched[un - 1] += std::min(count, it->second);
        }
      }
    }
  }

  if (report.candidate_length == 0) {
    report.brevity_penalty = 0.0;
    report.score = 0.0;
    std::fill(report.precisions.begin(), report.precisions.end(), 0.0);
    return report;
  }

  report.brevity_penalty =
      report.candidate_length > report.reference_length
          ? 1.0
          : std::exp(1.0 - static_cast<double>(report.reference_length) /
                               static_cast<double>(report.candidate_length));

  double log_sum = 0.0;
  bool zero = false;
  for (int n = 1; n <= max_n; ++n) {
    size_t un = static_cast<size_t>(n);
    // A level with no candidate n-grams at all is vacuous, not zero.
    double p = total[un - 1] == 0
                   ? 1.0
                   : static_cast<double>(matched[un - 1]) /
                         static_cast<double>(total[un - 1]);
    report.precisions[un - 1] = p;
    if (p <= 0.0) {
      zero = true;
      continue;
    }
    log_sum += std::log(p);
  }
  report.score = zero ? 0.0
                      : 100.0 * report.brevity_penalty *
                            std::exp(log_sum / static_cast<double>(max_n));
  return report;
}

namespace {

// Shuffles brochure order within each contiguous category block.
ParallelCorpus ShuffleWithinCategories(const ParallelCorpus& grouped,
                                       uint64_t seed) {
  ParallelCorpus out = grouped;
  Rng rng(seed);
  size_t begin = 0;
  while (begin < out.brochures.size()) {
    size_t end = begin;
    while (end < out.brochures.size() &&
           out.brochures[end].category == out.brochures[begin].category) {
      ++end;
    }
    std::vector<Brochure> block(
        out.brochures.begin() + static_cast<ptrdiff_t>(begin),
        out.brochures.begin() + static_cast<ptrdiff_t>(end));
    rng.Shuffle(block);
    std::copy(block.begin(), block.end(),
              out.brochures.begin() + static_cast<ptrdiff_t>(begin));
    begin = end;
  }
  for (auto& brochure : out.brochures) {
    for (size_t i = 0; i < brochure.pairs.size(); ++i) {
      brochure.pairs[i].origin_brochure = brochure.id;
      brochure.pairs[i].origin_line = i;
    }
  }
  return out;
}

// Applies the global interleave separately inside each category block, so
// content mixes without crossing category boundaries.
ParallelCorpus MixWithinCategories(const ParallelCorpus& grouped,
                                   uint64_t seed) {
  ParallelCorpus out;
  out.variant_tag = VariantTag::kCategoryGrouped;
  out.rng_seed = seed;
  size_t begin = 0;
  while (begin < grouped.brochures.size()) {
    size_t end = begin;
    while (end < grouped.brochures.size() &&
           grouped.brochures[end].category == grouped.brochures[begin].category) {
      ++end;
    }
    ParallelCorpus block;
    block.brochures.assign(
        grouped.brochures.begin() + static_cast<ptrdiff_t>(begin),
        grouped.brochures.begin() + static_cast<ptrdiff_t>(end));
    ParallelCorpus mixed = MixSentences(
        block, DeriveSeed(seed, "mix:" + grouped.brochures[begin].category));
    for (auto& brochure : mixed.brochures) {
      out.brochures.push_back(std::move(brochure));
    }
    begin = end;
  }
  for (auto& brochure : out.brochures) {
    for (size_t i = 0; i < brochure.pairs.size(); ++i) {
      brochure.pairs[i].origin_brochure = brochure.id;
      brochure.pairs[i].origin_line = i;
    }
  }
  return out;
}

}  // namespace

PreparedExperiment PrepareExperiment(int id, const ParallelCorpus& base,
                                     const PipelineConfig& config) {
  if (id < 1 || id > 7) {
    throw ValidationError("experiment id must be 1..7");
  }
  PreparedExperiment prepared;
  prepared.spec = config.split;
  prepared.spec.granularity =
      id <= 2 ? SplitGranularity::kLine : SplitGranularity::kBrochure;
  const uint64_t seed = config.seed;

  switch (id) {
    case 1:
      prepared.variant = base;
      break;
    case 2:
      prepared.variant = ShuffleAligned(base, DeriveSeed(seed, "shuffle"));
      break;
    case 3:
      prepared.variant = base;
      prepared.variant.variant_tag = VariantTag::kBrochureTagged;
      break;
    case 4:
      prepared.variant = MixSentences(base, DeriveSeed(seed, "mix"));
      break;
    case 5: {
      ParallelCorpus grouped = GroupByCategory(base);
      grouped = ShuffleWithinCategories(grouped, DeriveSeed(seed, "group-shuffle"));
      prepared.variant = MixWithinCategories(grouped, DeriveSeed(seed, "group-mix"));
      break;
    }
    case 6:
      prepared.variant = Undersample(base, DeriveSeed(seed, "undersample"));
      break;
    case 7:
      prepared.variant = Oversample(base, DeriveSeed(seed, "oversample"));
      break;
  }
  prepared.split = Split(prepared.variant, prepared.spec);
  return prepared;
}

std::string ExperimentReport::ToJson() const {
  nlohmann::json j;
  j["experiment"] = id;
  j["variant"] = variant_tag;
  j["train_lines"] = train_lines;
  j["test_lines"] = test_lines;
  j["train_brochures"] = train_brochures;
  j["test_brochures"] = test_brochures;
  j["bleu"] = {{"score", bleu.score},
               {"brevity_penalty", bleu.brevity_penalty},
               {"precisions", bleu.precisions},
               {"candidate_length", bleu.candidate_length},
               {"reference_length", bleu.reference_length}};
  j["wall_ms"] = wall_ms;
  j["config"] = config_text;
  return j.dump(2) + "\n";
}

void ExperimentReport::WriteJson(const std::string& path) const {
  WriteFileAtomic(path, ToJson());
}

ExperimentReport ExperimentReport::FromJsonFile(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFileBytes(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 1, e.what());
  }
  ExperimentReport report;
  report.id = j.at("experiment").get<int>();
  report.variant_tag = j.at("variant").get<std::string>();
  report.train_lines = j.at("train_lines").get<size_t>();
  report.test_lines = j.at("test_lines").get<size_t>();
  report.train_brochures = j.at("train_brochures").get<size_t>();
  report.test_brochures = j.at("test_brochures").get<size_t>();
  report.bleu.score = j.at("bleu").at("score").get<double>();
  report.bleu.brevity_penalty = j.at("bleu").at("brevity_penalty").get<double>();
  report.bleu.precisions =
      j.at("bleu").at("precisions").get<std::vector<double>>();
  report.bleu.candidate_length =
      j.at("bleu").at("candidate_length").get<uint64_t>();
  report.bleu.reference_length =
      j.at("bleu").at("reference_length").get<uint64_t>();
  report.wall_ms = j.at("wall_ms").get<double>();
  report.config_text = j.at("config").get<std::string>();
  return report;
}

ExperimentReport RunExperiment(int id, const ParallelCorpus& base,
                               const PipelineConfig& config) {
  auto start = std::chrono::steady_clock::now();
  PreparedExperiment prepared = PrepareExperiment(id, base, config);

  ExperimentReport report;
  report.id = id;
  report.variant_tag = VariantTagName(prepared.variant.variant_tag);
  report.train_lines = prepared.split.train.pair_count();
  report.test_lines = prepared.split.test.pair_count();
  report.train_brochures = prepared.split.train.brochures.size();
  report.test_brochures = prepared.split.test.brochures.size();
  report.config_text = config.ToText();

  TrainedModels models = TrainPipeline(prepared.split.train, config);

  std::vector<std::string> test_src;
  std::vector<std::vector<std::string>> references;
  for (const auto* pair : prepared.split.test.FlatPairs()) {
    test_src.push_back(pair->source);
    references.push_back(Tokenize(pair->target, config.tokenizer).tokens);
  }
  std::vector<TranslationOutput> outputs =
      TranslateLines(test_src, models, config);
  std::vector<std::vector<std::string>> candidates;
  candidates.reserve(outputs.size());
  for (const auto& output : outputs) candidates.push_back(output.tokens);

  report.bleu = Bleu(candidates, references);
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

PrePostReport ComparePrePost(
    const std::vector<std::vector<std::string>>& pre,
    const std::vector<std::vector<std::string>>& post,
    const std::vector<std::vector<std::string>>& references, int max_n) {
  if (pre.size() != post.size()) {
    throw ValidationError("pre/post output counts differ");
  }
  PrePostReport report;
  report.pre = Bleu(pre, references, max_n);
  report.post = Bleu(post, references, max_n);
  report.delta = report.post.score - report.pre.score;
  return report;
}

std::string ExperimentTableTsv(const std::vector<ExperimentReport>& reports) {
  std::string out = "experiment\tbleu\n";
  for (const auto& r : reports) {
    out += std::to_string(r.id);
    out += '\t';
    out += FormatFixed(r.bleu.score, 2);
    out += '\n';
  }
  return out;
}

std::string PrePostTableTsv(const std::vector<PrePostRow>& rows) {
  std::string out = "brochure\tbefore\tafter\n";
  for (const auto& row : rows) {
    out += row.label;
    out += '\t';
    out += FormatFixed(row.before, 2);
    out += '\t';
    out += FormatFixed(row.after, 2);
    out += '\n';
  }
  return out;
}

}  // namespace pbmt
