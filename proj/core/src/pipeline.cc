// pipeline.cc
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

#include "pbmt/pipeline.h"

#include <filesystem>
#include <thread>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/rng.h"

namespace pbmt {

namespace {

bool ParseBool(const std::string& value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") {
    return true;
  }
  if (value == "false" || value == "0" || value == "off" || value == "no") {
    return false;
  }
  throw ValidationError("expected a boolean, got '" + value + "'");
}

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

void ParseFraction(const std::string& value, uint32_t& num, uint32_t& den) {
  size_t slash = value.find('/');
  if (slash == std::string::npos) {
    throw ValidationError("fraction must look like 9/10, got '" + value + "'");
  }
  num = static_cast<uint32_t>(std::stoul(value.substr(0, slash)));
  den = static_cast<uint32_t>(std::stoul(value.substr(slash + 1)));
  if (den == 0 || num == 0 || num >= den) {
    throw ValidationError("fraction must lie strictly between 0 and 1");
  }
}

}  // namespace

void PipelineConfig::Set(const std::string& key, const std::string& value) {
  if (key == "corpus.src") corpus_src = value;
  else if (key == "corpus.tgt") corpus_tgt = value;
  else if (key == "corpus.xml") corpus_xml = value;
  else if (key == "work_dir") work_dir = value;
  else if (key == "variant") variant = std::stoi(value);
  else if (key == "split.fraction") ParseFraction(value, split.train_num, split.train_den);
  else if (key == "split.granularity") {
    if (value == "line") split.granularity = SplitGranularity::kLine;
    else if (value == "brochure") split.granularity = SplitGranularity::kBrochure;
    else throw ValidationError("split.granularity must be line or brochure");
  }
  else if (key == "tokenizer.map_arabic_variants") tokenizer.map_arabic_variants = ParseBool(value);
  else if (key == "clean.min_tokens") cleaning.min_tokens = std::stoi(value);
  else if (key == "clean.max_tokens") cleaning.max_tokens = std::stoi(value);
  else if (key == "clean.max_ratio") cleaning.max_length_ratio = std::stod(value);
  else if (key == "em.iterations") em.iterations = std::stoi(value);
  else if (key == "em.floor") em.min_prob_floor = std::stod(value);
  else if (key == "em.epsilon") em.convergence_epsilon = std::stod(value);
  else if (key == "phrase.max_len") phrase_max_len = std::stoul(value);
  else if (key == "lm.order") lm_order = std::stoi(value);
  else if (key == "lm.discount_mode") {
    if (value == "fixed") lm_discount.mode = KnDiscount::Mode::kFixed;
    else if (value == "count") lm_discount.mode = KnDiscount::Mode::kCountOfCounts;
    else throw ValidationError("lm.discount_mode must be fixed or count");
  }
  else if (key == "lm.discount") lm_discount.fixed = std::stod(value);
  else if (key == "decoder.beam") decoder.beam_size = std::stoul(value);
  else if (key == "decoder.distortion_limit") decoder.distortion_limit = std::stoi(value);
  else if (key == "weights.phi_fwd") weights.phi_fwd = std::stod(value);
  else if (key == "weights.phi_bwd") weights.phi_bwd = std::stod(value);
  else if (key == "weights.lex_fwd") weights.lex_fwd = std::stod(value);
  else if (key == "weights.lex_bwd") weights.lex_bwd = std::stod(value);
  else if (key == "weights.lm") weights.lm = std::stod(value);
  else if (key == "weights.word_penalty") weights.word_penalty = std::stod(value);
  else if (key == "weights.distortion") weights.distortion = std::stod(value);
  else if (key == "dictionary.path") dictionary_path = value;
  else if (key == "external.mode") {
    if (value != "offline" && value != "live") {
      throw ValidationError("external.mode must be offline or live");
    }
    external_mode = value;
  }
  else if (key == "external.endpoint") external_endpoint = value;
  else if (key == "external.stub") external_stub_path = value;
  else if (key == "lang.src") lang_src = value;
  else if (key == "lang.tgt") lang_tgt = value;
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "jobs") jobs = std::stoi(value);
  else throw ValidationError("unknown config key '" + key + "'");
}

void PipelineConfig::Validate() const {
  if (variant < 1 || variant > 7) {
    throw ValidationError("variant must be 1..7");
  }
  if (em.iterations < 1) throw ValidationError("em.iterations must be >= 1");
  if (lm_order < 1) throw ValidationError("lm.order must be >= 1");
  if (decoder.beam_size < 1) throw ValidationError("decoder.beam must be >= 1");
  if (phrase_max_len < 1) throw ValidationError("phrase.max_len must be >= 1");
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
  if (lm_discount.mode == KnDiscount::Mode::kFixed &&
      (lm_discount.fixed <= 0.0 || lm_discount.fixed >= 1.0)) {
    throw ValidationError("lm.discount must lie strictly in (0,1)");
  }
  if (!corpus_xml.empty() && (!corpus_src.empty() || !corpus_tgt.empty())) {
    throw ValidationError("give either corpus.xml or corpus.src/corpus.tgt");
  }
  if (external_mode == "live" && external_endpoint.empty()) {
    throw ValidationError("external.mode=live requires external.endpoint");
  }
}

PipelineConfig PipelineConfig::FromFile(const std::string& path) {
  PipelineConfig config;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = Trim(lines[ln]);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path, ln + 1, "expected key = value");
    }
    try {
      config.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const ValidationError& e) {
      throw ParseError(path, ln + 1, e.what());
    }
  }
  return config;
}

std::string PipelineConfig::ToText() const {
  std::string out;
  auto kv = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  kv("corpus.src", corpus_src);
  kv("corpus.tgt", corpus_tgt);
  kv("corpus.xml", corpus_xml);
  kv("work_dir", work_dir);
  kv("variant", std::to_string(variant));
  kv("split.fraction", std::to_string(split.train_num) + "/" + std::to_string(split.train_den));
  kv("split.granularity",
     split.granularity == SplitGranularity::kLine ? "line" : "brochure");
  kv("tokenizer.map_arabic_variants", tokenizer.map_arabic_variants ? "true" : "false");
  kv("clean.min_tokens", std::to_string(cleaning.min_tokens));
  kv("clean.max_tokens", std::to_string(cleaning.max_tokens));
  kv("clean.max_ratio", FormatShort(cleaning.max_length_ratio));
  kv("em.iterations", std::to_string(em.iterations));
  kv("em.floor", FormatShort(em.min_prob_floor));
  kv("em.epsilon", FormatShort(em.convergence_epsilon));
  kv("phrase.max_len", std::to_string(phrase_max_len));
  kv("lm.order", std::to_string(lm_order));
  kv("lm.discount_mode",
     lm_discount.mode == KnDiscount::Mode::kFixed ? "fixed" : "count");
  kv("lm.discount", FormatShort(lm_discount.fixed));
  kv("decoder.beam", std::to_string(decoder.beam_size));
  kv("decoder.distortion_limit", std::to_string(decoder.distortion_limit));
  kv("weights.phi_fwd", FormatShort(weights.phi_fwd));
  kv("weights.phi_bwd", FormatShort(weights.phi_bwd));
  kv("weights.lex_fwd", FormatShort(weights.lex_fwd));
  kv("weights.lex_bwd", FormatShort(weights.lex_bwd));
  kv("weights.lm", FormatShort(weights.lm));
  kv("weights.word_penalty", FormatShort(weights.word_penalty));
  kv("weights.distortion", FormatShort(weights.distortion));
  kv("dictionary.path", dictionary_path);
  kv("external.mode", external_mode);
  kv("external.endpoint", external_endpoint);
  kv("external.stub", external_stub_path);
  kv("lang.src", lang_src);
  kv("lang.tgt", lang_tgt);
  kv("seed", std::to_string(seed));
  kv("jobs", std::to_string(jobs));
  return out;
}

int PipelineConfig::DefaultJobs() {
  unsigned cores = std::thread::hardware_concurrency();
  return cores == 0 ? 1 : static_cast<int>(cores);
}

TrainedModels TrainPipeline(const ParallelCorpus& train,
                            const PipelineConfig& config,
                            std::vector<AlignmentMatrix>* alignments_out) {
  TrainedModels models;

  auto [cleaned, clean_report] =
      CleanPairs(train, config.cleaning, config.tokenizer);
  if (cleaned.empty()) {
    throw ValidationError("no training pairs survive cleaning");
  }

  std::vector<TokenizedSentence> src_sentences, tgt_sentences;
  for (const auto* pair : cleaned.FlatPairs()) {
    src_sentences.push_back(Tokenize(pair->source, config.tokenizer));
    tgt_sentences.push_back(Tokenize(pair->target, config.tokenizer));
  }
  models.src_truecaser = TrainTruecaser(src_sentences);
  models.tgt_truecaser = TrainTruecaser(tgt_sentences);

  std::vector<TokenPair> pairs;
  pairs.reserve(src_sentences.size());
  std::vector<std::vector<std::string>> lm_corpus;
  lm_corpus.reserve(tgt_sentences.size());
  for (size_t i = 0; i < src_sentences.size(); ++i) {
    TokenPair pair;
    pair.src = Truecase(src_sentences[i], models.src_truecaser).tokens;
    pair.tgt = Truecase(tgt_sentences[i], models.tgt_truecaser).tokens;
    lm_corpus.push_back(pair.tgt);
    pairs.push_back(std::move(pair));
  }

  EmConfig em = config.em;
  em.jobs = config.jobs;
  models.forward = TrainIbm1(pairs, em, Direction::kSrcToTgt).table;
  models.backward = TrainIbm1(pairs, em, Direction::kTgtToSrc).table;

  std::vector<AlignmentMatrix> alignments;
  alignments.reserve(pairs.size());
  for (const auto& pair : pairs) {
    AlignmentMatrix forward = ViterbiAlign(pair, models.forward);
    AlignmentMatrix backward = ViterbiAlign(pair, models.backward);
    alignments.push_back(Symmetrize(forward, backward,
                                    SymmetrizationHeuristic::kGrowDiagFinalAnd));
  }

  models.phrase_table = BuildTable(pairs, alignments, models.forward,
                                   models.backward, config.phrase_max_len);
  models.lm = EstimateKn(CountNgrams(lm_corpus, config.lm_order),
                         config.lm_discount);
  if (alignments_out != nullptr) *alignments_out = std::move(alignments);
  return models;
}

namespace {

std::string PathJoin(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

void SaveModels(const TrainedModels& models, const std::string& dir) {
  std::filesystem::create_directories(dir);
  models.src_truecaser.Save(PathJoin(dir, "truecase.src.tsv"));
  models.tgt_truecaser.Save(PathJoin(dir, "truecase.tgt.tsv"));
  models.forward.Save(PathJoin(dir, "lex.fwd.tsv"));
  models.backward.Save(PathJoin(dir, "lex.bwd.tsv"));
  models.phrase_table.Save(PathJoin(dir, "phrase-table.txt"));
  models.lm.SaveArpa(PathJoin(dir, "lm.arpa"));
}

TrainedModels LoadModels(const std::string& dir) {
  TrainedModels models;
  models.src_truecaser = TruecaseModel::Load(PathJoin(dir, "truecase.src.tsv"));
  models.tgt_truecaser = TruecaseModel::Load(PathJoin(dir, "truecase.tgt.tsv"));
  models.forward =
      TranslationTable::Load(PathJoin(dir, "lex.fwd.tsv"), Direction::kSrcToTgt);
  models.backward =
      TranslationTable::Load(PathJoin(dir, "lex.bwd.tsv"), Direction::kTgtToSrc);
  models.phrase_table = PhraseTable::Load(PathJoin(dir, "phrase-table.txt"));
  models.lm = NGramModel::LoadArpa(PathJoin(dir, "lm.arpa"));
  return models;
}

std::vector<TranslationOutput> TranslateLines(
    const std::vector<std::string>& lines, const TrainedModels& models,
    const PipelineConfig& config) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(lines.size());
  for (const auto& line : lines) {
    TokenizedSentence tokens = Tokenize(line, config.tokenizer);
    sentences.push_back(Truecase(tokens, models.src_truecaser).tokens);
  }
  std::vector<TranslationOutput> outputs =
      DecodeCorpus(sentences, models.phrase_table, models.lm, config.weights,
                   config.decoder, config.jobs);
  for (auto& output : outputs) {
    TokenizedSentence sentence;
    sentence.tokens = output.tokens;
    sentence.was_truecased = true;
    output.tokens = Recase(sentence, models.tgt_truecaser).tokens;
  }
  return outputs;
}

}  // namespace pbmt
