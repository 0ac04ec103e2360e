// pbmt_main.cc
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
// Command-line entry point. Subcommands: prepare, salign, train, translate,
// postedit, bleu, experiment, report. Exit codes: 0 success, 1 validation
// error, 2 I/O error. Data goes to declared paths, logs to stderr.

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbmt/corpus.h"
#include "pbmt/decoder.h"
#include "pbmt/error.h"
#include "pbmt/evalmetrics.h"
#include "pbmt/io.h"
#include "pbmt/pipeline.h"
#include "pbmt/postedit.h"
#include "pbmt/salign.h"
#include "pbmt/textprep.h"
#include "pbmt/wordalign.h"

namespace {

namespace fs = std::filesystem;

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  int jobs = 0;                        // 0 = leave the config value alone

  pbmt::PipelineConfig Resolve() const {
    pbmt::PipelineConfig config;
    if (!config_path.empty()) {
      config = pbmt::PipelineConfig::FromFile(config_path);
    }
    for (const auto& assignment : overrides) {
      size_t eq = assignment.find('=');
      if (eq == std::string::npos) {
        throw pbmt::ValidationError("--set expects key=value, got '" +
                                    assignment + "'");
      }
      config.Set(assignment.substr(0, eq), assignment.substr(eq + 1));
    }
    if (jobs > 0) config.jobs = jobs;
    config.Validate();
    return config;
  }
};

void AddConfigArgs(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "flat key = value configuration file");
  cmd->add_option("--set", args.overrides,
                  "override any config key, e.g. --set seed=7");
  cmd->add_option("--jobs", args.jobs,
                  "worker threads for parallel stages (default: all cores)");
}

pbmt::ParallelCorpus LoadBaseCorpus(const pbmt::PipelineConfig& config) {
  if (!config.corpus_xml.empty()) {
    return pbmt::LoadBrochureXml(config.corpus_xml);
  }
  if (config.corpus_src.empty() || config.corpus_tgt.empty()) {
    throw pbmt::ValidationError(
        "no corpus configured: set corpus.xml or corpus.src and corpus.tgt");
  }
  return pbmt::LoadPlaintext(config.corpus_src, config.corpus_tgt);
}

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::unique_ptr<pbmt::ExternalTranslator> MakeExternalClient(
    const pbmt::PipelineConfig& config) {
  if (config.external_mode == "live") {
    return std::make_unique<pbmt::HttpTranslator>(
        config.external_endpoint, config.lang_src, config.lang_tgt);
  }
  std::map<std::string, std::string> table;
  if (!config.external_stub_path.empty()) {
    std::vector<std::string> lines = pbmt::ReadLines(config.external_stub_path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      size_t tab = lines[i].find('\t');
      if (tab == std::string::npos) {
        throw pbmt::ParseError(config.external_stub_path, i + 1,
                               "expected term<TAB>translation");
      }
      table[lines[i].substr(0, tab)] = lines[i].substr(tab + 1);
    }
  }
  return std::make_unique<pbmt::OfflineStubTranslator>(std::move(table));
}

int RunPrepare(const ConfigArgs& args) {
  pbmt::PipelineConfig config = args.Resolve();
  pbmt::ParallelCorpus base = LoadBaseCorpus(config);
  pbmt::PreparedExperiment prepared =
      pbmt::PrepareExperiment(config.variant, base, config);

  std::string dir = Join(config.work_dir, "prepared");
  pbmt::SaveBrochureXml(prepared.variant, Join(dir, "variant.xml"));
  pbmt::SavePlaintext(prepared.split.train, Join(dir, "train.src"),
                      Join(dir, "train.tgt"));
  pbmt::SavePlaintext(prepared.split.test, Join(dir, "test.src"),
                      Join(dir, "test.tgt"));
  std::cerr << "prepare: variant " << config.variant << " ("
            << pbmt::VariantTagName(prepared.variant.variant_tag) << "), "
            << prepared.variant.pair_count() << " pairs -> train "
            << prepared.split.train.pair_count() << " / test "
            << prepared.split.test.pair_count() << " lines, "
            << prepared.split.train.brochures.size() << " / "
            << prepared.split.test.brochures.size() << " brochures\n";
  return 0;
}

int RunSalign(const std::string& src_path, const std::string& tgt_path,
              const std::string& out_prefix, const std::string& format,
              double mean_ratio, double variance,
              const std::string& src_lang, const std::string& tgt_lang) {
  pbmt::GaleChurchParams params{mean_ratio, variance};
  pbmt::SegmentedDocument src = pbmt::Segment(pbmt::ReadFileBytes(src_path));
  pbmt::SegmentedDocument tgt = pbmt::Segment(pbmt::ReadFileBytes(tgt_path));
  pbmt::AlignmentResult result = pbmt::GaleChurchAlign(src, tgt, params);
  std::cerr << "salign: " << src.size() << " x " << tgt.size()
            << " sentences -> " << result.beads.size()
            << " beads, total cost " << result.total_cost << "\n";
  if (format == "plaintext" || format == "all") {
    pbmt::ExportPlaintextPair(result, src, tgt, out_prefix + ".src",
                              out_prefix + ".tgt");
  }
  if (format == "xml" || format == "all") {
    pbmt::ExportXml(result, src, tgt, out_prefix + ".xml");
  }
  if (format == "tmx" || format == "all") {
    pbmt::ExportTmx(result, src, tgt, out_prefix + ".tmx", src_lang, tgt_lang);
  }
  return 0;
}

int RunTrain(const ConfigArgs& args, std::string train_src,
             std::string train_tgt) {
  pbmt::PipelineConfig config = args.Resolve();
  if (train_src.empty()) train_src = config.corpus_src;
  if (train_tgt.empty()) train_tgt = config.corpus_tgt;
  pbmt::ParallelCorpus train;
  if (!train_src.empty() && !train_tgt.empty()) {
    train = pbmt::LoadPlaintext(train_src, train_tgt);
  } else {
    train = LoadBaseCorpus(config);
  }
  std::vector<pbmt::AlignmentMatrix> alignments;
  pbmt::TrainedModels models = pbmt::TrainPipeline(train, config, &alignments);
  std::string dir = Join(config.work_dir, "models");
  pbmt::SaveModels(models, dir);
  pbmt::SaveAlignments(alignments, Join(dir, "alignments.txt"));
  std::cerr << "train: " << train.pair_count() << " pairs -> "
            << models.phrase_table.EntryCount() << " phrase entries, LM order "
            << models.lm.order << ", models in " << dir << "\n";
  return 0;
}

int RunTranslate(const ConfigArgs& args, const std::string& input,
                 const std::string& output, std::string report_path) {
  pbmt::PipelineConfig config = args.Resolve();
  pbmt::TrainedModels models =
      pbmt::LoadModels(Join(config.work_dir, "models"));
  std::vector<std::string> lines = pbmt::ReadLines(input);
  std::vector<pbmt::TranslationOutput> outputs =
      pbmt::TranslateLines(lines, models, config);
  pbmt::WriteTranslationText(outputs, output, /*oov_markers=*/true);
  if (report_path.empty()) {
    report_path = Join(config.work_dir, "translate.report.jsonl");
  }
  pbmt::WriteDecodeReport(outputs, report_path);
  size_t oov = 0;
  for (const auto& out : outputs) oov += out.oov_spans.size();
  std::cerr << "translate: " << lines.size() << " lines, " << oov
            << " OOV tokens, report " << report_path << "\n";
  return 0;
}

int RunPostedit(const ConfigArgs& args, const std::string& report_path,
                const std::string& output, const std::string& edits_path) {
  pbmt::PipelineConfig config = args.Resolve();
  std::vector<pbmt::TranslationOutput> outputs =
      pbmt::ReadDecodeReport(report_path);
  pbmt::MedicalDictionary dict;
  if (!config.dictionary_path.empty()) {
    dict = pbmt::MedicalDictionary::Load(config.dictionary_path);
  }
  std::unique_ptr<pbmt::ExternalTranslator> client = MakeExternalClient(config);
  pbmt::PostEditResult result =
      pbmt::PostEditPipeline(outputs, dict, client.get());
  pbmt::WriteTranslationText(result.outputs, output, /*oov_markers=*/false);

  if (!edits_path.empty()) {
    std::string tsv = "sentence\tposition\toriginal\treplacement\tsource\n";
    for (size_t s = 0; s < result.reports.size(); ++s) {
      for (const auto& edit : result.reports[s].edits) {
        const char* source = edit.source == pbmt::EditSource::kDictionary
                                 ? "dictionary"
                                 : edit.source == pbmt::EditSource::kExternal
                                       ? "external"
                                       : "none";
        tsv += std::to_string(s) + "\t" + std::to_string(edit.position) +
               "\t" + edit.original + "\t" + edit.replacement + "\t" + source +
               "\n";
      }
    }
    pbmt::WriteFileAtomic(edits_path, tsv);
  }
  size_t edited = 0;
  for (const auto& report : result.reports) {
    for (const auto& edit : report.edits) {
      if (edit.source != pbmt::EditSource::kNone) ++edited;
    }
  }
  std::cerr << "postedit: " << outputs.size() << " sentences, " << edited
            << " replacements\n";
  return 0;
}

int RunBleu(const ConfigArgs& args, const std::string& cand_path,
            const std::string& ref_path) {
  pbmt::PipelineConfig config = args.Resolve();
  auto tokenize_file = [&config](const std::string& path) {
    std::vector<std::vector<std::string>> out;
    for (const auto& line : pbmt::ReadLines(path)) {
      out.push_back(pbmt::Tokenize(line, config.tokenizer).tokens);
    }
    return out;
  };
  pbmt::BleuReport report =
      pbmt::Bleu(tokenize_file(cand_path), tokenize_file(ref_path));
  std::cout << pbmt::FormatFixed(report.score, 2) << "\n";
  std::cerr << "BLEU " << pbmt::FormatFixed(report.score, 2) << "  BP "
            << pbmt::FormatFixed(report.brevity_penalty, 4) << "  lengths "
            << report.candidate_length << "/" << report.reference_length
            << "\n";
  return 0;
}

int RunExperimentCmd(const ConfigArgs& args, int id,
                     std::string report_path) {
  pbmt::PipelineConfig config = args.Resolve();
  pbmt::ParallelCorpus base = LoadBaseCorpus(config);
  pbmt::ExperimentReport report = pbmt::RunExperiment(id, base, config);
  if (report_path.empty()) {
    report_path =
        Join(config.work_dir, "experiment" + std::to_string(id) + ".json");
  }
  report.WriteJson(report_path);
  std::cout << "experiment " << id << ": BLEU "
            << pbmt::FormatFixed(report.bleu.score, 2) << " (train "
            << report.train_lines << " / test " << report.test_lines
            << " lines)\n";
  return 0;
}

int RunReport(const std::vector<std::string>& experiment_jsons,
              const std::string& out_path, const std::string& pre_path,
              const std::string& post_path, const std::string& ref_path,
              const std::string& label) {
  std::string output;
  if (!experiment_jsons.empty()) {
    std::vector<pbmt::ExperimentReport> reports;
    for (const auto& path : experiment_jsons) {
      reports.push_back(pbmt::ExperimentReport::FromJsonFile(path));
    }
    output += pbmt::ExperimentTableTsv(reports);
  }
  if (!pre_path.empty() || !post_path.empty()) {
    if (pre_path.empty() || post_path.empty() || ref_path.empty()) {
      throw pbmt::ValidationError(
          "pre/post comparison needs --pre, --post, and --ref");
    }
    pbmt::TokenizerOptions tok;
    auto tokenize_file = [&tok](const std::string& path) {
      std::vector<std::vector<std::string>> out;
      for (const auto& line : pbmt::ReadLines(path)) {
        out.push_back(pbmt::Tokenize(line, tok).tokens);
      }
      return out;
    };
    pbmt::PrePostReport pp =
        pbmt::ComparePrePost(tokenize_file(pre_path), tokenize_file(post_path),
                             tokenize_file(ref_path));
    output += pbmt::PrePostTableTsv(
        {{label.empty() ? "document" : label, pp.pre.score, pp.post.score}});
    output += "delta\t" + pbmt::FormatFixed(pp.delta, 2) + "\n";
  }
  if (output.empty()) {
    throw pbmt::ValidationError(
        "report needs experiment JSON files or a --pre/--post/--ref triple");
  }
  if (out_path.empty()) {
    std::cout << output;
  } else {
    pbmt::WriteFileAtomic(out_path, output);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pbmt - a compact phrase-based statistical machine translation "
               "toolkit"};
  app.require_subcommand(1);

  ConfigArgs prepare_args;
  CLI::App* prepare = app.add_subcommand(
      "prepare", "apply a corpus preparation variant and split train/test");
  AddConfigArgs(prepare, prepare_args);

  std::string sa_src, sa_tgt, sa_prefix = "aligned", sa_format = "all";
  std::string sa_src_lang = "en", sa_tgt_lang = "ckb";
  double sa_ratio = 1.0, sa_variance = 6.8;
  CLI::App* salign =
      app.add_subcommand("salign", "length-based sentence alignment");
  salign->add_option("--src", sa_src, "source document")->required();
  salign->add_option("--tgt", sa_tgt, "target document")->required();
  salign->add_option("--out-prefix", sa_prefix, "output path prefix");
  salign->add_option("--format", sa_format, "plaintext | xml | tmx | all")
      ->check(CLI::IsMember({"plaintext", "xml", "tmx", "all"}));
  salign->add_option("--mean-ratio", sa_ratio, "expected tgt/src char ratio");
  salign->add_option("--variance", sa_variance, "length model variance");
  salign->add_option("--src-lang", sa_src_lang, "TMX source language code");
  salign->add_option("--tgt-lang", sa_tgt_lang, "TMX target language code");

  ConfigArgs train_args;
  std::string train_src, train_tgt;
  CLI::App* train = app.add_subcommand(
      "train", "truecaser + word alignment + phrase table + language model");
  AddConfigArgs(train, train_args);
  train->add_option("--train-src", train_src, "training source text");
  train->add_option("--train-tgt", train_tgt, "training target text");

  ConfigArgs translate_args;
  std::string tr_input, tr_output, tr_report;
  CLI::App* translate =
      app.add_subcommand("translate", "decode a source text file");
  AddConfigArgs(translate, translate_args);
  translate->add_option("--input", tr_input, "source text, one sentence per line")
      ->required();
  translate->add_option("--output", tr_output, "translated text")->required();
  translate->add_option("--report", tr_report, "per-sentence JSONL report");

  ConfigArgs postedit_args;
  std::string pe_report, pe_output, pe_edits;
  CLI::App* postedit = app.add_subcommand(
      "postedit", "dictionary + external substitution of unknown words");
  AddConfigArgs(postedit, postedit_args);
  postedit->add_option("--report", pe_report, "translate JSONL report")
      ->required();
  postedit->add_option("--output", pe_output, "post-edited text")->required();
  postedit->add_option("--edits", pe_edits, "edit log TSV");

  ConfigArgs bleu_args;
  std::string bleu_cand, bleu_ref;
  CLI::App* bleu = app.add_subcommand("bleu", "corpus-level BLEU");
  AddConfigArgs(bleu, bleu_args);
  bleu->add_option("--cand", bleu_cand, "candidate translations")->required();
  bleu->add_option("--ref", bleu_ref, "reference translations")->required();

  ConfigArgs experiment_args;
  int experiment_id = 1;
  std::string experiment_report;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "run one of the seven corpus-preparation experiments");
  AddConfigArgs(experiment, experiment_args);
  experiment->add_option("id", experiment_id, "experiment id, 1..7")
      ->required()
      ->check(CLI::Range(1, 7));
  experiment->add_option("--report-out", experiment_report, "report JSON path");

  std::vector<std::string> report_jsons;
  std::string report_out, report_pre, report_post, report_ref, report_label;
  CLI::App* report =
      app.add_subcommand("report", "emit result tables from report files");
  report->add_option("jsons", report_jsons, "experiment report JSON files");
  report->add_option("--out", report_out, "output TSV (default stdout)");
  report->add_option("--pre", report_pre, "pre-editing translations");
  report->add_option("--post", report_post, "post-edited translations");
  report->add_option("--ref", report_ref, "references");
  report->add_option("--label", report_label, "row label for the comparison");

  try {
    app.parse(argc, argv);
    if (prepare->parsed()) return RunPrepare(prepare_args);
    if (salign->parsed()) {
      return RunSalign(sa_src, sa_tgt, sa_prefix, sa_format, sa_ratio,
                       sa_variance, sa_src_lang, sa_tgt_lang);
    }
    if (train->parsed()) return RunTrain(train_args, train_src, train_tgt);
    if (translate->parsed()) {
      return RunTranslate(translate_args, tr_input, tr_output, tr_report);
    }
    if (postedit->parsed()) {
      return RunPostedit(postedit_args, pe_report, pe_output, pe_edits);
    }
    if (bleu->parsed()) return RunBleu(bleu_args, bleu_cand, bleu_ref);
    if (experiment->parsed()) {
      return RunExperimentCmd(experiment_args, experiment_id,
                              experiment_report);
    }
    if (report->parsed()) {
      return RunReport(report_jsons, report_out, report_pre, report_post,
                       report_ref, report_label);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const pbmt::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pbmt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
