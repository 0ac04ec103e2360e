// synth_main.cc
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
// Generates synthetic bilingual corpora so the pipeline can be exercised
// without any real data: a copy language, a bijective word-for-word
// language, or the 319-brochure structured evaluation corpus.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pbmt/corpus.h"
#include "pbmt/error.h"
#include "pbmt/synth.h"

int main(int argc, char** argv) {
  CLI::App app{"pbmt-synth - synthetic corpus generator"};

  std::string kind = "copy";
  std::string out_prefix = "synth";
  pbmt::SynthOptions options;
  app.add_option("--kind", kind, "copy | bijective | brochures")
      ->check(CLI::IsMember({"copy", "bijective", "brochures"}));
  app.add_option("--out-prefix", out_prefix,
                 "writes <prefix>.src/<prefix>.tgt, or <prefix>.xml for "
                 "brochures");
  app.add_option("--sentences", options.sentences, "sentence pair count");
  app.add_option("--vocab", options.vocab, "vocabulary size");
  app.add_option("--min-len", options.min_len, "minimum sentence length");
  app.add_option("--max-len", options.max_len, "maximum sentence length");
  app.add_option("--seed", options.seed, "random seed");
  app.add_flag("!--no-capitalize", options.capitalize,
               "keep sentences all-lowercase");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kind == "brochures") {
      pbmt::ParallelCorpus corpus = pbmt::MakeBrochureEvalCorpus();
      pbmt::SaveBrochureXml(corpus, out_prefix + ".xml");
      std::cerr << "wrote " << out_prefix << ".xml: "
                << corpus.brochures.size() << " brochures, "
                << corpus.pair_count() << " pairs\n";
      return 0;
    }
    pbmt::ParallelCorpus corpus = kind == "copy"
                                      ? pbmt::MakeCopyCorpus(options)
                                      : pbmt::MakeBijectiveCorpus(options);
    pbmt::SavePlaintext(corpus, out_prefix + ".src", out_prefix + ".tgt");
    std::cerr << "wrote " << out_prefix << ".src/.tgt: "
              << corpus.pair_count() << " pairs\n";
  } catch (const pbmt::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
