// bench_decoder.cc
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

#include <benchmark/benchmark.h>

#include "pbmt/decoder.h"
#include "pbmt/pipeline.h"
#include "pbmt/synth.h"
#include "pbmt/textprep.h"

namespace {

struct DecoderFixture {
  pbmt::TrainedModels models;
  std::vector<std::vector<std::string>> sentences;

  DecoderFixture() {
    pbmt::SynthOptions options;
    options.sentences = 1500;
    options.vocab = 120;
    options.seed = 7;
    pbmt::ParallelCorpus corpus = pbmt::MakeBijectiveCorpus(options);
    pbmt::PipelineConfig config;
    config.em.iterations = 4;
    models = pbmt::TrainPipeline(corpus, config);
    for (size_t i = 0; i < 64; ++i) {
      const auto* pair = corpus.FlatPairs()[i];
      sentences.push_back(pbmt::Tokenize(pair->source).tokens);
    }
  }
};

DecoderFixture& Fixture() {
  static DecoderFixture fixture;
  return fixture;
}

void BM_DecodeSentence(benchmark::State& state) {
  DecoderFixture& f = Fixture();
  pbmt::FeatureWeights weights;
  pbmt::DecoderConfig config;
  config.beam_size = static_cast<size_t>(state.range(0));
  size_t i = 0;
  for (auto _ : state) {
    auto out = pbmt::Decode(f.sentences[i % f.sentences.size()],
                            f.models.phrase_table, f.models.lm, weights,
                            config);
    benchmark::DoNotOptimize(out);
    ++i;
  }
}
BENCHMARK(BM_DecodeSentence)->Arg(10)->Arg(100)->Arg(500);

void BM_PhraseExtraction(benchmark::State& state) {
  // A dense-ish diagonal alignment of the given length.
  size_t n = static_cast<size_t>(state.range(0));
  pbmt::AlignmentMatrix alignment;
  alignment.src_len = n;
  alignment.tgt_len = n;
  for (uint32_t i = 0; i < n; ++i) {
    alignment.Add(i, i);
    if (i + 1 < n && i % 3 == 0) alignment.Add(i, i + 1);
  }
  for (auto _ : state) {
    auto spans = pbmt::ExtractPhrases(alignment, 7);
    benchmark::DoNotOptimize(spans);
  }
}
BENCHMARK(BM_PhraseExtraction)->Arg(10)->Arg(40)->Arg(80);

}  // namespace
