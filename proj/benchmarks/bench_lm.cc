// bench_lm.cc
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

#include "pbmt/lm.h"
#include "pbmt/synth.h"
#include "pbmt/textprep.h"
#include "pbmt/wordalign.h"

namespace {

std::vector<std::vector<std::string>> BenchCorpus(size_t sentences) {
  pbmt::SynthOptions options;
  options.sentences = sentences;
  options.vocab = 300;
  options.seed = 13;
  options.capitalize = false;
  pbmt::ParallelCorpus corpus = pbmt::MakeCopyCorpus(options);
  std::vector<std::vector<std::string>> out;
  for (const auto* pair : corpus.FlatPairs()) {
    out.push_back(pbmt::Tokenize(pair->target).tokens);
  }
  return out;
}

void BM_CountAndEstimateKn(benchmark::State& state) {
  auto corpus = BenchCorpus(static_cast<size_t>(state.range(0)));
  for (auto _ : state) {
    pbmt::NGramModel model = pbmt::EstimateKn(pbmt::CountNgrams(corpus, 3));
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_CountAndEstimateKn)->Arg(500)->Arg(2000);

void BM_SentenceLogProb(benchmark::State& state) {
  static auto corpus = BenchCorpus(2000);
  static pbmt::NGramModel model =
      pbmt::EstimateKn(pbmt::CountNgrams(corpus, 3));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.SentenceLogProb(corpus[i % corpus.size()]));
    ++i;
  }
}
BENCHMARK(BM_SentenceLogProb);

void BM_TrainIbm1(benchmark::State& state) {
  pbmt::SynthOptions options;
  options.sentences = static_cast<size_t>(state.range(0));
  options.vocab = 150;
  options.seed = 3;
  pbmt::ParallelCorpus corpus = pbmt::MakeBijectiveCorpus(options);
  std::vector<pbmt::TokenPair> pairs;
  for (const auto* pair : corpus.FlatPairs()) {
    pairs.push_back({pbmt::Tokenize(pair->source).tokens,
                     pbmt::Tokenize(pair->target).tokens});
  }
  pbmt::EmConfig config;
  config.iterations = 5;
  for (auto _ : state) {
    auto result = pbmt::TrainIbm1(pairs, config, pbmt::Direction::kSrcToTgt);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_TrainIbm1)->Arg(500)->Arg(2000);

}  // namespace
