// bench_textprep.cc
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

#include "pbmt/evalmetrics.h"
#include "pbmt/salign.h"
#include "pbmt/textprep.h"

namespace {

void BM_Tokenize(benchmark::State& state) {
  const std::string line =
      "Take 2 tablets daily (after meals); do not exceed the stated dose! "
      "بۆ زانیاری زیاتر، پرسیار لە دەرمانسازەکەت بکە؟";
  for (auto _ : state) {
    auto tokens = pbmt::Tokenize(line);
    benchmark::DoNotOptimize(tokens);
  }
}
BENCHMARK(BM_Tokenize);

void BM_GaleChurchAlign(benchmark::State& state) {
  size_t n = static_cast<size_t>(state.range(0));
  std::vector<std::string> src, tgt;
  for (size_t i = 0; i < n; ++i) {
    src.push_back(std::string(30 + (i * 7) % 60, 'x'));
    tgt.push_back(std::string(30 + (i * 7) % 60, 'y'));
  }
  pbmt::SegmentedDocument sdoc =
      pbmt::SegmentedDocument::FromSentences(std::move(src));
  pbmt::SegmentedDocument tdoc =
      pbmt::SegmentedDocument::FromSentences(std::move(tgt));
  for (auto _ : state) {
    auto result = pbmt::GaleChurchAlign(sdoc, tdoc);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_GaleChurchAlign)->Arg(50)->Arg(200);

void BM_Bleu(benchmark::State& state) {
  std::vector<std::vector<std::string>> cand, ref;
  for (int s = 0; s < 500; ++s) {
    std::vector<std::string> sentence;
    for (int i = 0; i < 15; ++i) {
      sentence.push_back("w" + std::to_string((s + i * 13) % 64));
    }
    ref.push_back(sentence);
    sentence[s % sentence.size()] = "changed";
    cand.push_back(sentence);
  }
  for (auto _ : state) {
    auto report = pbmt::Bleu(cand, ref);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_Bleu);

}  // namespace

BENCHMARK_MAIN();
