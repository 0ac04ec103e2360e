// rng.h
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
// Deterministic random source. All randomized stages draw from this engine
// with a fixed algorithm, so equal seeds give byte-identical artifacts on
// every platform; the standard library's distributions are avoided because
// their output is implementation-defined.

#ifndef PBMT_RNG_H_
#define PBMT_RNG_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace pbmt {

// splitmix64; passes through all 2^64 states, good enough for shuffling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t Next();

  // Unbiased integer in [0, n), n >= 1, via rejection sampling.
  uint64_t Below(uint64_t n);

  // In-place Fisher-Yates.
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), returned in increasing order.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

 private:
  uint64_t state_;
};

// Stage seeds are derived from the single global seed and a stage label, so
// each stage is independently reproducible.
uint64_t DeriveSeed(uint64_t global_seed, std::string_view stage);

}  // namespace pbmt

#endif  // PBMT_RNG_H_
