// lm.h
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
// Backoff n-gram language model with interpolated Kneser-Ney smoothing and
// ARPA interchange.
//
// Counting: sentences are padded with one <s> and one </s>; an event is any
// n-gram window whose last token is a real word or </s>. The bare <s>
// unigram is context, not an event, so the unigram event total equals
// token count + sentence count.
//
// Estimation: the highest order uses raw counts; lower orders use
// continuation counts, except grams starting with <s>, which keep raw
// counts (they can never be continued). The unigram level interpolates with
// the uniform distribution over vocabulary + <unk>, which gives <unk> its
// probability mass. Each observed context is exactly normalized over
// vocabulary + <unk>; the model is stored in backoff form, which reproduces
// the interpolated probabilities for unseen n-grams.

#ifndef PBMT_LM_H_
#define PBMT_LM_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pbmt {

class LmVocab {
 public:
  static constexpr uint32_t kUnkId = 0;
  static constexpr uint32_t kBosId = 1;
  static constexpr uint32_t kEosId = 2;

  LmVocab();

  uint32_t IdOf(const std::string& token);           // inserting
  uint32_t Lookup(const std::string& token) const;   // kUnkId if absent
  const std::string& TokenOf(uint32_t id) const { return tokens_[id]; }
  size_t size() const { return tokens_.size(); }

 private:
  std::map<std::string, uint32_t> ids_;
  std::vector<std::string> tokens_;
};

using NGramKey = std::vector<uint32_t>;

struct NGramCounts {
  int order = 3;
  LmVocab vocab;
  // events[n-1]: n-gram -> frequency, n = 1..order.
  std::vector<std::map<NGramKey, uint64_t>> events;
  uint64_t sentence_count = 0;

  uint64_t TotalEvents(int n) const;
};

NGramCounts CountNgrams(const std::vector<std::vector<std::string>>& sentences,
                        int order);

struct KnDiscount {
  enum class Mode { kFixed, kCountOfCounts } mode = Mode::kFixed;
  double fixed = 0.75;  // must lie in (0,1)
};

class NGramModel {
 public:
  int order = 0;
  LmVocab vocab;
  // log_prob[n-1]: conditional log10 probability per observed n-gram.
  std::vector<std::map<NGramKey, double>> log_prob;
  // backoff[k-1]: log10 backoff weight per observed k-gram context.
  std::vector<std::map<NGramKey, double>> backoff;
  std::vector<double> discounts;  // per order, as used in estimation

  // log10 P(word | context); context may be any length, the longest usable
  // suffix is taken. Unknown words map to <unk>.
  double WordLogProb(const NGramKey& context, uint32_t word) const;

  // log10 probability of the whole sentence including the </s> transition.
  double SentenceLogProb(const std::vector<std::string>& tokens) const;

  // 10^(-total log10 / token count), </s> counted per sentence.
  double Perplexity(const std::vector<std::vector<std::string>>& corpus) const;

  std::string ToArpa() const;
  void SaveArpa(const std::string& path) const;
  static NGramModel LoadArpa(const std::string& path);
};

NGramModel EstimateKn(const NGramCounts& counts, const KnDiscount& discount = {});

}  // namespace pbmt

#endif  // PBMT_LM_H_
