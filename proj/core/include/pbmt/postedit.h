// postedit.h
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
// Post-editing of decoder output: detect out-of-vocabulary tokens, replace
// them from a domain dictionary (longest match first, expert priority
// order), and fall back to an external translation service for the rest.
// Non-OOV tokens are never modified. The external client is pluggable; the
// offline stub resolves from a local map and performs no network I/O.

#ifndef PBMT_POSTEDIT_H_
#define PBMT_POSTEDIT_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pbmt/decoder.h"

namespace pbmt {

class MedicalDictionary {
 public:
  // Translations are in priority order; the first one wins.
  void Add(const std::string& term, std::vector<std::string> translations,
           std::string note = "");
  const std::vector<std::string>* Lookup(const std::string& folded_term) const;
  size_t max_key_tokens() const { return max_key_tokens_; }
  size_t size() const { return entries_.size(); }

  // TSV: source_term<TAB>translation_1;translation_2;...<TAB>note
  std::string ToTsv() const;
  void Save(const std::string& path) const;
  static MedicalDictionary Load(const std::string& path);

 private:
  std::map<std::string, std::vector<std::string>> entries_;  // folded keys
  std::map<std::string, std::string> notes_;
  size_t max_key_tokens_ = 1;
};

class ExternalTranslator {
 public:
  virtual ~ExternalTranslator() = default;
  // One term per request; nullopt on any failure.
  virtual std::optional<std::string> Translate(const std::string& term) = 0;
};

// Backed by a local map; never touches the network.
class OfflineStubTranslator : public ExternalTranslator {
 public:
  explicit OfflineStubTranslator(std::map<std::string, std::string> table)
      : table_(std::move(table)) {}
  std::optional<std::string> Translate(const std::string& term) override;

 private:
  std::map<std::string, std::string> table_;
};

// POSTs {q, source, target} JSON and reads {translatedText}; the shape of
// the public translation APIs, so a live adapter drops in unchanged.
class HttpTranslator : public ExternalTranslator {
 public:
  HttpTranslator(std::string endpoint, std::string source_lang,
                 std::string target_lang, int timeout_ms = 5000,
                 std::string bearer_token = "");
  std::optional<std::string> Translate(const std::string& term) override;

 private:
  std::string endpoint_;
  std::string source_lang_;
  std::string target_lang_;
  int timeout_ms_;
  std::string bearer_token_;
};

enum class EditSource { kNone, kDictionary, kExternal };

struct PostEdit {
  size_t position = 0;  // token position at the time of the edit pass
  std::string original;
  std::string replacement;
  EditSource source = EditSource::kNone;
};

struct PostEditReport {
  std::vector<PostEdit> edits;
};

// OOV positions of an output: the decoder's spans plus any token wrapped in
// the U+27E6/U+27E7 marker convention.
std::vector<size_t> DetectOov(const TranslationOutput& output);

// Dictionary pass. At each unresolved OOV position, the longest all-OOV
// window (up to the dictionary's longest key) with a case-folded match is
// replaced by the first-priority translation; its positions leave
// oov_spans. Untouched OOV positions are reported with source=none.
std::pair<TranslationOutput, PostEditReport> ApplyDictionary(
    const TranslationOutput& output, const MedicalDictionary& dict);

// External pass over the given positions (current output indexing). Failed
// lookups leave the token in place; the batch never aborts.
std::pair<TranslationOutput, PostEditReport> ResolveWithExternal(
    const TranslationOutput& output, const std::vector<size_t>& positions,
    ExternalTranslator& client);

struct PostEditResult {
  std::vector<TranslationOutput> outputs;
  std::vector<PostEditReport> reports;
};

// Dictionary pass, then the external pass for what remains (client may be
// null to skip it); all OOV markers are stripped from the final tokens.
PostEditResult PostEditPipeline(const std::vector<TranslationOutput>& outputs,
                                const MedicalDictionary& dict,
                                ExternalTranslator* client);

}  // namespace pbmt

#endif  // PBMT_POSTEDIT_H_
