// postedit.cc
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

#include "pbmt/postedit.h"

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/utf8.h"

namespace pbmt {

namespace {

constexpr const char* kOovOpen = "⟦";
constexpr const char* kOovClose = "⟧";

bool HasMarker(const std::string& token) {
  return token.size() >= 6 && token.rfind(kOovOpen, 0) == 0 &&
         token.compare(token.size() - 3, 3, kOovClose) == 0;
}

std::string StripMarker(const std::string& token) {
  if (!HasMarker(token)) return token;
  return token.substr(3, token.size() - 6);
}

std::vector<std::string> SplitWords(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

}  // namespace

void MedicalDictionary::Add(const std::string& term,
                            std::vector<std::string> translations,
                            std::string note) {
  if (translations.empty()) {
    throw ValidationError("dictionary entry '" + term +
                          "' has no translations");
  }
  for (const auto& t : translations) {
    if (t.empty()) {
      throw ValidationError("dictionary entry '" + term +
                            "' has an empty translation");
    }
  }
  std::string folded = utf8::Fold(term);
  if (!entries_.emplace(folded, std::move(translations)).second) {
    throw ValidationError("dictionary key '" + folded +
                          "' appears twice after case folding");
  }
  if (!note.empty()) notes_[folded] = std::move(note);
  max_key_tokens_ = std::max(max_key_tokens_, SplitWords(folded).size());
}

const std::vector<std::string>* MedicalDictionary::Lookup(
    const std::string& folded_term) const {
  auto it = entries_.find(folded_term);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string MedicalDictionary::ToTsv() const {
  std::string out;
  for (const auto& [term, translations] : entries_) {
    out += term;
    out += '\t';
    for (size_t i = 0; i < translations.size(); ++i) {
      if (i > 0) out += ';';
      out += translations[i];
    }
    out += '\t';
    auto note = notes_.find(term);
    if (note != notes_.end()) out += note->second;
    out += '\n';
  }
  return out;
}

void MedicalDictionary::Save(const std::string& path) const {
  WriteFileAtomic(path, ToTsv());
}

MedicalDictionary MedicalDictionary::Load(const std::string& path) {
  MedicalDictionary dict;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty() || line[0] == '#') continue;
    size_t t1 = line.find('\t');
    if (t1 == std::string::npos) {
      throw ParseError(path, ln + 1, "expected term<TAB>translations[<TAB>note]");
    }
    size_t t2 = line.find('\t', t1 + 1);
    std::string term = line.substr(0, t1);
    std::string trans = line.substr(
        t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1);
    std::string note = t2 == std::string::npos ? "" : line.substr(t2 + 1);
    std::vector<std::string> translations;
    size_t pos = 0;
    while (pos <= trans.size()) {
      size_t semi = trans.find(';', pos);
      if (semi == std::string::npos) semi = trans.size();
      if (semi > pos) translations.push_back(trans.substr(pos, semi - pos));
      pos = semi + 1;
    }
    try {
      dict.Add(term, std::move(translations), std::move(note));
    } catch (const ValidationError& e) {
      throw ParseError(path, ln + 1, e.what());
    }
  }
  return dict;
}

std::optional<std::string> OfflineStubTranslator::Translate(
    const std::string& term) {
  auto it = table_.find(term);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

HttpTranslator::HttpTranslator(std::string endpoint, std::string source_lang,
                               std::string target_lang, int timeout_ms,
                               std::string bearer_token)
    : endpoint_(std::move(endpoint)),
      source_lang_(std::move(source_lang)),
      target_lang_(std::move(target_lang)),
      timeout_ms_(timeout_ms),
      bearer_token_(std::move(bearer_token)) {}

std::optional<std::string> HttpTranslator::Translate(const std::string& term) {
  // endpoint_ looks like http://host:port/path
  std::string rest = endpoint_;
  if (rest.rfind("http://", 0) == 0) rest = rest.substr(7);
  size_t slash = rest.find('/');
  std::string host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

  httplib::Client client(("http://" + host_port).c_str());
  client.set_connection_timeout(0, timeout_ms_ * 1000);
  client.set_read_timeout(0, timeout_ms_ * 1000);
  httplib::Headers headers;
  if (!bearer_token_.empty()) {
    headers.emplace("Authorization", "Bearer " + bearer_token_);
  }
  nlohmann::json body = {
      {"q", term}, {"source", source_lang_}, {"target", target_lang_}};
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res || res->status != 200) return std::nullopt;
  try {
    nlohmann::json reply = nlohmann::json::parse(res->body);
    if (!reply.contains("translatedText")) return std::nullopt;
    std::string text = reply["translatedText"].get<std::string>();
    if (text.empty()) return std::nullopt;
    return text;
  } catch (const nlohmann::json::parse_error&) {
    return std::nullopt;
  }
}

std::vector<size_t> DetectOov(const TranslationOutput& output) {
  std::set<size_t> positions(output.oov_spans.begin(), output.oov_spans.end());
  for (size_t i = 0; i < output.tokens.size(); ++i) {
    if (HasMarker(output.tokens[i])) positions.insert(i);
  }
  return {positions.begin(), positions.end()};
}

std::pair<TranslationOutput, PostEditReport> ApplyDictionary(
    const TranslationOutput& output, const MedicalDictionary& dict) {
  std::vector<size_t> oov = DetectOov(output);
  std::set<size_t> oov_set(oov.begin(), oov.end());

  TranslationOutput edited;
  edited.model_score = output.model_score;
  edited.segmentation = output.segmentation;
  PostEditReport report;

  size_t p = 0;
  const size_t n = output.tokens.size();
  while (p < n) {
    if (!oov_set.count(p)) {
      edited.tokens.push_back(output.tokens[p]);
      ++p;
      continue;
    }
    // Longest all-OOV window starting here with a dictionary hit.
    size_t matched = 0;
    const std::vector<std::string>* translations = nullptr;
    size_t longest = std::min(dict.max_key_tokens(), n - p);
    for (size_t len = longest; len >= 1; --len) {
      bool all_oov = true;
      std::string key;
      for (size_t k = 0; k < len; ++k) {
        if (!oov_set.count(p + k)) {
          all_oov = false;
          break;
        }
        if (k > 0) key += ' ';
        key += StripMarker(output.tokens[p + k]);
      }
      if (!all_oov) continue;
      translations = dict.Lookup(utf8::Fold(key));
      if (translations != nullptr) {
        matched = len;
        PostEdit edit;
        edit.position = p;
        edit.original = key;
        edit.replacement = (*translations)[0];
        edit.source = EditSource::kDictionary;
        report.edits.push_back(std::move(edit));
        break;
      }
    }
    if (matched == 0) {
      std::string original = StripMarker(output.tokens[p]);
      edited.oov_spans.push_back(edited.tokens.size());
      edited.tokens.push_back(output.tokens[p]);
      report.edits.push_back({p, original, original, EditSource::kNone});
      ++p;
      continue;
    }
    for (const auto& word : SplitWords((*translations)[0])) {
      edited.tokens.push_back(word);
    }
    p += matched;
  }
  return {std::move(edited), std::move(report)};
}

std::pair<TranslationOutput, PostEditReport> ResolveWithExternal(
    const TranslationOutput& output, const std::vector<size_t>& positions,
    ExternalTranslator& client) {
  TranslationOutput edited;
  edited.model_score = output.model_score;
  edited.segmentation = output.segmentation;
  PostEditReport report;
  std::set<size_t> wanted(positions.begin(), positions.end());

  for (size_t p = 0; p < output.tokens.size(); ++p) {
    if (!wanted.count(p)) {
      edited.tokens.push_back(output.tokens[p]);
      continue;
    }
    std::string term = StripMarker(output.tokens[p]);
    std::optional<std::string> translated = client.Translate(term);
    if (translated) {
      for (const auto& word : SplitWords(*translated)) {
        edited.tokens.push_back(word);
      }
      report.edits.push_back({p, term, *translated, EditSource::kExternal});
    } else {
      std::cerr << "postedit: external lookup failed for '" << term
                << "', keeping token\n";
      edited.oov_spans.push_back(edited.tokens.size());
      edited.tokens.push_back(output.tokens[p]);
      report.edits.push_back({p, term, term, EditSource::kNone});
    }
  }
  return {std::move(edited), std::move(report)};
}

PostEditResult PostEditPipeline(const std::vector<TranslationOutput>& outputs,
                                const MedicalDictionary& dict,
                                ExternalTranslator* client) {
  PostEditResult result;
  result.outputs.reserve(outputs.size());
  result.reports.reserve(outputs.size());
  for (const auto& output : outputs) {
    auto [after_dict, dict_report] = ApplyDictionary(output, dict);
    PostEditReport report = std::move(dict_report);
    TranslationOutput current = std::move(after_dict);
    if (client != nullptr && !current.oov_spans.empty()) {
      // Drop the dictionary pass's `none` placeholders: the external pass
      // re-reports every position it visits.
      std::erase_if(report.edits, [](const PostEdit& e) {
        return e.source == EditSource::kNone;
      });
      auto [after_ext, ext_report] =
          ResolveWithExternal(current, current.oov_spans, *client);
      current = std::move(after_ext);
      report.edits.insert(report.edits.end(), ext_report.edits.begin(),
                          ext_report.edits.end());
    }
    for (auto& token : current.tokens) token = StripMarker(token);
    result.outputs.push_back(std::move(current));
    result.reports.push_back(std::move(report));
  }
  return result;
}

}  // namespace pbmt
