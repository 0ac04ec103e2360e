// xml.cc
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

#include "pbmt/xml.h"

#include <cctype>

#include "pbmt/error.h"

namespace pbmt {
namespace xml {

const std::string* Element::FindAttribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::vector<const Element*> Element::ChildrenNamed(std::string_view name) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.name == name) out.push_back(&c);
  }
  return out;
}

const Element* Element::FirstChild(std::string_view name) const {
  for (const auto& c : children) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

class Parser {
 public:
  Parser(std::string_view s, const std::string& file) : s_(s), file_(file) {}

  Element ParseDocument() {
    SkipProlog();
    Element root = ParseElement();
    SkipWhitespaceAndComments();
    if (pos_ != s_.size()) Fail("trailing content after root element");
    return root;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) {
    throw ParseError(file_, line_, msg);
  }

  bool Eof() const { return pos_ >= s_.size(); }

  char Peek() const { return s_[pos_]; }

  char Take() {
    char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool StartsWith(std::string_view prefix) const {
    return s_.substr(pos_, prefix.size()) == prefix;
  }

  void Expect(char c) {
    if (Eof() || Peek() != c) Fail(std::string("expected '") + c + "'");
    Take();
  }

  void SkipUntil(std::string_view marker) {
    while (!Eof() && !StartsWith(marker)) Take();
    if (Eof()) Fail("unterminated construct, expected " + std::string(marker));
    for (size_t i = 0; i < marker.size(); ++i) Take();
  }

  void SkipWhitespace() {
    while (!Eof() && std::isspace(static_cast<unsigned char>(Peek()))) Take();
  }

  void SkipWhitespaceAndComments() {
    for (;;) {
      SkipWhitespace();
      if (StartsWith("<!--")) {
        SkipUntil("-->");
      } else {
        return;
      }
    }
  }

  void SkipProlog() {
    for (;;) {
      SkipWhitespaceAndComments();
      if (StartsWith("<?")) {
        SkipUntil("?>");
      } else if (StartsWith("<!DOCTYPE")) {
        SkipUntil(">");
      } else {
        return;
      }
    }
  }

  std::string ParseName() {
    size_t start = pos_;
    while (!Eof()) {
      char c = Peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == '-' || c == '.' || c == ':') {
        Take();
      } else {
        break;
      }
    }
    if (pos_ == start) Fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string DecodeEntity() {
    // Called at '&'.
    Take();
    size_t start = pos_;
    while (!Eof() && Peek() != ';') {
      if (pos_ - start > 8) Fail("malformed entity");
      Take();
    }
    if (Eof()) Fail("unterminated entity");
    std::string name(s_.substr(start, pos_ - start));
    Take();  // ';'
    if (name == "lt") return "<";
    if (name == "gt") return ">";
    if (name == "amp") return "&";
    if (name == "quot") return "\"";
    if (name == "apos") return "'";
    Fail("unknown entity &" + name + ";");
  }

  std::string ParseAttributeValue() {
    if (Eof() || (Peek() != '"' && Peek() != '\'')) {
      Fail("expected quoted attribute value");
    }
    char quote = Take();
    std::string value;
    while (!Eof() && Peek() != quote) {
      if (Peek() == '&') {
        value += DecodeEntity();
      } else if (Peek() == '<') {
        Fail("'<' in attribute value");
      } else {
        value.push_back(Take());
      }
    }
    if (Eof()) Fail("unterminated attribute value");
    Take();
    return value;
  }

  Element ParseElement() {
    Expect('<');
    Element elem;
    elem.line = line_;
    elem.name = ParseName();
    for (;;) {
      SkipWhitespace();
      if (Eof()) Fail("unterminated tag <" + elem.name);
      if (Peek() == '/') {
        Take();
        Expect('>');
        return elem;  // self-closing
      }
      if (Peek() == '>') {
        Take();
        break;
      }
      std::string key = ParseName();
      SkipWhitespace();
      Expect('=');
      SkipWhitespace();
      elem.attributes.emplace_back(key, ParseAttributeValue());
    }
    // Content.
    for (;;) {
      if (Eof()) Fail("missing </" + elem.name + ">");
      if (StartsWith("<!--")) {
        SkipUntil("-->");
        continue;
      }
      if (StartsWith("</")) {
        Take();
        Take();
        std::string closing = ParseName();
        if (closing != elem.name) {
          Fail("mismatched closing tag </" + closing + ">, expected </" +
               elem.name + ">");
        }
        SkipWhitespace();
        Expect('>');
        return elem;
      }
      if (Peek() == '<') {
        elem.children.push_back(ParseElement());
        continue;
      }
      if (Peek() == '&') {
        elem.text += DecodeEntity();
        continue;
      }
      elem.text.push_back(Take());
    }
  }

  std::string_view s_;
  std::string file_;
  size_t pos_ = 0;
  size_t line_ = 1;
};

}  // namespace

Element Parse(std::string_view content, const std::string& file_name) {
  Parser parser(content, file_name);
  return parser.ParseDocument();
}

std::string Escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace xml
}  // namespace pbmt
