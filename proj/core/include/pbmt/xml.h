// xml.h
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
// A small XML reader covering the subset this toolkit emits and consumes
// (brochure corpora and TMX): elements, attributes, character data, the five
// predefined entities, comments, an XML declaration, and a DOCTYPE line.
// Namespaces, CDATA, and processing instructions are out of scope. Errors
// carry 1-based line numbers.

#ifndef PBMT_XML_H_
#define PBMT_XML_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pbmt {
namespace xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;  // concatenated character data directly inside
  size_t line = 0;   // line of the opening tag

  const std::string* FindAttribute(std::string_view key) const;
  // All direct children with the given tag name, in document order.
  std::vector<const Element*> ChildrenNamed(std::string_view name) const;
  const Element* FirstChild(std::string_view name) const;
};

// Parses a whole document; file_name is used in error messages only.
Element Parse(std::string_view content, const std::string& file_name);

// Escapes &, <, >, ", ' for use in character data or attribute values.
std::string Escape(std::string_view raw);

}  // namespace xml
}  // namespace pbmt

#endif  // PBMT_XML_H_
