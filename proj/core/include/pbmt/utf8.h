// utf8.h
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
// Minimal UTF-8 handling: validation, codepoint iteration, character counts,
// and the small amount of case mapping the pipeline needs (ASCII + Latin-1;
// Arabic script is caseless and passes through).

#ifndef PBMT_UTF8_H_
#define PBMT_UTF8_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pbmt {
namespace utf8 {

// Byte offset of the first invalid UTF-8 sequence, or nullopt if valid.
// Rejects overlong encodings, surrogates, and codepoints above U+10FFFF.
std::optional<size_t> FirstInvalidByte(std::string_view s);

// Decodes the codepoint starting at byte offset pos; advances pos past it.
// Precondition: s is valid UTF-8 and pos < s.size().
char32_t Decode(std::string_view s, size_t& pos);

void Encode(char32_t cp, std::string& out);
std::string Encode(char32_t cp);

std::vector<char32_t> Codepoints(std::string_view s);

// Number of codepoints (what "character count" means throughout).
size_t CharCount(std::string_view s);

// Simple case fold covering ASCII and Latin-1; other scripts unchanged.
char32_t FoldChar(char32_t cp);
std::string Fold(std::string_view s);

char32_t UpperChar(char32_t cp);

// Uppercases the first codepoint only, e.g. for recasing sentence starts.
std::string UpperFirst(std::string_view s);

bool IsAsciiSpace(char32_t cp);

}  // namespace utf8
}  // namespace pbmt

#endif  // PBMT_UTF8_H_
