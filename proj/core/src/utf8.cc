// utf8.cc
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

#include "pbmt/utf8.h"

namespace pbmt {
namespace utf8 {

namespace {

inline int SequenceLength(uint8_t lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 0;  // continuation or invalid lead byte
}

}  // namespace

std::optional<size_t> FirstInvalidByte(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    uint8_t lead = static_cast<uint8_t>(s[i]);
    int len = SequenceLength(lead);
    if (len == 0) return i;
    if (i + len > s.size()) return i;
    char32_t cp = 0;
    switch (len) {
      case 1:
        cp = lead;
        break;
      case 2:
        cp = lead & 0x1F;
        break;
      case 3:
        cp = lead & 0x0F;
        break;
      case 4:
        cp = lead & 0x07;
        break;
    }
    for (int k = 1; k < len; ++k) {
      uint8_t b = static_cast<uint8_t>(s[i + k]);
      if ((b & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (b & 0x3F);
    }
    // Overlong, surrogate, or out-of-range encodings are invalid.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMin[len]) return i;
    if (cp >= 0xD800 && cp <= 0xDFFF) return i;
    if (cp > 0x10FFFF) return i;
    i += len;
  }
  return std::nullopt;
}

char32_t Decode(std::string_view s, size_t& pos) {
  uint8_t lead = static_cast<uint8_t>(s[pos]);
  int len = SequenceLength(lead);
  char32_t cp = 0;
  switch (len) {
    case 1:
      cp = lead;
      break;
    case 2:
      cp = lead & 0x1F;
      break;
    case 3:
      cp = lead & 0x0F;
      break;
    default:
      cp = lead & 0x07;
      len = 4;
      break;
  }
  for (int k = 1; k < len; ++k) {
    cp = (cp << 6) | (static_cast<uint8_t>(s[pos + k]) & 0x3F);
  }
  pos += len;
  return cp;
}

void Encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string Encode(char32_t cp) {
  std::string out;
  Encode(cp, out);
  return out;
}

std::vector<char32_t> Codepoints(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  size_t pos = 0;
  while (pos < s.size()) cps.push_back(Decode(s, pos));
  return cps;
}

size_t CharCount(std::string_view s) {
  size_t n = 0;
  size_t pos = 0;
  while (pos < s.size()) {
    Decode(s, pos);
    ++n;
  }
  return n;
}

char32_t FoldChar(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  // Latin-1 uppercase block, excluding the multiplication sign at U+00D7.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

std::string Fold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t pos = 0;
  while (pos < s.size()) Encode(FoldChar(Decode(s, pos)), out);
  return out;
}

char32_t UpperChar(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 32;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 32;
  return cp;
}

std::string UpperFirst(std::string_view s) {
  if (s.empty()) return std::string(s);
  size_t pos = 0;
  char32_t first = Decode(s, pos);
  std::string out = Encode(UpperChar(first));
  out.append(s.substr(pos));
  return out;
}

bool IsAsciiSpace(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' ||
         cp == U'\f' || cp == U'\v';
}

}  // namespace utf8
}  // namespace pbmt
