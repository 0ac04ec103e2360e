// support_test.cc
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

#include <gtest/gtest.h>

#include "pbmt/error.h"
#include "pbmt/io.h"
#include "pbmt/rng.h"
#include "pbmt/utf8.h"
#include "pbmt/xml.h"
#include "support/testutil.h"

namespace pbmt {
namespace {

TEST(Utf8, ValidatesSequences) {
  EXPECT_FALSE(utf8::FirstInvalidByte("plain ascii"));
  EXPECT_FALSE(utf8::FirstInvalidByte("کوردی ؟ ⟦x⟧"));
  std::string bad = "ok";
  bad.push_back(static_cast<char>(0xC0));  // overlong lead
  bad.push_back(static_cast<char>(0xAF));
  auto offset = utf8::FirstInvalidByte(bad);
  ASSERT_TRUE(offset.has_value());
  EXPECT_EQ(*offset, 2u);
}

TEST(Utf8, CountsCharactersNotBytes) {
  EXPECT_EQ(utf8::CharCount("abc"), 3u);
  EXPECT_EQ(utf8::CharCount("کورد"), 4u);
  EXPECT_EQ(utf8::CharCount(""), 0u);
}

TEST(Utf8, FoldsAsciiAndLatin1Only) {
  EXPECT_EQ(utf8::Fold("AbC"), "abc");
  EXPECT_EQ(utf8::Fold("École"), "école");
  EXPECT_EQ(utf8::Fold("کورد"), "کورد");
}

TEST(Utf8, UpperFirst) {
  EXPECT_EQ(utf8::UpperFirst("dose"), "Dose");
  EXPECT_EQ(utf8::UpperFirst("Dose"), "Dose");
  EXPECT_EQ(utf8::UpperFirst("énergie"), "Énergie");
  EXPECT_EQ(utf8::UpperFirst("کورد"), "کورد");
  EXPECT_EQ(utf8::UpperFirst(""), "");
}

TEST(Rng, DeterministicPerSeed) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    uint64_t va = a.Next();
    EXPECT_EQ(va, b.Next());
    (void)c;
  }
  Rng d(43);
  EXPECT_NE(Rng(42).Next(), d.Next());
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(rng.Below(13), 13u);
  }
}

TEST(Rng, ShufflePermutes) {
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> original = v;
  Rng rng(3);
  rng.Shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, original);
}

TEST(Rng, SampleWithoutReplacementSortedDistinct) {
  Rng rng(11);
  auto sample = rng.SampleWithoutReplacement(20, 7);
  ASSERT_EQ(sample.size(), 7u);
  for (size_t i = 1; i < sample.size(); ++i) {
    EXPECT_LT(sample[i - 1], sample[i]);
  }
}

TEST(Rng, DeriveSeedSeparatesStages) {
  EXPECT_EQ(DeriveSeed(5, "shuffle"), DeriveSeed(5, "shuffle"));
  EXPECT_NE(DeriveSeed(5, "shuffle"), DeriveSeed(5, "mix"));
  EXPECT_NE(DeriveSeed(5, "shuffle"), DeriveSeed(6, "shuffle"));
}

TEST(Io, LineRoundTrip) {
  testing::TempDir dir;
  std::vector<std::string> lines{"one", "", "تاقیکردنەوە", "last"};
  WriteLinesAtomic(dir.File("f.txt"), lines);
  EXPECT_EQ(ReadLines(dir.File("f.txt")), lines);
}

TEST(Io, ToleratesCrLf) {
  testing::TempDir dir;
  WriteFileAtomic(dir.File("crlf.txt"), "a\r\nb\r\n");
  std::vector<std::string> expected{"a", "b"};
  EXPECT_EQ(ReadLines(dir.File("crlf.txt")), expected);
}

TEST(Io, RejectsInvalidUtf8WithOffset) {
  testing::TempDir dir;
  std::string bytes = "fine\n";
  bytes.push_back(static_cast<char>(0xFF));
  WriteFileAtomic(dir.File("bad.txt"), bytes);
  try {
    ReadLines(dir.File("bad.txt"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("byte offset 5"), std::string::npos);
  }
}

TEST(Io, MissingFileIsIoError) {
  EXPECT_THROW(ReadLines("/nonexistent/nowhere.txt"), IoError);
}

TEST(Io, AtomicWriteLeavesNoTemp) {
  testing::TempDir dir;
  WriteFileAtomic(dir.File("out.bin"), "payload");
  EXPECT_FALSE(std::filesystem::exists(dir.File("out.bin.tmp")));
  EXPECT_EQ(testing::ReadAll(dir.File("out.bin")), "payload");
}

TEST(Io, FormatFixedNormalizesNegativeZero) {
  EXPECT_EQ(FormatFixed(-0.0, 6), "0.000000");
  EXPECT_EQ(FormatFixed(-1.5, 2), "-1.50");
}

TEST(Xml, ParsesElementsAttributesEntities) {
  auto root = xml::Parse(
      "<?xml version=\"1.0\"?>\n"
      "<corpus><brochure id=\"b&amp;1\" category=\"c\">"
      "<pair><src>a &lt; b</src><tgt>x</tgt></pair>"
      "</brochure></corpus>",
      "test");
  EXPECT_EQ(root.name, "corpus");
  ASSERT_EQ(root.children.size(), 1u);
  const auto& brochure = root.children[0];
  EXPECT_EQ(*brochure.FindAttribute("id"), "b&1");
  const auto* pair = brochure.FirstChild("pair");
  ASSERT_NE(pair, nullptr);
  EXPECT_EQ(pair->FirstChild("src")->text, "a < b");
}

TEST(Xml, ReportsLineNumbers) {
  try {
    xml::Parse("<corpus>\n<oops\n", "doc.xml");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.file(), "doc.xml");
    EXPECT_GE(e.line(), 2u);
  }
}

TEST(Xml, RejectsMismatchedTags) {
  EXPECT_THROW(xml::Parse("<a><b></a></b>", "t"), ParseError);
}

TEST(Xml, EscapeCoversSpecials) {
  EXPECT_EQ(xml::Escape("a<b>&\"'"), "a&lt;b&gt;&amp;&quot;&apos;");
}

}  // namespace
}  // namespace pbmt
