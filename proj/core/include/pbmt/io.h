// io.h
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
// File helpers. All writers go through write-to-temp-then-rename so a failed
// run never leaves a partial artifact behind.

#ifndef PBMT_IO_H_
#define PBMT_IO_H_

#include <string>
#include <vector>

namespace pbmt {

std::string ReadFileBytes(const std::string& path);

// Splits on LF, tolerating a trailing CR per line and a missing final
// newline. Validates UTF-8; the error names the absolute byte offset.
std::vector<std::string> ReadLines(const std::string& path);

// Atomic replace: content lands in path only once fully written.
void WriteFileAtomic(const std::string& path, const std::string& content);

// One line per element, LF endings, no BOM.
void WriteLinesAtomic(const std::string& path,
                      const std::vector<std::string>& lines);

// Fixed-point float formatting used by every persisted format. Fixed
// notation with trailing-zero columns kept, negative zero normalized, so
// save -> load -> save is a byte fixed point.
std::string FormatFixed(double value, int decimals);

// Shortest %g-style formatting for report output.
std::string FormatShort(double value);

}  // namespace pbmt

#endif  // PBMT_IO_H_
