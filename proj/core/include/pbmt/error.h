// error.h
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
// Exception hierarchy shared by all components. The CLI maps
// ValidationError (and subclasses) to exit code 1 and IoError to exit code 2.

#ifndef PBMT_ERROR_H_
#define PBMT_ERROR_H_

#include <stdexcept>
#include <string>

namespace pbmt {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad inputs: violated preconditions, malformed data, inconsistent config.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Malformed file contents; carries the 1-based line of the offending record.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& file, size_t line, const std::string& what)
      : ValidationError(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  size_t line() const { return line_; }

 private:
  std::string file_;
  size_t line_;
};

// Filesystem-level failures: missing files, unwritable paths.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace pbmt

#endif  // PBMT_ERROR_H_
