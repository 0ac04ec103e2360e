// testutil.h
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

#ifndef PBMT_TESTS_SUPPORT_TESTUTIL_H_
#define PBMT_TESTS_SUPPORT_TESTUTIL_H_

#include <filesystem>
#include <string>
#include <vector>

namespace pbmt::testing {

// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string File(const std::string& name) const;

 private:
  std::string path_;
};

std::string ReadAll(const std::string& path);

}  // namespace pbmt::testing

#endif  // PBMT_TESTS_SUPPORT_TESTUTIL_H_
