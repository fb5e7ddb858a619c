// Copyright 2026 The sagd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace sagd {

// 17 significant digits, so every double round-trips exactly. NaN prints as
// "nan" regardless of sign.
std::string format_number(double v);

// Comma-separated output with '\n' line endings; fields are never quoted.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void write_row(const std::vector<std::string>& fields);
  // Flushes and throws IoError if any write failed.
  void close();

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace sagd
