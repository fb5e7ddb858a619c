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

#include "sagd/csv.hpp"

#include <cmath>
#include <cstdio>

#include "sagd/error.hpp"

namespace sagd {

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

CsvWriter::CsvWriter(const std::string& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) {
    throw IoError("cannot open output file '" + path + "'");
  }
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out_.put(',');
    }
    out_ << fields[i];
  }
  out_.put('\n');
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) {
    throw IoError("write to '" + path_ + "' failed");
  }
  out_.close();
}

}  // namespace sagd
