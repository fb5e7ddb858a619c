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

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sagd {

// Flat `key = value` configuration, one pair per line. `#` starts a comment
// anywhere on a line. Duplicate keys are errors.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct KeySpec {
  std::string name;
  std::string default_value;
  std::string help;
};

// Typed view over a KeyValueConfig restricted to a declared key set. Keys not
// in `keys` raise ConfigError on construction; missing keys take defaults.
class ConfigReader {
 public:
  ConfigReader(const KeyValueConfig& cfg, const std::vector<KeySpec>& keys);

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  // comma-separated numbers; empty string gives an empty list
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> get_words(const std::string& key) const;

 private:
  const std::string& raw(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

}  // namespace sagd
