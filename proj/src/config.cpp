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

#include "sagd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sagd/error.hpp"

namespace sagd {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string_view rest = s;
  if (trim(rest).empty()) {
    return parts;
  }
  for (;;) {
    const auto comma = rest.find(',');
    parts.emplace_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) {
      break;
    }
    rest.remove_prefix(comma + 1);
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument(text);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      text + "'");
  }
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    const auto hash = line.find('#');
    line = trim(line.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (cfg.has(key)) {
      throw ConfigError("config key '" + key + "' given twice");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (key.empty()) {
    throw ConfigError("config: empty key");
  }
  entries_[key] = value;
}

ConfigReader::ConfigReader(const KeyValueConfig& cfg,
                           const std::vector<KeySpec>& keys) {
  for (const KeySpec& k : keys) {
    values_[k.name] = k.default_value;
  }
  for (const auto& [key, value] : cfg.entries()) {
    auto it = values_.find(key);
    if (it == values_.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    it->second = value;
  }
}

const std::string& ConfigReader::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("config key '" + key + "' is not declared");
  }
  return it->second;
}

std::string ConfigReader::get_string(const std::string& key) const { return raw(key); }

double ConfigReader::get_double(const std::string& key) const {
  return parse_double(key, raw(key));
}

std::uint64_t ConfigReader::get_u64(const std::string& key) const {
  const std::string& text = raw(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + key +
                      "': expected a nonnegative integer, got '" + text + "'");
  }
  return v;
}

std::size_t ConfigReader::get_size(const std::string& key) const {
  return static_cast<std::size_t>(get_u64(key));
}

bool ConfigReader::get_bool(const std::string& key) const {
  const std::string& text = raw(key);
  if (text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError("config key '" + key + "': expected true or false, got '" +
                    text + "'");
}

std::vector<double> ConfigReader::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& part : split_commas(raw(key))) {
    out.push_back(parse_double(key, part));
  }
  return out;
}

std::vector<std::string> ConfigReader::get_words(const std::string& key) const {
  return split_commas(raw(key));
}

}  // namespace sagd
