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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sagd/config.hpp"
#include "sagd/csv.hpp"
#include "sagd/error.hpp"

using namespace sagd;

namespace {

const std::vector<KeySpec> kKeys{{"delta", "0.05", ""},
                                 {"steps", "10", ""},
                                 {"name", "gaussian", ""},
                                 {"flag", "false", ""},
                                 {"list", "", ""}};

}  // namespace

TEST_CASE("parsing key value text") {
  const KeyValueConfig cfg = KeyValueConfig::parse(
      "# leading comment\n"
      "delta = 0.1   # trailing comment\n"
      "\n"
      "  steps=200\r\n"
      "list = 1, 2.5 ,3\n");
  CHECK(cfg.entries().size() == 3);
  const ConfigReader r(cfg, kKeys);
  CHECK(r.get_double("delta") == 0.1);
  CHECK(r.get_size("steps") == 200);
  CHECK(r.get_string("name") == "gaussian");
  CHECK_FALSE(r.get_bool("flag"));
  CHECK(r.get_list("list") == std::vector<double>{1.0, 2.5, 3.0});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse("= 3\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(ConfigReader(KeyValueConfig::parse("delat = 0.1\n"), kKeys), ConfigError);

  const ConfigReader bad(KeyValueConfig::parse("delta = fast\nsteps = -3\nflag = maybe\n"),
                         kKeys);
  CHECK_THROWS_AS(bad.get_double("delta"), ConfigError);
  CHECK_THROWS_AS(bad.get_size("steps"), ConfigError);
  CHECK_THROWS_AS(bad.get_bool("flag"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/dir/file.cfg"), IoError);
}

TEST_CASE("number formatting is round-trip exact") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::nan("")) == "nan");
  for (double v : {1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("csv writer") {
  const std::string path = "test_config_writer.csv";
  {
    CsvWriter out(path);
    out.write_row({"a", "b"});
    out.write_row({"1", format_number(0.5)});
    out.close();
  }
  std::ifstream in(path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "a,b\n1,0.5\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(CsvWriter("/nonexistent/dir/out.csv"), IoError);
}
