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

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sagd/sagd.h"

namespace {

struct Invocation {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_path;
  unsigned threads = 1;
};

int exit_code(sagd_status status) {
  switch (status) {
    case SAGD_OK:
      return 0;
    case SAGD_CONFIG_ERROR:
    case SAGD_DOMAIN_ERROR:
    case SAGD_INVALID_ARGUMENT:
      return 2;
    case SAGD_DIVERGENCE:
      return 3;
    case SAGD_IO_ERROR:
      return 4;
    default:
      return 1;
  }
}

int run(const std::string& name, const Invocation& inv) {
  sagd_config* cfg = nullptr;
  sagd_status status = sagd_config_load(inv.config_path.c_str(), &cfg);
  if (status == SAGD_OK) {
    status = sagd_command_run(name.c_str(), cfg, inv.seed, inv.out_path.c_str(),
                              inv.threads);
  }
  sagd_config_destroy(cfg);
  if (status != SAGD_OK) {
    std::fprintf(stderr, "sagd %s: %s\n", name.c_str(), sagd_last_error());
  }
  return exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic approximation with Langevin time-average gradients"};
  app.set_version_flag("--version", std::string(sagd_version()));
  app.require_subcommand(1);

  Invocation inv;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sagd_command_count(); ++i) {
    const std::string name = sagd_command_name(i);
    names.push_back(name);
    CLI::App* sub = app.add_subcommand(name, sagd_command_summary(name.c_str()));
    sub->footer(sagd_command_help(name.c_str()));
    sub->add_option("--config", inv.config_path, "key=value config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", inv.seed, "master seed")->required();
    sub->add_option("--out", inv.out_path, "output CSV path")->required();
    sub->add_option("--threads", inv.threads, "worker threads")
        ->check(CLI::Range(1u, 1024u));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const std::string& name : names) {
    if (app.got_subcommand(name)) {
      return run(name, inv);
    }
  }
  return 2;
}
