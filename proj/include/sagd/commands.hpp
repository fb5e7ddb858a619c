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
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sagd/config.hpp"
#include "sagd/metrics.hpp"
#include "sagd/rng.hpp"

namespace sagd {

struct CommandSpec {
  std::string name;
  std::string summary;
  std::vector<KeySpec> keys;
  std::string columns;  // CSV header of the main output
};

const std::vector<CommandSpec>& command_specs();
const CommandSpec* find_command(std::string_view name);

// Human-readable key listing for --help.
std::string command_help(const CommandSpec& spec);

struct RunOptions {
  std::uint64_t seed = 0;
  std::string out_path;
  std::size_t threads = 1;
  std::ostream* warnings = nullptr;
};

// Runs one experiment subcommand and writes its CSV output(s). Output is a
// function of (config, seed) only; the thread count never changes a byte.
void run_command(std::string_view name, const KeyValueConfig& cfg,
                 const RunOptions& opts);

// True latent laws of the generator experiment: "normal" N(1, 0.5^2),
// "exponential" with mean 2, "mixture" 0.4 N(0, 0.5^2) + 0.6 N(3, 0.5^2).
Cdf1D named_latent(std::string_view name);
double draw_named_latent(std::string_view name, RngStream& rng);

}  // namespace sagd
