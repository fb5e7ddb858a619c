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

#include <array>
#include <cstdint>

namespace sagd {

// splitmix64 finalizer; used for seeding and for deriving substream ids.
std::uint64_t mix64(std::uint64_t x);

// Combines two identifiers into one stream id, e.g. (outer iteration, chain).
std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b);

// Deterministic random stream keyed by (seed, stream id). The generator is
// xoshiro256** seeded by splitmix64 over a hash of both keys, so the draw
// sequence depends only on the pair and never on scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double uniform();

  // Standard normal via the Marsaglia polar method.
  double normal();

  // Gamma(shape, scale 1), Marsaglia-Tsang with the u^(1/shape) boost for
  // shape < 1.
  double gamma(double shape);

  // Exponential with the given mean.
  double exponential(double mean);

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sagd
