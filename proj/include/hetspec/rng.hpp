// Copyright 2026 The hetspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Deterministic random streams. Every Monte-Carlo trial, scan step and noise
// source draws from its own engine keyed by (master seed, stream, index), so
// results do not depend on how work is scheduled across threads.

#include <cstdint>
#include <random>

namespace hetspec {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Named sub-streams so that e.g. the LO phase noise and the shot noise of the
/// same trial never share an engine.
enum class Stream : std::uint64_t {
  lo = 1,
  signal = 2,
  detector = 3,
  baseline = 4,
  dark = 5,
  scan_step = 6,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 Stream stream = Stream::scan_step) {
  return splitmix64(splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(stream))) + index);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

}  // namespace hetspec
