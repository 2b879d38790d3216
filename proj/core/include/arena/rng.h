// Copyright 2026 The Arena Authors
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

#ifndef ARENA_RNG_H_
#define ARENA_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace arena {

using Rng = std::mt19937_64;

// Stable across platforms and runs, unlike std::hash.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t value);
std::uint64_t MixSeed(std::uint64_t seed, std::string_view value);

// Per-match seed: a pure function of the tournament seed and the match key,
// so matches can run in any order or in parallel.
std::uint64_t MatchSeed(std::uint64_t tournament_seed,
                        std::string_view generator_id,
                        std::string_view discriminator_id, int repeat);

// Independent RNG streams inside one match.
enum class Stream : std::uint64_t {
  kFakeBatch = 1,
  kRealBatch = 2,
  kJudgeFake = 3,
  kJudgeReal = 4,
};

std::uint64_t StreamSeed(std::uint64_t match_seed, Stream stream);

}  // namespace arena

#endif  // ARENA_RNG_H_
