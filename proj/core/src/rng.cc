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

#include "arena/rng.h"

namespace arena {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t hash = basis;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t value) {
  return SplitMix64(seed ^ SplitMix64(value));
}

std::uint64_t MixSeed(std::uint64_t seed, std::string_view value) {
  // Length prefix keeps ("ab","c") and ("a","bc") apart.
  return MixSeed(MixSeed(seed, value.size()), Fnv1a64(value));
}

std::uint64_t MatchSeed(std::uint64_t tournament_seed,
                        std::string_view generator_id,
                        std::string_view discriminator_id, int repeat) {
  std::uint64_t s = MixSeed(tournament_seed, generator_id);
  s = MixSeed(s, discriminator_id);
  return MixSeed(s, static_cast<std::uint64_t>(repeat));
}

std::uint64_t StreamSeed(std::uint64_t match_seed, Stream stream) {
  return MixSeed(match_seed, static_cast<std::uint64_t>(stream));
}

}  // namespace arena
