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

#ifndef ARENA_RECORDS_H_
#define ARENA_RECORDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace arena {

enum class Role { kGenerator, kDiscriminator };

enum class PlayerKind { kToyCheckpoint, kRealData, kTransform, kExternal, kCustom };

std::string_view ToString(Role role);
std::string_view ToString(PlayerKind kind);
Role ParseRole(std::string_view text);
PlayerKind ParsePlayerKind(std::string_view text);

struct PlayerSpec {
  std::string id;
  Role role = Role::kGenerator;
  PlayerKind kind = PlayerKind::kCustom;
  std::optional<int> iteration;
  std::optional<std::string> experiment;
};

// One generator-vs-discriminator match. The discriminator judged n_fake
// generated samples and n_real real samples; every misjudged sample is a
// generator win.
struct MatchRecord {
  std::string generator_id;
  std::string discriminator_id;
  int n_fake = 0;
  int fake_wins = 0;
  int n_real = 0;
  int real_wins = 0;
  std::uint64_t seed = 0;
  double threshold = 0.5;

  int samples() const { return n_fake + n_real; }
  int generator_wins() const { return fake_wins + real_wins; }
  double win_rate() const;

  // Throws MatchError if the win counts are out of range.
  void Validate() const;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

}  // namespace arena

#endif  // ARENA_RECORDS_H_
