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

#include "arena/records.h"

#include "arena/error.h"

namespace arena {

std::string_view ToString(Role role) {
  return role == Role::kGenerator ? "generator" : "discriminator";
}

std::string_view ToString(PlayerKind kind) {
  switch (kind) {
    case PlayerKind::kToyCheckpoint:
      return "toy_checkpoint";
    case PlayerKind::kRealData:
      return "real_data";
    case PlayerKind::kTransform:
      return "transform";
    case PlayerKind::kExternal:
      return "external";
    case PlayerKind::kCustom:
      return "custom";
  }
  return "custom";
}

Role ParseRole(std::string_view text) {
  if (text == "generator") return Role::kGenerator;
  if (text == "discriminator") return Role::kDiscriminator;
  throw ConfigError("unknown role '" + std::string(text) + "'");
}

PlayerKind ParsePlayerKind(std::string_view text) {
  for (PlayerKind kind :
       {PlayerKind::kToyCheckpoint, PlayerKind::kRealData,
        PlayerKind::kTransform, PlayerKind::kExternal, PlayerKind::kCustom}) {
    if (ToString(kind) == text) return kind;
  }
  throw ConfigError("unknown player kind '" + std::string(text) + "'");
}

double MatchRecord::win_rate() const {
  const int n = samples();
  return n == 0 ? 0.0 : static_cast<double>(generator_wins()) / n;
}

void MatchRecord::Validate() const {
  if (n_fake < 0 || n_real < 0 || fake_wins < 0 || real_wins < 0 ||
      fake_wins > n_fake || real_wins > n_real) {
    throw MatchError("match " + generator_id + " vs " + discriminator_id +
                     ": win counts out of range");
  }
}

}  // namespace arena
