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

#ifndef ARENA_ERROR_H_
#define ARENA_ERROR_H_

#include <stdexcept>
#include <string>

namespace arena {

// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric routine failed to converge or produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, schedule, or player definition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A player misbehaved during a match (wrong batch size, bad score, ...).
class MatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace arena

#endif  // ARENA_ERROR_H_
