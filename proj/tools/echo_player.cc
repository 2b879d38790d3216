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

// Reference external player for the arena stdio protocol. It also has
// deliberate misbehaviours for exercising the host's error handling.

#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "arena/extern_player.h"

namespace {

using arena::ext::Message;
using arena::ext::MessageType;

void Emit(const Message& m) { std::cout << arena::ext::Serialize(m) << std::endl; }

Message ErrorMessage(const std::string& text) {
  Message m;
  m.type = MessageType::kError;
  m.message = text;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference arena player speaking line-delimited JSON on stdio"};
  std::string role = "generator";
  std::string name = "echo";
  std::string mode = "normal";
  int dim = 2;
  int protocol = arena::ext::kProtocolVersion;
  int crash_after = -1;
  double value = 0.5;
  double mean = 0.0;
  app.add_option("--role", role, "generator or discriminator");
  app.add_option("--name", name, "name sent in the hello");
  app.add_option("--dim", dim, "sample dimension");
  app.add_option("--protocol", protocol, "protocol version to declare");
  app.add_option("--value", value, "constant score returned by a discriminator");
  app.add_option("--mean", mean, "mean of generated samples");
  app.add_option("--crash-after", crash_after,
                 "exit without replying after this many requests");
  app.add_option("--mode", mode,
                 "normal | exit-before-hello | no-hello | short-batch | "
                 "wrong-dim | out-of-range | hang | garbage | error")
      ->check(CLI::IsMember({"normal", "exit-before-hello", "no-hello",
                             "short-batch", "wrong-dim", "out-of-range", "hang",
                             "garbage", "error"}));
  CLI11_PARSE(app, argc, argv);

  if (mode == "exit-before-hello") return 3;
  if (mode == "no-hello") {
    std::this_thread::sleep_for(std::chrono::hours(1));
    return 0;
  }

  Message hello;
  hello.type = MessageType::kHello;
  hello.role = arena::ParseRole(role);
  hello.name = name;
  hello.dim = dim;
  hello.protocol = protocol;
  Emit(hello);

  int handled = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    Message request;
    try {
      request = arena::ext::Parse(line);
    } catch (const std::exception& e) {
      Emit(ErrorMessage(e.what()));
      continue;
    }
    if (request.type == MessageType::kShutdown) return 0;
    if (crash_after >= 0 && handled >= crash_after) return 4;
    ++handled;
    if (mode == "hang") {
      std::this_thread::sleep_for(std::chrono::hours(1));
    }
    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    if (mode == "error") {
      Emit(ErrorMessage("refusing on purpose"));
      continue;
    }

    Message reply;
    if (request.type == MessageType::kGenerate) {
      reply.type = MessageType::kSamples;
      std::mt19937_64 rng(request.seed);
      std::normal_distribution<double> normal(mean, 1.0);
      int count = request.count;
      if (mode == "short-batch" && count > 0) --count;
      const int width = mode == "wrong-dim" ? dim + 1 : dim;
      for (int i = 0; i < count; ++i) {
        std::vector<double> x(width);
        for (double& v : x) v = normal(rng);
        reply.data.push_back(std::move(x));
      }
    } else if (request.type == MessageType::kJudge) {
      reply.type = MessageType::kScores;
      const double score = mode == "out-of-range" ? 1.2 : value;
      reply.values.assign(request.data.size(), score);
    } else {
      reply = ErrorMessage("unexpected request '" +
                           std::string(arena::ext::ToString(request.type)) + "'");
    }
    Emit(reply);
  }
  return 0;
}
