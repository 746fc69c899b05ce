// Copyright 2026 The AutoSynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "autosynth/parallel.hpp"

#include <cstdlib>
#include <string>

#include "autosynth/errors.hpp"

namespace autosynth {

int resolve_threads(int requested) {
  if (requested < 0) throw InvalidArgument("thread count must be non-negative");
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AUTOSYNTH_THREADS"); env && *env) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(env, &used);
      if (used == std::string(env).size() && value > 0) return value;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("AUTOSYNTH_THREADS must be a positive integer, got '") +
                          env + "'");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace autosynth
