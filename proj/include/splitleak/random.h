// Copyright 2026 The splitleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPLITLEAK_RANDOM_H_
#define SPLITLEAK_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace splitleak {

using Rng = std::mt19937_64;

// Independent generator for a named purpose under a run seed. Streams with
// different tags never share state, so adding a consumer to one stream does
// not perturb the others.
inline Rng StreamFor(std::uint64_t seed, std::string_view tag,
                     std::uint64_t index = 0) {
  // FNV-1a over the tag.
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : tag) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace splitleak

#endif  // SPLITLEAK_RANDOM_H_
