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

#ifndef SPLITLEAK_METHOD_H_
#define SPLITLEAK_METHOD_H_

#include <string_view>

namespace splitleak {

enum class Method { kGafm, kVanilla, kMaxNorm, kGanOnly, kPenaltyOnly };

inline constexpr Method kAllMethods[] = {Method::kGafm, Method::kVanilla,
                                         Method::kMaxNorm, Method::kGanOnly,
                                         Method::kPenaltyOnly};

// "gafm", "vanilla", "maxnorm", "gan_only", "penalty_only".
std::string_view MethodName(Method m);
// Throws ConfigError on an unknown name.
Method ParseMethod(std::string_view name);

// Methods whose prediction runs through the generator.
constexpr bool UsesGenerator(Method m) {
  return m == Method::kGafm || m == Method::kGanOnly;
}

}  // namespace splitleak

#endif  // SPLITLEAK_METHOD_H_
