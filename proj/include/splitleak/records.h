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

#ifndef SPLITLEAK_RECORDS_H_
#define SPLITLEAK_RECORDS_H_

#include <cstddef>
#include <optional>

namespace splitleak {

// What the active party sent down for one training example during the last
// epoch, joined with its label for auditing. grad_total is exactly what the
// passive side received (before any per-party division); the components are
// the normalized GAN and penalty parts when the method has them.
struct CutRecord {
  std::size_t index = 0;
  int label = 0;
  double y_tilde = 0.0;
  double y_hat = 0.0;
  double grad_total = 0.0;
  std::optional<double> grad_gan;
  std::optional<double> grad_penalty;
};

}  // namespace splitleak

#endif  // SPLITLEAK_RECORDS_H_
