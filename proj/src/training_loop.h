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

#ifndef SPLITLEAK_SRC_TRAINING_LOOP_H_
#define SPLITLEAK_SRC_TRAINING_LOOP_H_

#include <span>
#include <vector>

#include "splitleak/gafm.h"
#include "splitleak/method.h"
#include "splitleak/protocol.h"

namespace splitleak::detail {

// The mini-batch loop shared by every method; the method only decides how
// the cut-layer gradient is formed and what the prediction is.
gafm::TrainResult RunSplitTraining(Method method,
                                   protocol::SplitSession& session,
                                   gafm::ActiveState& active,
                                   const gafm::TrainConfig& config);

std::vector<double> ScoresFromCut(Method method,
                                  const gafm::ActiveState& active,
                                  std::span<const double> cut_values,
                                  const gafm::TrainConfig& config);

}  // namespace splitleak::detail

#endif  // SPLITLEAK_SRC_TRAINING_LOOP_H_
