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

#ifndef SPLITLEAK_ERRORS_H_
#define SPLITLEAK_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitleak {

// Every library failure derives from Error so callers (the CLI in
// particular) can report a stable machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error("numeric", what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error("data", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error("protocol", what) {}
};

// AUC or a class statistic requested on a sample that lacks one class.
class MetricError : public Error {
 public:
  explicit MetricError(const std::string& what) : Error("metric", what) {}
};

class TrainingAborted : public Error {
 public:
  TrainingAborted(std::size_t epoch, std::size_t batch, const std::string& what)
      : Error("training_aborted",
              "epoch " + std::to_string(epoch) + " batch " +
                  std::to_string(batch) + ": " + what),
        epoch_(epoch),
        batch_(batch) {}
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

class NoFeasibleDelta : public Error {
 public:
  explicit NoFeasibleDelta(const std::string& what)
      : Error("no_feasible_delta", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace splitleak

#endif  // SPLITLEAK_ERRORS_H_
