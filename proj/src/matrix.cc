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

#include "splitleak/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitleak/errors.h"

namespace splitleak {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                     " != " + std::to_string(rows_) + "x" +
                     std::to_string(cols_));
  }
}

Matrix Matrix::Column(std::span<const double> values) {
  return Matrix(values.size(), 1,
                std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::SelectRows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) {
      throw ShapeError("row index " + std::to_string(indices[i]) +
                       " out of range for " + std::to_string(rows_) + " rows");
    }
    std::ranges::copy(row(indices[i]), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::SelectCols(std::span<const std::size_t> indices) const {
  for (std::size_t c : indices) {
    if (c >= cols_) {
      throw ShapeError("column index " + std::to_string(c) +
                       " out of range for " + std::to_string(cols_) +
                       " columns");
    }
  }
  Matrix out(rows_, indices.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      out(r, j) = (*this)(r, indices[j]);
    }
  }
  return out;
}

bool Matrix::AllFinite() const {
  return std::ranges::all_of(data_, [](double v) { return std::isfinite(v); });
}

}  // namespace splitleak
