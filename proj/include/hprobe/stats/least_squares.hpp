// Copyright 2026 The hprobe Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hprobe::stats {

/// Dense column-major matrix; just enough for design matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  std::span<double> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> column(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LeastSquaresFit {
  std::vector<double> beta;
  double rss = 0.0;
  Matrix r;  // upper-triangular factor of X = QR (cols x cols)
};

/// Householder QR least squares. Throws RankDeficient when a column is
/// (numerically) a combination of earlier ones, InsufficientData when there
/// are fewer rows than columns.
LeastSquaresFit least_squares(const Matrix& x, std::span<const double> y);

/// (X^T X)^{-1} = R^{-1} R^{-T} from a fit's triangular factor.
Matrix inverse_gram(const LeastSquaresFit& fit);

}  // namespace hprobe::stats
