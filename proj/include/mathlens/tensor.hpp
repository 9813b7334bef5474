// Copyright 2026 The mathlens Authors
// SPDX-License-Identifier: Apache-2.0
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

#ifndef MATHLENS_TENSOR_HPP_
#define MATHLENS_TENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

namespace mathlens {

// Row-major float matrix; weights use the [out × in] convention so that
// y = W·x walks rows.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0f) {}

  float* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
  const float* row(int i) const {
    return data.data() + static_cast<std::size_t>(i) * cols;
  }
  float& at(int i, int j) {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  float at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  std::size_t numel() const { return data.size(); }
};

inline float dot(const float* a, const float* b, int n) {
  float acc = 0.0f;
  for (int i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

// y = W x for W [out × in].
inline void matvec(const Matrix& w, const float* x, float* y) {
  for (int i = 0; i < w.rows; ++i) y[i] = dot(w.row(i), x, w.cols);
}

// out = x / sqrt(mean(x^2) + eps) * scale
inline void rms_norm(const float* x, const float* scale, int n, float eps,
                     float* out) {
  float ss = 0.0f;
  for (int i = 0; i < n; ++i) ss += x[i] * x[i];
  float inv = 1.0f / std::sqrt(ss / static_cast<float>(n) + eps);
  for (int i = 0; i < n; ++i) out[i] = x[i] * inv * scale[i];
}

inline float silu(float x) { return x / (1.0f + std::exp(-x)); }

}  // namespace mathlens

#endif  // MATHLENS_TENSOR_HPP_
