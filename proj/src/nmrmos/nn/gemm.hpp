/*
 Copyright 2026 The nmrmos Authors
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <algorithm>
#include <cstdint>

namespace nmrmos::nn {

/// C = alpha * op(A) * op(B) + beta * C, row-major; op(A) is M x K and
/// op(B) is K x N. Backed by single-threaded BLAS for float and double
/// (graph-level parallelism owns the threads; single-threaded kernels keep
/// results deterministic).
template <typename S>
void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, S alpha,
          const S* a, int64_t lda, const S* b, int64_t ldb, S beta, S* c,
          int64_t ldc);

/// dst[c x r] = src[r x c] transposed.
template <typename S>
void transpose(int64_t rows, int64_t cols, const S* src, S* dst) {
  constexpr int64_t kBlock = 32;
  for (int64_t r0 = 0; r0 < rows; r0 += kBlock) {
    const int64_t rn = std::min(kBlock, rows - r0);
    for (int64_t c0 = 0; c0 < cols; c0 += kBlock) {
      const int64_t cn = std::min(kBlock, cols - c0);
      for (int64_t r = 0; r < rn; ++r) {
        for (int64_t c = 0; c < cn; ++c) {
          dst[(c0 + c) * rows + (r0 + r)] = src[(r0 + r) * cols + (c0 + c)];
        }
      }
    }
  }
}

}  // namespace nmrmos::nn
