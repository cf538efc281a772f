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

#include <array>
#include <vector>

namespace nmrmos::eval {

/// Projection onto the top two principal components of the mean-centered
/// data (power iteration with deflation, 1e-8 convergence). Component signs
/// are fixed so the largest-magnitude loading is positive.
std::vector<std::array<double, 2>> pca2(
    const std::vector<std::vector<float>>& embeddings);

}  // namespace nmrmos::eval
