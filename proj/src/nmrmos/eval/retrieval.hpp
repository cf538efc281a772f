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

#include <vector>

namespace nmrmos::eval {

/// Mean precision at k: every item queries the rest ranked by cosine
/// similarity (descending; ties broken by item index), and precision@k is
/// the fraction of the top k sharing the query's label. Returns the mean
/// over all queries.
double retrieval_mp(const std::vector<std::vector<float>>& embeddings,
                    const std::vector<int>& labels, int k);

}  // namespace nmrmos::eval
