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

#include "nmrmos/audio/clip.hpp"
#include "nmrmos/model/net.hpp"

namespace nmrmos::infer {

struct MosEstimate {
  double mos = 0.0;             // clamp(5 - mean_r, 1, 5)
  double mean_r = 0.0;
  double std_r = 0.0;           // population std over per-NMR ratings
  int n = 0;
  std::vector<double> per_nmr;  // one averaged rating per reference
};

/// Absolute MOS of a test clip against n clean references: the clip is cut
/// into non-overlapping 3 s windows (tile-padded tail); window k pairs with
/// reference window k (cycling); relative ratings are averaged per reference
/// and then across references. References are presumed clean (MOS 5).
MosEstimate predict_mos(const model::ModelParams& params,
                        const audio::AudioClip& test_clip,
                        const std::vector<audio::AudioClip>& nmr_set, int n,
                        int threads = 1);

/// Frame embeddings of the first n references, computed once and reused
/// across many test clips.
struct ReferenceFrames {
  std::vector<std::vector<nn::Tensor>> windows;  // [reference][window]
};

ReferenceFrames precompute_reference_frames(
    const model::ModelParams& params,
    const std::vector<audio::AudioClip>& nmr_set, int n, int threads = 1);

MosEstimate predict_mos_cached(const model::ModelParams& params,
                               const audio::AudioClip& test_clip,
                               const ReferenceFrames& refs, int threads = 1);

/// Signed variant for references of known, not necessarily perfect MOS:
/// each reference contributes mos_ref + r when the test is preferred over
/// the reference, else mos_ref - r.
MosEstimate predict_mos_signed(const model::ModelParams& params,
                               const audio::AudioClip& test_clip,
                               const std::vector<audio::AudioClip>& nmr_set,
                               const std::vector<double>& nmr_mos, int n,
                               int threads = 1);

/// Probability that a is cleaner than b, symmetrized over both input orders
/// and averaged over aligned windows. prefer(a,b) + prefer(b,a) == 1.
double prefer(const model::ModelParams& params, const audio::AudioClip& a,
              const audio::AudioClip& b);

/// Window-averaged quality embedding of a whole utterance.
std::vector<float> utterance_embedding(const model::ModelParams& params,
                                       const audio::AudioClip& clip);

/// Normalized non-overlapping 3 s windows of a clip (tile-padded tail).
std::vector<std::vector<float>> excerpt_windows(const audio::AudioClip& clip);

/// Summary statistics of predict_mos from raw per-reference ratings.
MosEstimate summarize_ratings(const std::vector<double>& per_nmr);

}  // namespace nmrmos::infer
