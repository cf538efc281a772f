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

#include "nmrmos/infer/predict.hpp"

#include <algorithm>
#include <cmath>

#include "nmrmos/common/error.hpp"
#include "nmrmos/common/parallel.hpp"

namespace nmrmos::infer {

std::vector<std::vector<float>> excerpt_windows(const audio::AudioClip& clip) {
  require(!clip.empty(), "excerpt_windows: empty clip");
  const int64_t win =
      std::llround(audio::kExcerptSeconds * clip.sample_rate);
  const int64_t count =
      (static_cast<int64_t>(clip.size()) + win - 1) / win;  // ceil
  std::vector<std::vector<float>> windows;
  windows.reserve(static_cast<size_t>(count));
  for (int64_t k = 0; k < count; ++k) {
    const audio::AudioClip w =
        excerpt(clip, static_cast<double>(k * win) / clip.sample_rate,
                audio::kExcerptSeconds, audio::PadPolicy::kTile);
    windows.push_back(audio::prepare_excerpt(w).samples);
  }
  return windows;
}

MosEstimate summarize_ratings(const std::vector<double>& per_nmr) {
  require(!per_nmr.empty(), "summarize_ratings: no ratings");
  MosEstimate est;
  est.per_nmr = per_nmr;
  est.n = static_cast<int>(per_nmr.size());
  double acc = 0.0;
  for (const double r : per_nmr) acc += r;
  est.mean_r = acc / est.n;
  double var = 0.0;
  for (const double r : per_nmr) var += (r - est.mean_r) * (r - est.mean_r);
  est.std_r = std::sqrt(var / est.n);
  est.mos = std::clamp(5.0 - est.mean_r, 1.0, 5.0);
  return est;
}

namespace {

/// Frame embeddings for every window of a clip.
std::vector<nn::Tensor> window_frames(const model::ModelParams& params,
                                      const audio::AudioClip& clip) {
  std::vector<nn::Tensor> frames;
  for (const auto& w : excerpt_windows(clip)) {
    frames.push_back(model::encode_frames(params, w));
  }
  return frames;
}

}  // namespace

ReferenceFrames precompute_reference_frames(
    const model::ModelParams& params,
    const std::vector<audio::AudioClip>& nmr_set, int n, int threads) {
  require(!nmr_set.empty(), "predict_mos: empty reference set");
  require(n >= 1, "predict_mos: n must be >= 1, got ", n);
  require(n <= static_cast<int>(nmr_set.size()), "predict_mos: n=", n,
          " exceeds the ", nmr_set.size(), " available references");
  ReferenceFrames refs;
  refs.windows.resize(static_cast<size_t>(n));
  parallel_for(n, threads, [&](int64_t i) {
    refs.windows[static_cast<size_t>(i)] =
        window_frames(params, nmr_set[static_cast<size_t>(i)]);
  });
  return refs;
}

MosEstimate predict_mos_cached(const model::ModelParams& params,
                               const audio::AudioClip& test_clip,
                               const ReferenceFrames& refs, int threads) {
  require(!refs.windows.empty(), "predict_mos: empty reference set");
  require(test_clip.duration_seconds() >= 0.1,
          "predict_mos: test clip shorter than 0.1 s");

  const std::vector<nn::Tensor> test_frames = window_frames(params, test_clip);
  const int n = static_cast<int>(refs.windows.size());
  std::vector<double> per_nmr(static_cast<size_t>(n), 0.0);
  parallel_for(n, threads, [&](int64_t i) {
    const std::vector<nn::Tensor>& ref_frames = refs.windows[static_cast<size_t>(i)];
    double acc = 0.0;
    for (size_t k = 0; k < test_frames.size(); ++k) {
      const nn::Tensor& ref = ref_frames[k % ref_frames.size()];
      acc += model::heads_forward(params, test_frames[k], ref).r;
    }
    per_nmr[static_cast<size_t>(i)] =
        acc / static_cast<double>(test_frames.size());
  });
  return summarize_ratings(per_nmr);
}

MosEstimate predict_mos(const model::ModelParams& params,
                        const audio::AudioClip& test_clip,
                        const std::vector<audio::AudioClip>& nmr_set, int n,
                        int threads) {
  return predict_mos_cached(
      params, test_clip,
      precompute_reference_frames(params, nmr_set, n, threads), threads);
}

MosEstimate predict_mos_signed(const model::ModelParams& params,
                               const audio::AudioClip& test_clip,
                               const std::vector<audio::AudioClip>& nmr_set,
                               const std::vector<double>& nmr_mos, int n,
                               int threads) {
  require(nmr_mos.size() == nmr_set.size(),
          "predict_mos_signed: ", nmr_set.size(), " references but ",
          nmr_mos.size(), " ratings");
  require(!nmr_set.empty(), "predict_mos_signed: empty reference set");
  require(n >= 1 && n <= static_cast<int>(nmr_set.size()),
          "predict_mos_signed: bad n=", n, " for ", nmr_set.size(),
          " references");
  require(test_clip.duration_seconds() >= 0.1,
          "predict_mos_signed: test clip shorter than 0.1 s");

  const std::vector<nn::Tensor> test_frames = window_frames(params, test_clip);
  std::vector<double> per_mos(static_cast<size_t>(n), 0.0);
  parallel_for(n, threads, [&](int64_t i) {
    const std::vector<nn::Tensor> ref_frames =
        window_frames(params, nmr_set[static_cast<size_t>(i)]);
    double r_acc = 0.0;
    double pref_acc = 0.0;
    for (size_t k = 0; k < test_frames.size(); ++k) {
      const nn::Tensor& ref = ref_frames[k % ref_frames.size()];
      const auto fwd = model::heads_forward(params, test_frames[k], ref);
      const auto rev = model::heads_forward(params, ref, test_frames[k]);
      r_acc += fwd.r;
      pref_acc += static_cast<double>(fwd.p[0]) - static_cast<double>(rev.p[0]);
    }
    const double r = r_acc / static_cast<double>(test_frames.size());
    const bool test_cleaner = pref_acc > 0.0;
    per_mos[static_cast<size_t>(i)] =
        nmr_mos[static_cast<size_t>(i)] + (test_cleaner ? r : -r);
  });

  // per_nmr carries signed offsets from 5 so downstream stats line up.
  MosEstimate est;
  est.n = n;
  double acc = 0.0;
  for (const double m : per_mos) acc += m;
  const double mean_mos = acc / n;
  double var = 0.0;
  for (const double m : per_mos) var += (m - mean_mos) * (m - mean_mos);
  est.std_r = std::sqrt(var / n);
  est.mean_r = 5.0 - mean_mos;
  est.mos = std::clamp(mean_mos, 1.0, 5.0);
  est.per_nmr.assign(per_mos.begin(), per_mos.end());
  for (auto& v : est.per_nmr) v = 5.0 - v;
  return est;
}

double prefer(const model::ModelParams& params, const audio::AudioClip& a,
              const audio::AudioClip& b) {
  const std::vector<nn::Tensor> fa = window_frames(params, a);
  const std::vector<nn::Tensor> fb = window_frames(params, b);
  const size_t count = std::max(fa.size(), fb.size());

  // (p(a,b) + 1 - p(b,a)) / 2 rearranged as 0.5 + (p(a,b) - p(b,a)) / 2,
  // which makes prefer(a,b) and prefer(b,a) exact complements.
  double diff = 0.0;
  for (size_t k = 0; k < count; ++k) {
    const nn::Tensor& wa = fa[k % fa.size()];
    const nn::Tensor& wb = fb[k % fb.size()];
    const double p_ab = model::heads_forward(params, wa, wb).p[0];
    const double p_ba = model::heads_forward(params, wb, wa).p[0];
    diff += p_ab - p_ba;
  }
  return 0.5 + diff / static_cast<double>(count) / 2.0;
}

std::vector<float> utterance_embedding(const model::ModelParams& params,
                                       const audio::AudioClip& clip) {
  const auto windows = excerpt_windows(clip);
  std::vector<double> acc;
  for (const auto& w : windows) {
    const std::vector<float> e = model::embed(params, w);
    if (acc.empty()) acc.assign(e.size(), 0.0);
    for (size_t i = 0; i < e.size(); ++i) acc[i] += e[i];
  }
  std::vector<float> out(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) {
    out[i] = static_cast<float>(acc[i] / static_cast<double>(windows.size()));
  }
  return out;
}

}  // namespace nmrmos::infer
