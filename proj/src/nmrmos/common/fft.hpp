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

#include <complex>
#include <vector>

namespace nmrmos {

/// In-place radix-2 FFT. Length must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

/// Full linear convolution of two real signals (length a+b-1), via FFT.
std::vector<float> fft_convolve(const std::vector<float>& a,
                                const std::vector<float>& b);

}  // namespace nmrmos
