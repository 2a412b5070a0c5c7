// Copyright 2026 The PQC Ensemble Authors
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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "pqc/gates.hpp"
#include "pqc/layout.hpp"
#include "pqc/state.hpp"

namespace pqc {

/**
 * Discrete Fourier transform over the n2-register only,
 * |j> -> N2^{-1/2} sum_k e^{+2 pi i jk / N2} |k>, applied to every
 * (ancilla, function) block. Iterative radix-2 Cooley-Tukey; twiddles are
 * evaluated directly rather than by repeated multiplication.
 */
inline void qft_n2(const RegisterLayout &layout, ConstituentState &state) {
    detail::check_dim(layout, state);
    const std::size_t size = layout.N2();
    if (size == 1)
        return;

    std::vector<Complex> twiddle(size / 2);
    for (std::size_t k = 0; k < size / 2; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(size);
        twiddle[k] = {std::cos(angle), std::sin(angle)};
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    const int bits = layout.n2;

    auto &amps = state.amplitudes;
    for (std::size_t base = 0; base < amps.size(); base += size) {
        Complex *block = amps.data() + base;
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t rev = 0;
            for (int b = 0; b < bits; ++b)
                rev |= ((i >> b) & 1U) << (bits - 1 - b);
            if (i < rev)
                std::swap(block[i], block[rev]);
        }
        for (std::size_t len = 2; len <= size; len <<= 1U) {
            const std::size_t stride = size / len;
            const std::size_t half = len / 2;
            for (std::size_t start = 0; start < size; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    const Complex t = twiddle[k * stride] * block[start + k + half];
                    const Complex u = block[start + k];
                    block[start + k] = u + t;
                    block[start + k + half] = u - t;
                }
            }
        }
        for (std::size_t i = 0; i < size; ++i)
            block[i] *= scale;
    }
}

} // namespace pqc
