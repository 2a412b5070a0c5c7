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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pqc/layout.hpp"
#include "pqc/state.hpp"

/// Primitive gates acting on a single constituent. All of them work in
/// place, touch only the constituent they are given, and preserve the norm.
namespace pqc {

namespace detail {

inline void check_dim(const RegisterLayout &layout, const ConstituentState &state) {
    if (state.amplitudes.size() != layout.constituent_dim())
        fail_validation("constituent vector length " + std::to_string(state.amplitudes.size()) +
                        " does not match layout (" + std::to_string(layout.constituent_dim()) +
                        ")");
}

inline void check_marked(const RegisterLayout &layout, std::uint64_t marked_full) {
    if (marked_full >= layout.N())
        fail_validation("marked label " + std::to_string(marked_full) + " outside [0, " +
                        std::to_string(layout.N()) + ")");
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t result = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1U)
            result = mulmod(result, base, mod);
        base = mulmod(base, base, mod);
        exp >>= 1U;
    }
    return result;
}

} // namespace detail

/// Tensor-product Hadamard over the n2-register of every (ancilla, function)
/// block. Identity when n2 = 0.
inline void hadamard_n2(const RegisterLayout &layout, ConstituentState &state) {
    detail::check_dim(layout, state);
    const std::size_t block = layout.N2();
    if (block == 1)
        return;
    const double s = std::numbers::sqrt2 / 2.0;
    auto &amps = state.amplitudes;
    for (std::size_t base = 0; base < amps.size(); base += block) {
        // in-place fast Walsh-Hadamard transform, normalised per stage
        for (std::size_t half = 1; half < block; half <<= 1U) {
            for (std::size_t i = 0; i < block; i += half << 1U) {
                for (std::size_t j = i; j < i + half; ++j) {
                    const Complex a = amps[base + j];
                    const Complex b = amps[base + j + half];
                    amps[base + j] = (a + b) * s;
                    amps[base + j + half] = (a - b) * s;
                }
            }
        }
    }
}

/**
 * Query oracle with a phase: when the constituent's n1 label equals the
 * marked j1, every amplitude whose n2 index is the marked j2 picks up
 * e^{i phi}, whatever the ancilla and function bits. Other constituents are
 * left untouched, which is how the oracle on the whole argument register
 * acts on a state with j1 pinned.
 */
inline void phase_on_marked(const RegisterLayout &layout, ConstituentState &state,
                            std::uint64_t marked_full, double phi) {
    detail::check_dim(layout, state);
    detail::check_marked(layout, marked_full);
    if (state.j1 != layout.j1_of(marked_full))
        return;
    const Complex rot = std::polar(1.0, phi);
    const std::uint64_t j2 = layout.j2_of(marked_full);
    for (std::uint64_t anc = 0; anc < 2; ++anc)
        for (std::uint64_t f = 0; f < layout.function_dim(); ++f)
            state.amplitudes[layout.local_index(anc, f, j2)] *= rot;
}

/// Multiplies every amplitude whose n2 index is |0...0> by e^{i phi}.
inline void phase_on_zero_n2(const RegisterLayout &layout, ConstituentState &state, double phi) {
    detail::check_dim(layout, state);
    const Complex rot = std::polar(1.0, phi);
    for (std::uint64_t anc = 0; anc < 2; ++anc)
        for (std::uint64_t f = 0; f < layout.function_dim(); ++f)
            state.amplitudes[layout.local_index(anc, f, 0)] *= rot;
}

/// X on `target_qubit` (0 = ancilla, 1..m = function qubits) restricted to
/// the marked (j1, j2) slice.
inline void flip_function_if_marked(const RegisterLayout &layout, ConstituentState &state,
                                    std::uint64_t marked_full, int target_qubit) {
    detail::check_dim(layout, state);
    detail::check_marked(layout, marked_full);
    const std::uint64_t bit = std::uint64_t{1} << layout.local_bit_of_qubit(target_qubit);
    if (state.j1 != layout.j1_of(marked_full))
        return;
    const std::uint64_t j2 = layout.j2_of(marked_full);
    for (std::uint64_t anc = 0; anc < 2; ++anc) {
        for (std::uint64_t f = 0; f < layout.function_dim(); ++f) {
            const std::uint64_t idx = layout.local_index(anc, f, j2);
            if ((idx & bit) == 0)
                std::swap(state.amplitudes[idx], state.amplitudes[idx | bit]);
        }
    }
}

/// amplitudes <- U * amplitudes on each ancilla slice, U acting on
/// (function x n2) with index f * N2 + j2.
inline void apply_unitary_n2f(const RegisterLayout &layout, ConstituentState &state,
                              const DenseMatrix &unitary, bool check_unitary = true) {
    detail::check_dim(layout, state);
    if (unitary.dim() != layout.slice_dim())
        detail::fail_validation("unitary dimension " + std::to_string(unitary.dim()) +
                                " does not match the function x n2 space (" +
                                std::to_string(layout.slice_dim()) + ")");
    if (check_unitary && !unitary.is_unitary())
        detail::fail_validation("matrix is not unitary within 1e-10");
    const std::size_t dim = unitary.dim();
    AmplitudeVector out(dim);
    for (std::size_t slice = 0; slice < 2; ++slice) {
        std::span<Complex> in(state.amplitudes.data() + slice * dim, dim);
        unitary.multiply(in, out);
        std::copy(out.begin(), out.end(), in.begin());
    }
}

/**
 * Reversible modular exponentiation |x>|y> -> |x>|y XOR (base^x mod modulus)>
 * on the function register, with x = j1 * N2 + j2. On a function register
 * holding |0> this stores base^x mod modulus.
 */
inline void modexp_into_function(const RegisterLayout &layout, ConstituentState &state,
                                 std::uint64_t modulus, std::uint64_t base) {
    detail::check_dim(layout, state);
    if (modulus < 2)
        detail::fail_validation("modulus must be at least 2");
    if (layout.function_dim() < modulus)
        detail::fail_validation("function register too small for the modulus");
    if (std::gcd(base % modulus, modulus) != 1)
        detail::fail_validation("base and modulus are not coprime");

    const std::uint64_t n2_dim = layout.N2();
    std::vector<std::uint64_t> values(n2_dim);
    // a^(j1*N2) * a^j2
    std::uint64_t v = detail::powmod(base, state.j1 << layout.n2, modulus);
    for (std::uint64_t j2 = 0; j2 < n2_dim; ++j2) {
        values[j2] = v;
        v = detail::mulmod(v, base, modulus);
    }
    AmplitudeVector out(state.amplitudes.size());
    for (std::uint64_t idx = 0; idx < state.amplitudes.size(); ++idx) {
        const std::uint64_t anc = layout.ancilla_of(idx);
        const std::uint64_t f = layout.function_of(idx);
        const std::uint64_t j2 = layout.j2_of_local(idx);
        out[layout.local_index(anc, f ^ values[j2], j2)] = state.amplitudes[idx];
    }
    state.amplitudes = std::move(out);
}

} // namespace pqc
