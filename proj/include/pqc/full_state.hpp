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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pqc/gates.hpp"
#include "pqc/layout.hpp"
#include "pqc/state.hpp"

namespace pqc {

/// One constituent expanded over every qubit, n1-register included.
/// Index = anc << (m+n) | f << n | j1 << n2 | j2.
struct FullStateVector {
    RegisterLayout layout;
    AmplitudeVector amplitudes;

    /// Bit position of qubit q (0 = ancilla, most significant).
    [[nodiscard]] int bit_of_qubit(int qubit) const { return layout.total_qubits() - 1 - qubit; }
};

inline void check_full_capacity(const RegisterLayout &layout, const Limits &limits) {
    if (layout.total_qubits() > limits.max_full_qubits)
        throw CapacityError("full state of " + std::to_string(layout.total_qubits()) +
                            " qubits exceeds the limit of " +
                            std::to_string(limits.max_full_qubits));
}

inline FullStateVector expand_full(const RegisterLayout &layout, const ConstituentState &state,
                                   const Limits &limits = {}) {
    check_full_capacity(layout, limits);
    detail::check_dim(layout, state);
    FullStateVector full{layout, AmplitudeVector(std::uint64_t{1} << layout.total_qubits())};
    const int n = layout.n();
    for (std::uint64_t idx = 0; idx < state.amplitudes.size(); ++idx) {
        const std::uint64_t anc = layout.ancilla_of(idx);
        const std::uint64_t f = layout.function_of(idx);
        const std::uint64_t arg = layout.combine(state.j1, layout.j2_of_local(idx));
        full.amplitudes[(anc << (layout.m + n)) | (f << n) | arg] = state.amplitudes[idx];
    }
    return full;
}

/// Inverse of expand_full. Amplitude outside the j1 slice is dropped, so the
/// caller should check leakage() first when that matters.
inline ConstituentState project_constituent(const FullStateVector &full, std::uint64_t j1,
                                            double weight = 1.0) {
    const auto &layout = full.layout;
    ConstituentState state{j1, AmplitudeVector(layout.constituent_dim()), weight};
    const int n = layout.n();
    for (std::uint64_t idx = 0; idx < state.amplitudes.size(); ++idx) {
        const std::uint64_t anc = layout.ancilla_of(idx);
        const std::uint64_t f = layout.function_of(idx);
        const std::uint64_t arg = layout.combine(j1, layout.j2_of_local(idx));
        state.amplitudes[idx] = full.amplitudes[(anc << (layout.m + n)) | (f << n) | arg];
    }
    return state;
}

/// Probability mass outside the n1 slice `j1`.
inline double leakage(const FullStateVector &full, std::uint64_t j1) {
    const auto &layout = full.layout;
    double mass = 0.0;
    for (std::uint64_t idx = 0; idx < full.amplitudes.size(); ++idx)
        if (((idx >> layout.n2) & (layout.N1() - 1)) != j1)
            mass += std::norm(full.amplitudes[idx]);
    return mass;
}

/**
 * Applies a 2^k x 2^k gate to the listed qubits; qubits[0] is the most
 * significant bit of the gate's own index.
 */
inline void apply_gate(FullStateVector &full, std::span<const int> qubits,
                       const DenseMatrix &gate) {
    const std::size_t k = qubits.size();
    if (gate.dim() != (std::size_t{1} << k))
        detail::fail_validation("gate dimension does not match qubit count");
    std::vector<std::uint64_t> masks(k);
    std::uint64_t all = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (qubits[i] < 0 || qubits[i] >= full.layout.total_qubits())
            detail::fail_validation("qubit index out of range");
        masks[i] = std::uint64_t{1} << full.bit_of_qubit(qubits[i]);
        if (all & masks[i])
            detail::fail_validation("repeated qubit in gate");
        all |= masks[i];
    }
    const std::size_t dim = gate.dim();
    std::vector<std::uint64_t> offsets(dim);
    for (std::size_t g = 0; g < dim; ++g) {
        std::uint64_t off = 0;
        for (std::size_t i = 0; i < k; ++i)
            if ((g >> (k - 1 - i)) & 1U)
                off |= masks[i];
        offsets[g] = off;
    }
    AmplitudeVector in(dim), out(dim);
    for (std::uint64_t base = 0; base < full.amplitudes.size(); ++base) {
        if (base & all)
            continue;
        for (std::size_t g = 0; g < dim; ++g)
            in[g] = full.amplitudes[base | offsets[g]];
        gate.multiply(in, out);
        for (std::size_t g = 0; g < dim; ++g)
            full.amplitudes[base | offsets[g]] = out[g];
    }
}

/// Dense unitary over all 1+m+n qubits.
inline void evolve_full(FullStateVector &full, const DenseMatrix &unitary) {
    if (unitary.dim() != full.amplitudes.size())
        detail::fail_validation("full-space unitary has the wrong dimension");
    AmplitudeVector out(full.amplitudes.size());
    unitary.multiply(full.amplitudes, out);
    full.amplitudes = std::move(out);
}

} // namespace pqc
