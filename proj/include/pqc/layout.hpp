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

#include <cstddef>
#include <cstdint>
#include <string>

#include "pqc/error.hpp"

namespace pqc {

/// Memory bounds applied when states are allocated.
struct Limits {
    /// Amplitudes stored per constituent, 2^(1+m+n2).
    std::size_t max_constituent_amplitudes = std::size_t{1} << 24;
    /// Amplitudes stored over the whole ensemble, N1 * 2^(1+m+n2).
    std::size_t max_total_amplitudes = std::size_t{1} << 26;
    /// Qubit count (1+m+n) allowed for a FullStateVector.
    int max_full_qubits = 16;
};

/**
 * Qubit partition of one molecule: ancilla | m function qubits |
 * n1-register | n2-register.
 *
 * Qubit 0 is the ancilla and is the most significant bit of every basis
 * index; the n2-register occupies the low bits. A full basis label
 * |i, j1, j2> maps to i*N1*N2 + j1*N2 + j2 (ancilla above i). A
 * constituent only stores the (ancilla, function, n2) indices, laid out as
 * anc << (m+n2) | f << n2 | j2, since j1 is pinned per constituent.
 */
struct RegisterLayout {
    int n1 = 0;
    int n2 = 0;
    int m = 0;

    /// Largest register width accepted anywhere (labels stay in uint64).
    static constexpr int kMaxQubits = 62;

    static RegisterLayout make(int n1, int n2, int m = 0) {
        RegisterLayout layout{n1, n2, m};
        layout.validate();
        return layout;
    }

    void validate() const {
        if (n1 < 0 || n2 < 0 || m < 0)
            detail::fail_validation("register sizes must be non-negative");
        if (n1 + n2 < 1)
            detail::fail_validation("argument register needs at least one qubit");
        if (n1 + n2 > kMaxQubits || 1 + m + n2 > kMaxQubits || 1 + m + n1 + n2 > kMaxQubits)
            detail::fail_validation("register too wide: at most " +
                                    std::to_string(kMaxQubits) + " qubits");
    }

    [[nodiscard]] int n() const { return n1 + n2; }
    [[nodiscard]] int total_qubits() const { return 1 + m + n1 + n2; }
    [[nodiscard]] int coherent_qubits() const { return 1 + m + n2; }

    [[nodiscard]] std::uint64_t N1() const { return std::uint64_t{1} << n1; }
    [[nodiscard]] std::uint64_t N2() const { return std::uint64_t{1} << n2; }
    [[nodiscard]] std::uint64_t N() const { return std::uint64_t{1} << n(); }
    [[nodiscard]] std::uint64_t function_dim() const { return std::uint64_t{1} << m; }

    /// Length of a constituent's stored vector, 2^(1+m+n2).
    [[nodiscard]] std::uint64_t constituent_dim() const {
        return std::uint64_t{1} << coherent_qubits();
    }
    /// Dimension of the (function x n2) subspace one ancilla slice spans.
    [[nodiscard]] std::uint64_t slice_dim() const { return std::uint64_t{1} << (m + n2); }

    [[nodiscard]] std::uint64_t combine(std::uint64_t j1, std::uint64_t j2) const {
        return (j1 << n2) | j2;
    }
    [[nodiscard]] std::uint64_t j1_of(std::uint64_t full_label) const { return full_label >> n2; }
    [[nodiscard]] std::uint64_t j2_of(std::uint64_t full_label) const {
        return full_label & (N2() - 1);
    }

    /// Stored-vector index of (ancilla bit, function value, j2).
    [[nodiscard]] std::uint64_t local_index(std::uint64_t anc, std::uint64_t f,
                                            std::uint64_t j2) const {
        return (anc << (m + n2)) | (f << n2) | j2;
    }
    [[nodiscard]] std::uint64_t ancilla_of(std::uint64_t local) const {
        return local >> (m + n2);
    }
    [[nodiscard]] std::uint64_t function_of(std::uint64_t local) const {
        return (local >> n2) & (function_dim() - 1);
    }
    [[nodiscard]] std::uint64_t j2_of_local(std::uint64_t local) const {
        return local & (N2() - 1);
    }

    /// Bit position, inside a stored vector index, of qubit 0 (ancilla) or a
    /// function qubit 1..m.
    [[nodiscard]] int local_bit_of_qubit(int qubit) const {
        if (qubit < 0 || qubit > m)
            detail::fail_validation("qubit " + std::to_string(qubit) +
                                    " is not the ancilla or a function qubit");
        return m + n2 - qubit;
    }

    void check_capacity(const Limits &limits) const {
        if (constituent_dim() > limits.max_constituent_amplitudes)
            throw CapacityError("constituent vector of 2^" + std::to_string(coherent_qubits()) +
                                " amplitudes exceeds the configured bound");
        if (n1 >= 63 || (N1() > limits.max_total_amplitudes / constituent_dim()))
            throw CapacityError("ensemble of 2^" + std::to_string(n1) +
                                " constituents exceeds the configured bound");
    }

    friend bool operator==(const RegisterLayout &, const RegisterLayout &) = default;
};

} // namespace pqc
