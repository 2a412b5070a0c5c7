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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pqc/ensemble.hpp"
#include "pqc/fourier.hpp"
#include "pqc/gates.hpp"
#include "pqc/parallel.hpp"

namespace pqc {

/// Instructions a CircuitProgram is made of; one per primitive gate.
namespace op {
struct HadamardN2 {
    friend bool operator==(const HadamardN2 &, const HadamardN2 &) = default;
};
struct PhaseOnMarked {
    std::uint64_t marked = 0;
    double phi = 0.0;
    friend bool operator==(const PhaseOnMarked &, const PhaseOnMarked &) = default;
};
struct PhaseOnZeroN2 {
    double phi = 0.0;
    friend bool operator==(const PhaseOnZeroN2 &, const PhaseOnZeroN2 &) = default;
};
struct FlipFunctionIfMarked {
    std::uint64_t marked = 0;
    int target = 0;
    friend bool operator==(const FlipFunctionIfMarked &, const FlipFunctionIfMarked &) = default;
};
struct ApplyUnitaryN2F {
    DenseMatrix unitary;
    friend bool operator==(const ApplyUnitaryN2F &, const ApplyUnitaryN2F &) = default;
};
struct QftN2 {
    friend bool operator==(const QftN2 &, const QftN2 &) = default;
};
struct ModExp {
    std::uint64_t modulus = 2;
    std::uint64_t base = 1;
    friend bool operator==(const ModExp &, const ModExp &) = default;
};
} // namespace op

using Operation = std::variant<op::HadamardN2, op::PhaseOnMarked, op::PhaseOnZeroN2,
                               op::FlipFunctionIfMarked, op::ApplyUnitaryN2F, op::QftN2,
                               op::ModExp>;

inline const char *op_name(const Operation &operation) {
    return std::visit(
        [](const auto &o) -> const char * {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, op::HadamardN2>)
                return "hadamard_n2";
            else if constexpr (std::is_same_v<T, op::PhaseOnMarked>)
                return "phase_on_marked";
            else if constexpr (std::is_same_v<T, op::PhaseOnZeroN2>)
                return "phase_on_zero_n2";
            else if constexpr (std::is_same_v<T, op::FlipFunctionIfMarked>)
                return "flip_function_if_marked";
            else if constexpr (std::is_same_v<T, op::ApplyUnitaryN2F>)
                return "apply_unitary_n2f";
            else if constexpr (std::is_same_v<T, op::QftN2>)
                return "qft_n2";
            else
                return "modexp_into_function";
        },
        operation);
}

/// Applies one instruction to one constituent. Unitarity of dense matrices is
/// assumed to have been checked by CircuitProgram::validate.
inline void apply_operation(const RegisterLayout &layout, ConstituentState &state,
                            const Operation &operation) {
    std::visit(
        [&](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, op::HadamardN2>)
                hadamard_n2(layout, state);
            else if constexpr (std::is_same_v<T, op::PhaseOnMarked>)
                phase_on_marked(layout, state, o.marked, o.phi);
            else if constexpr (std::is_same_v<T, op::PhaseOnZeroN2>)
                phase_on_zero_n2(layout, state, o.phi);
            else if constexpr (std::is_same_v<T, op::FlipFunctionIfMarked>)
                flip_function_if_marked(layout, state, o.marked, o.target);
            else if constexpr (std::is_same_v<T, op::ApplyUnitaryN2F>)
                apply_unitary_n2f(layout, state, o.unitary, false);
            else if constexpr (std::is_same_v<T, op::QftN2>)
                qft_n2(layout, state);
            else
                modexp_into_function(layout, state, o.modulus, o.base);
        },
        operation);
}

/// The instruction stream U_c shared by every constituent.
struct CircuitProgram {
    std::vector<Operation> ops;

    /// Throws ValidationError when an instruction does not fit `layout`.
    void validate(const RegisterLayout &layout) const {
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const std::string where = "op " + std::to_string(i) + " (" + op_name(ops[i]) + "): ";
            std::visit(
                [&](const auto &o) {
                    using T = std::decay_t<decltype(o)>;
                    if constexpr (std::is_same_v<T, op::PhaseOnMarked>) {
                        if (o.marked >= layout.N())
                            detail::fail_validation(where + "marked label out of range");
                    } else if constexpr (std::is_same_v<T, op::FlipFunctionIfMarked>) {
                        if (o.marked >= layout.N())
                            detail::fail_validation(where + "marked label out of range");
                        if (o.target < 0 || o.target > layout.m)
                            detail::fail_validation(where + "target qubit out of range");
                    } else if constexpr (std::is_same_v<T, op::ApplyUnitaryN2F>) {
                        if (o.unitary.dim() != layout.slice_dim())
                            detail::fail_validation(where + "unitary has the wrong dimension");
                        if (!o.unitary.is_unitary())
                            detail::fail_validation(where + "matrix is not unitary");
                    } else if constexpr (std::is_same_v<T, op::ModExp>) {
                        if (o.modulus < 2 || layout.function_dim() < o.modulus)
                            detail::fail_validation(where + "modulus does not fit the function register");
                        if (std::gcd(o.base % o.modulus, o.modulus) != 1)
                            detail::fail_validation(where + "base and modulus are not coprime");
                    }
                },
                ops[i]);
        }
    }

    /// Number of marked-state-conditioned instructions (oracle queries).
    [[nodiscard]] std::size_t oracle_calls() const {
        return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](const auto &o) {
            return std::holds_alternative<op::PhaseOnMarked>(o) ||
                   std::holds_alternative<op::FlipFunctionIfMarked>(o);
        }));
    }

    friend bool operator==(const CircuitProgram &, const CircuitProgram &) = default;
};

struct ExecPolicy {
    std::size_t worker_count = 1;
    /// Constituents per chunk; 0 splits evenly across workers.
    std::size_t chunk_size = 0;
    std::uint64_t master_seed = 0;
    Limits limits{};
};

/**
 * Runs `program` on every constituent. Parallelism is across constituents
 * only and each one is evolved by a single thread in program order, so the
 * output is bit-identical for any worker count. Output is ordered by j1.
 */
inline Ensemble execute(const Ensemble &ensemble, const CircuitProgram &program,
                        const ExecPolicy &policy = {}) {
    if (policy.worker_count < 1)
        detail::fail_validation("worker_count must be at least 1");
    ensemble.layout.check_capacity(policy.limits);
    program.validate(ensemble.layout);
    Ensemble out = ensemble;
    const auto &layout = out.layout;
    for (const auto &c : out.constituents)
        detail::check_dim(layout, c);
    detail::parallel_for(out.constituents.size(), policy.worker_count, policy.chunk_size,
                         [&](std::size_t begin, std::size_t end) {
                             for (std::size_t i = begin; i < end; ++i)
                                 for (const auto &operation : program.ops)
                                     apply_operation(layout, out.constituents[i], operation);
                         });
    std::stable_sort(out.constituents.begin(), out.constituents.end(),
                     [](const auto &a, const auto &b) { return a.j1 < b.j1; });
    return out;
}

inline void to_json(nlohmann::json &j, const CircuitProgram &program) {
    j = nlohmann::json::array();
    for (const auto &operation : program.ops) {
        nlohmann::json args = nlohmann::json::object();
        std::visit(
            [&](const auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, op::PhaseOnMarked>) {
                    args["marked"] = o.marked;
                    args["phi"] = o.phi;
                } else if constexpr (std::is_same_v<T, op::PhaseOnZeroN2>) {
                    args["phi"] = o.phi;
                } else if constexpr (std::is_same_v<T, op::FlipFunctionIfMarked>) {
                    args["marked"] = o.marked;
                    args["target"] = o.target;
                } else if constexpr (std::is_same_v<T, op::ApplyUnitaryN2F>) {
                    auto rows = nlohmann::json::array();
                    for (std::size_t r = 0; r < o.unitary.dim(); ++r) {
                        auto row = nlohmann::json::array();
                        for (std::size_t c = 0; c < o.unitary.dim(); ++c)
                            row.push_back({o.unitary(r, c).real(), o.unitary(r, c).imag()});
                        rows.push_back(std::move(row));
                    }
                    args["U"] = std::move(rows);
                } else if constexpr (std::is_same_v<T, op::ModExp>) {
                    args["modulus"] = o.modulus;
                    args["base"] = o.base;
                }
            },
            operation);
        j.push_back({{"op", op_name(operation)}, {"args", std::move(args)}});
    }
}

inline void from_json(const nlohmann::json &j, CircuitProgram &program) {
    program.ops.clear();
    try {
        if (!j.is_array())
            detail::fail_validation("circuit program must be a JSON list");
        for (const auto &item : j) {
            const auto name = item.at("op").get<std::string>();
            const auto args = item.value("args", nlohmann::json::object());
            if (name == "hadamard_n2") {
                program.ops.emplace_back(op::HadamardN2{});
            } else if (name == "phase_on_marked") {
                program.ops.emplace_back(op::PhaseOnMarked{args.at("marked").get<std::uint64_t>(),
                                                           args.at("phi").get<double>()});
            } else if (name == "phase_on_zero_n2") {
                program.ops.emplace_back(op::PhaseOnZeroN2{args.at("phi").get<double>()});
            } else if (name == "flip_function_if_marked") {
                program.ops.emplace_back(op::FlipFunctionIfMarked{
                    args.at("marked").get<std::uint64_t>(), args.value("target", 0)});
            } else if (name == "apply_unitary_n2f") {
                const auto &rows = args.at("U");
                const std::size_t dim = rows.size();
                std::vector<Complex> data;
                data.reserve(dim * dim);
                for (const auto &row : rows) {
                    if (row.size() != dim)
                        detail::fail_validation("apply_unitary_n2f: matrix must be square");
                    for (const auto &v : row)
                        data.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
                }
                program.ops.emplace_back(op::ApplyUnitaryN2F{DenseMatrix(dim, std::move(data))});
            } else if (name == "qft_n2") {
                program.ops.emplace_back(op::QftN2{});
            } else if (name == "modexp_into_function") {
                program.ops.emplace_back(op::ModExp{args.at("modulus").get<std::uint64_t>(),
                                                    args.at("base").get<std::uint64_t>()});
            } else {
                detail::fail_validation("unknown op '" + name + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed circuit program: ") + e.what());
    }
}

} // namespace pqc
