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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pqc/error.hpp"
#include "pqc/layout.hpp"
#include "pqc/state.hpp"

namespace pqc {

/**
 * Mixture of labelled pure constituents: rho = sum_c w_c |psi_c><psi_c|,
 * where each |psi_c> has its n1-register pinned to c.j1. Exact for states
 * that never couple distinct j1 labels, which covers every circuit in this
 * library.
 */
struct Ensemble {
    RegisterLayout layout;
    std::vector<ConstituentState> constituents;

    /// Throws ValidationError when an ensemble invariant is broken.
    void validate(double tol = kAmplitudeTol) const {
        layout.validate();
        double total = 0.0;
        std::vector<bool> seen;
        if (layout.n1 < 32)
            seen.assign(layout.N1(), false);
        for (const auto &c : constituents) {
            if (c.amplitudes.size() != layout.constituent_dim())
                detail::fail_validation("constituent " + std::to_string(c.j1) +
                                        " has the wrong vector length");
            if (c.j1 >= layout.N1())
                detail::fail_validation("constituent label " + std::to_string(c.j1) +
                                        " outside the n1-register");
            if (!seen.empty()) {
                if (seen[c.j1])
                    detail::fail_validation("duplicate constituent label " + std::to_string(c.j1));
                seen[c.j1] = true;
            }
            if (c.weight < 0.0)
                detail::fail_validation("negative constituent weight");
            if (std::abs(norm_squared(c.amplitudes) - 1.0) > tol)
                detail::fail_validation("constituent " + std::to_string(c.j1) +
                                        " is not normalised");
            total += c.weight;
        }
        if (std::abs(total - 1.0) > tol)
            detail::fail_validation("constituent weights do not sum to 1");
    }

    [[nodiscard]] const ConstituentState *find(std::uint64_t j1) const {
        for (const auto &c : constituents)
            if (c.j1 == j1)
                return &c;
        return nullptr;
    }

    friend bool operator==(const Ensemble &, const Ensemble &) = default;
};

/// N1 constituents of weight 1/N1; ancilla and function in |0>, n2-register
/// in the uniform superposition.
inline Ensemble prepare_uniform_ensemble(const RegisterLayout &layout, const Limits &limits = {}) {
    layout.validate();
    layout.check_capacity(limits);
    Ensemble ens{layout, {}};
    const std::uint64_t n1_dim = layout.N1();
    const double amp = 1.0 / std::sqrt(static_cast<double>(layout.N2()));
    const double weight = 1.0 / static_cast<double>(n1_dim);
    ens.constituents.reserve(n1_dim);
    for (std::uint64_t j1 = 0; j1 < n1_dim; ++j1) {
        ConstituentState c{j1, AmplitudeVector(layout.constituent_dim()), weight};
        for (std::uint64_t j2 = 0; j2 < layout.N2(); ++j2)
            c.amplitudes[layout.local_index(0, 0, j2)] = amp;
        ens.constituents.push_back(std::move(c));
    }
    return ens;
}

/**
 * General ensemble with n2 amplitudes c[j1][j2] per constituent (ancilla
 * and function in |0>). Each row must be normalised within 1e-9; rows are
 * then rescaled to unit norm.
 */
inline Ensemble prepare_general_ensemble(const RegisterLayout &layout,
                                         const std::vector<std::vector<Complex>> &coefficients,
                                         const Limits &limits = {}) {
    layout.validate();
    layout.check_capacity(limits);
    if (coefficients.size() != layout.N1())
        detail::fail_validation("expected " + std::to_string(layout.N1()) +
                                " coefficient rows, got " + std::to_string(coefficients.size()));
    std::string offending;
    for (std::size_t j1 = 0; j1 < coefficients.size(); ++j1) {
        if (coefficients[j1].size() != layout.N2())
            detail::fail_validation("coefficient row " + std::to_string(j1) + " has length " +
                                    std::to_string(coefficients[j1].size()) + ", expected " +
                                    std::to_string(layout.N2()));
        if (std::abs(norm_squared(coefficients[j1]) - 1.0) > kInputTol)
            offending += (offending.empty() ? "" : ", ") + std::to_string(j1);
    }
    if (!offending.empty())
        detail::fail_validation("coefficient rows not normalised for j1 = " + offending);

    Ensemble ens{layout, {}};
    const double weight = 1.0 / static_cast<double>(layout.N1());
    for (std::uint64_t j1 = 0; j1 < layout.N1(); ++j1) {
        const auto &row = coefficients[j1];
        const double scale = 1.0 / std::sqrt(norm_squared(row));
        ConstituentState c{j1, AmplitudeVector(layout.constituent_dim()), weight};
        for (std::uint64_t j2 = 0; j2 < layout.N2(); ++j2)
            c.amplitudes[layout.local_index(0, 0, j2)] = row[j2] * scale;
        ens.constituents.push_back(std::move(c));
    }
    return ens;
}

inline void to_json(nlohmann::json &j, const Ensemble &ens) {
    j = nlohmann::json::object();
    j["n1"] = ens.layout.n1;
    j["n2"] = ens.layout.n2;
    j["m"] = ens.layout.m;
    auto list = nlohmann::json::array();
    for (const auto &c : ens.constituents) {
        auto amps = nlohmann::json::array();
        for (const auto &a : c.amplitudes)
            amps.push_back({a.real(), a.imag()});
        list.push_back({{"j1", c.j1}, {"weight", c.weight}, {"amps", std::move(amps)}});
    }
    j["constituents"] = std::move(list);
}

inline void from_json(const nlohmann::json &j, Ensemble &ens) {
    try {
        ens.layout = RegisterLayout::make(j.at("n1").get<int>(), j.at("n2").get<int>(),
                                          j.at("m").get<int>());
        ens.constituents.clear();
        for (const auto &item : j.at("constituents")) {
            ConstituentState c;
            c.j1 = item.at("j1").get<std::uint64_t>();
            c.weight = item.at("weight").get<double>();
            for (const auto &pair : item.at("amps")) {
                if (!pair.is_array() || pair.size() != 2)
                    detail::fail_validation("amplitude must be a [re, im] pair");
                c.amplitudes.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
            ens.constituents.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed ensemble document: ") + e.what());
    }
    ens.validate(kInputTol);
}

} // namespace pqc
