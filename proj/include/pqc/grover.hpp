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

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pqc/ensemble.hpp"
#include "pqc/error.hpp"
#include "pqc/exec.hpp"
#include "pqc/gates.hpp"
#include "pqc/rng.hpp"
#include "pqc/spectrometer.hpp"

namespace pqc {

/// Parameters of the zero-failure (phase-matched) search over N2 items.
struct GroverParams {
    std::uint64_t N2 = 1;
    double beta = std::numbers::pi / 2;
    /// Iterations of the four-step loop.
    std::uint64_t J = 0;
    /// Phase applied by the oracle and by the |0...0> rotation.
    double phi = 0.0;
    /// False only for N2 = 1, where no iteration runs and phi is unused.
    bool phi_used = false;

    /// Oracle queries: one per iteration plus the final marking query.
    [[nodiscard]] std::uint64_t queries() const { return J + 1; }
};

/**
 * Rotation angle that makes `iterations` phase-matched Grover iterations
 * land exactly on the marked item in a database of N2 items:
 * phi = 2 arcsin(sqrt(N2) sin(pi / (4 iterations + 2))). Throws when the
 * argument of arcsin exceeds 1, i.e. too few iterations for exact search.
 */
inline double phase_matched_angle(std::uint64_t N2, std::uint64_t iterations) {
    if (iterations == 0)
        detail::fail_validation("phase matching needs at least one iteration");
    const double x = std::sqrt(static_cast<double>(N2)) *
                     std::sin(std::numbers::pi / (4.0 * static_cast<double>(iterations) + 2.0));
    if (x > 1.0 + 1e-12)
        detail::fail_validation(std::to_string(iterations) +
                                " iterations cannot reach certainty for N2 = " +
                                std::to_string(N2));
    return 2.0 * std::asin(std::min(1.0, x));
}

inline constexpr std::uint64_t kMaxIterations = std::uint64_t{1} << 20;

/**
 * beta = arcsin(1/sqrt(N2)); J - 1 is the integer part of
 * (pi/2 - beta) / (2 beta), about pi sqrt(N2) / 4. The integer part is
 * taken with a 1e-9 allowance so exact integers (N2 = 4 gives 1) are not
 * lost to rounding. `iterations_override` replaces J; it must still admit a
 * phase-matched angle and stay within kMaxIterations.
 */
inline GroverParams grover_params(std::uint64_t N2,
                                  std::optional<std::uint64_t> iterations_override = {}) {
    if (N2 == 0 || !std::has_single_bit(N2))
        detail::fail_validation("N2 must be a power of two, got " + std::to_string(N2));
    GroverParams p;
    p.N2 = N2;
    p.beta = std::asin(1.0 / std::sqrt(static_cast<double>(N2)));
    if (N2 == 1) {
        if (iterations_override && *iterations_override != 0)
            detail::fail_validation("N2 = 1 runs no iterations");
        return p;
    }
    const double ratio = (std::numbers::pi / 2 - p.beta) / (2 * p.beta);
    p.J = static_cast<std::uint64_t>(std::floor(ratio + 1e-9)) + 1;
    if (iterations_override) {
        if (*iterations_override > kMaxIterations)
            detail::fail_validation("iteration override above " + std::to_string(kMaxIterations));
        p.J = *iterations_override;
    }
    p.phi = phase_matched_angle(N2, p.J);
    p.phi_used = true;
    return p;
}

/// Molecule budget: N_E molecules grouped into logical molecules of N_s.
struct ResourceBudget {
    static constexpr double kAvogadro = 6.022e23;

    double N_E = kAvogadro;
    double N_s = 1.0;

    /// log2(N_E / N_s) rounded to the nearest integer; 79 at Avogadro scale.
    [[nodiscard]] int max_n1() const {
        if (!(N_E >= 1.0) || !(N_s >= 1.0) || N_s > N_E)
            detail::fail_validation("budget needs N_E >= N_s >= 1");
        return static_cast<int>(std::lround(std::log2(N_E / N_s)));
    }

    void check(int n1) const {
        const int limit = max_n1();
        if (n1 > limit)
            throw BudgetError("n1 = " + std::to_string(n1) + " exceeds the molecule budget (max " +
                              std::to_string(limit) + ")");
    }
};

/// Phase on the marked item, H on n2, phase on |0...0>, H on n2.
inline void grover_iteration(const RegisterLayout &layout, ConstituentState &state,
                             std::uint64_t marked_full, double phi) {
    phase_on_marked(layout, state, marked_full, phi);
    hadamard_n2(layout, state);
    phase_on_zero_n2(layout, state, phi);
    hadamard_n2(layout, state);
}

inline void grover_iteration(const RegisterLayout &layout, ConstituentState &state,
                             std::uint64_t marked_full, const GroverParams &params) {
    grover_iteration(layout, state, marked_full, params.phi);
}

/// J iterations followed by the marking query that flips the ancilla.
inline CircuitProgram grover_program(std::uint64_t marked_full, const GroverParams &params) {
    CircuitProgram program;
    for (std::uint64_t i = 0; i < params.J; ++i) {
        program.ops.emplace_back(op::PhaseOnMarked{marked_full, params.phi});
        program.ops.emplace_back(op::HadamardN2{});
        program.ops.emplace_back(op::PhaseOnZeroN2{params.phi});
        program.ops.emplace_back(op::HadamardN2{});
    }
    program.ops.emplace_back(op::FlipFunctionIfMarked{marked_full, 0});
    return program;
}

struct SearchReport {
    std::uint64_t marked_full = 0;
    std::uint64_t queries_used = 0;
    double success_probability = 0.0;
    Spectrum spectrum;
    GroverParams params;
};

inline void to_json(nlohmann::json &j, const SearchReport &report) {
    j = nlohmann::json{{"marked", report.marked_full},
                       {"queries", report.queries_used},
                       {"p_success", report.success_probability},
                       {"spectrum", report.spectrum}};
}

struct GroverOptions {
    std::optional<ResourceBudget> budget;
    std::optional<std::uint64_t> iterations_override;
    ExecPolicy policy{};
    SpectrumMode mode = SpectrumMode::expected;
    std::uint64_t molecules_per_constituent = 1;
    std::uint64_t seed = 0;
    /// Defaults to default_couplings(n) on the argument register.
    std::optional<CouplingConfig> couplings;
};

struct GroverRun {
    Ensemble ensemble;
    SearchReport report;
};

/**
 * Parallel search: every constituent runs the same J iterations on its own
 * sub-database of N2 items, then a final query flips the ancilla of the
 * constituent holding the marked item. The ancilla doubles as the one-qubit
 * function register, so the layout must have m = 0.
 */
inline GroverRun run_pqc_grover(const RegisterLayout &layout, std::uint64_t marked_full,
                                const GroverOptions &options = {}) {
    if (options.budget)
        options.budget->check(layout.n1);
    layout.validate();
    if (layout.m != 0)
        detail::fail_validation("the search uses the ancilla as its function qubit; m must be 0");
    detail::check_marked(layout, marked_full);

    const GroverParams params = grover_params(layout.N2(), options.iterations_override);
    const CircuitProgram program = grover_program(marked_full, params);
    Ensemble ens = execute(prepare_uniform_ensemble(layout, options.policy.limits), program,
                           options.policy);

    SearchReport report;
    report.marked_full = marked_full;
    report.queries_used = program.oracle_calls();
    report.params = params;
    if (const auto *c = ens.find(layout.j1_of(marked_full)))
        report.success_probability =
            std::norm(c->amplitudes[layout.local_index(1, 0, layout.j2_of(marked_full))]);

    const CouplingConfig config = options.couplings ? *options.couplings : default_couplings(layout.n());
    report.spectrum = options.mode == SpectrumMode::expected
                          ? measure_expected(ens, config)
                          : measure_sampled(ens, config, options.molecules_per_constituent,
                                            options.seed, options.policy.worker_count);
    return {std::move(ens), std::move(report)};
}

struct TradeoffRow {
    int n1 = 0;
    std::uint64_t N1 = 1;
    double Nq_asymptotic = 0.0;
    std::uint64_t Nq_realized = 0;
    double product_asymptotic = 0.0;
    double product_realized = 0.0;
};

/// Query count against molecule count for each split of an n-qubit search.
inline std::vector<TradeoffRow> sweep_tradeoff(int n, const std::vector<int> &n1_values) {
    if (n < 1 || n > RegisterLayout::kMaxQubits)
        detail::fail_validation("sweep needs 1 <= n <= 62");
    const double N = std::ldexp(1.0, n);
    std::vector<TradeoffRow> rows;
    for (int n1 : n1_values) {
        if (n1 < 0 || n1 > n)
            detail::fail_validation("n1 = " + std::to_string(n1) + " outside [0, n]");
        TradeoffRow row;
        row.n1 = n1;
        row.N1 = std::uint64_t{1} << n1;
        const double n1_dim = static_cast<double>(row.N1);
        row.Nq_asymptotic = std::numbers::pi * std::sqrt(N / n1_dim) / 4.0;
        row.Nq_realized = grover_params(std::uint64_t{1} << (n - n1)).queries();
        row.product_asymptotic = row.Nq_asymptotic * row.Nq_asymptotic * n1_dim;
        row.product_realized =
            static_cast<double>(row.Nq_realized * row.Nq_realized) * n1_dim;
        rows.push_back(row);
    }
    return rows;
}

/// Born distribution after one standard (phi = pi) Grover iteration on a
/// pure uniform state of N items.
struct RpaDistribution {
    std::uint64_t N = 0;
    std::uint64_t marked = 0;
    double p_marked = 0.0;
    double p_other = 0.0;
    std::vector<double> probabilities;
};

inline RpaDistribution rpa_one_iteration_distribution(std::uint64_t N,
                                                      std::optional<std::uint64_t> marked = {}) {
    if (N < 4 || !std::has_single_bit(N))
        detail::fail_validation("RPA needs N = 2^n >= 4");
    const std::uint64_t target = marked.value_or(N - 1);
    if (target >= N)
        detail::fail_validation("marked item outside [0, N)");
    const auto layout = RegisterLayout::make(0, std::countr_zero(N), 0);
    auto ens = prepare_uniform_ensemble(layout);
    auto &state = ens.constituents.front();
    grover_iteration(layout, state, target, std::numbers::pi);

    RpaDistribution dist;
    dist.N = N;
    dist.marked = target;
    dist.probabilities.resize(N);
    for (std::uint64_t j = 0; j < N; ++j)
        dist.probabilities[j] = std::norm(state.amplitudes[layout.local_index(0, 0, j)]);
    dist.p_marked = dist.probabilities[target];
    dist.p_other = dist.probabilities[target == 0 ? 1 : 0];
    return dist;
}

struct VoteResult {
    std::uint64_t winner = 0;
    bool success = false;
    /// How often the marked item was drawn.
    std::uint64_t marked_count = 0;
};

/**
 * k single-iteration computers each report one Born sample; the most
 * frequent outcome wins, ties going to the smallest index. The stream is
 * derive_stream(seed, trial, "rpa").
 */
inline VoteResult rpa_majority_vote(const RpaDistribution &dist, std::uint64_t k,
                                    std::uint64_t seed, std::uint64_t trial = 0) {
    if (k < 1)
        detail::fail_validation("k must be at least 1");
    std::vector<double> cdf(dist.probabilities.size());
    double total = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        total += dist.probabilities[i];
        cdf[i] = total;
    }
    std::vector<std::uint64_t> counts(cdf.size(), 0);
    auto rng = derive_stream(seed, trial, "rpa");
    for (std::uint64_t s = 0; s < k; ++s) {
        auto it = std::upper_bound(cdf.begin(), cdf.end(), rng.uniform01() * total);
        if (it == cdf.end())
            --it;
        ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    VoteResult result;
    for (std::uint64_t i = 0; i < counts.size(); ++i)
        if (counts[i] > counts[result.winner])
            result.winner = i;
    result.success = result.winner == dist.marked;
    result.marked_count = counts[dist.marked];
    return result;
}

inline VoteResult rpa_majority_vote(std::uint64_t N, std::uint64_t k, std::uint64_t seed) {
    return rpa_majority_vote(rpa_one_iteration_distribution(N), k, seed);
}

} // namespace pqc
