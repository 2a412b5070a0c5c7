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
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pqc/ensemble.hpp"
#include "pqc/exec.hpp"
#include "pqc/fourier.hpp"
#include "pqc/gates.hpp"
#include "pqc/spectrometer.hpp"

namespace pqc {

/// Order finding for a^x mod N_b. The argument register has n qubits with
/// N_b^2 < 2^n < 2 N_b^2, split into n1 mixed and n2 coherent qubits; the
/// function register has m qubits with 2^m >= N_b.
struct ShorParams {
    std::uint64_t Nb = 15;
    std::uint64_t a = 7;
    int n = 8;
    int n1 = 2;
    int n2 = 6;
    int m = 4;

    static constexpr std::uint64_t kMaxModulus = 1'000'000;

    /// Argument width for N_b; throws when no power of two fits strictly.
    static int argument_qubits(std::uint64_t Nb) {
        const std::uint64_t sq = Nb * Nb;
        const int n = std::bit_width(sq); // smallest n with 2^n > Nb^2
        if (!((std::uint64_t{1} << n) < 2 * sq))
            detail::fail_validation("no n satisfies N_b^2 < 2^n < 2 N_b^2 for N_b = " +
                                    std::to_string(Nb));
        return n;
    }

    /**
     * When only one of n1/n2 is given the other completes n; when neither is
     * given n1 = min(2, n - 1).
     */
    static ShorParams make(std::uint64_t Nb, std::uint64_t a, std::optional<int> n1 = {},
                           std::optional<int> n2 = {}) {
        if (Nb < 3 || Nb > kMaxModulus)
            detail::fail_validation("N_b must lie in [3, 10^6]");
        if (a < 1 || a >= Nb)
            detail::fail_validation("a must lie in [1, N_b)");
        if (std::gcd(a, Nb) != 1)
            detail::fail_validation("gcd(a, N_b) = " + std::to_string(std::gcd(a, Nb)) +
                                    " != 1");
        ShorParams p;
        p.Nb = Nb;
        p.a = a;
        p.n = argument_qubits(Nb);
        p.m = std::bit_width(Nb - 1);
        if (n1 && n2) {
            p.n1 = *n1;
            p.n2 = *n2;
            if (p.n1 + p.n2 != p.n)
                detail::fail_validation("n1 + n2 must equal n = " + std::to_string(p.n));
        } else if (n1) {
            p.n1 = *n1;
            p.n2 = p.n - p.n1;
        } else if (n2) {
            p.n2 = *n2;
            p.n1 = p.n - p.n2;
        } else {
            p.n1 = std::min(2, p.n - 1);
            p.n2 = p.n - p.n1;
        }
        if (p.n1 < 0 || p.n2 < 1)
            detail::fail_validation("split needs n1 >= 0 and n2 >= 1");
        return p;
    }

    [[nodiscard]] RegisterLayout layout() const { return RegisterLayout::make(n1, n2, m); }
};

struct ShorAdvisory {
    enum class Level { pass, warn, fail };
    Level level = Level::pass;
    std::string message;
};

/**
 * The Fourier transform only runs over the n2-register, so interference
 * sharpens with N2. Thresholds: N2 >= N_b^2 passes, N2 >= N_b warns, smaller
 * fails. Advisory only; nothing is blocked.
 */
inline ShorAdvisory n1_validity_check(const ShorParams &params) {
    const auto n2_dim = std::uint64_t{1} << params.n2;
    if (n2_dim >= params.Nb * params.Nb)
        return {ShorAdvisory::Level::pass, "N2 >= N_b^2"};
    if (n2_dim >= params.Nb)
        return {ShorAdvisory::Level::warn,
                "N2 = " + std::to_string(n2_dim) + " < N_b^2 = " +
                    std::to_string(params.Nb * params.Nb) + ": peaks may be broad"};
    return {ShorAdvisory::Level::fail, "N2 = " + std::to_string(n2_dim) + " < N_b = " +
                                           std::to_string(params.Nb) + ": n1 too large"};
}

inline Ensemble modexp_into_function(const Ensemble &ensemble, const ShorParams &params,
                                     const ExecPolicy &policy = {}) {
    if (ensemble.layout != params.layout())
        detail::fail_validation("ensemble layout does not match the order-finding parameters");
    CircuitProgram program{{op::ModExp{params.Nb, params.a}}};
    return execute(ensemble, program, policy);
}

/// Probability of each n2 value in one constituent (summed over ancilla and
/// function register).
inline std::vector<double> n2_distribution(const RegisterLayout &layout,
                                           const ConstituentState &state) {
    std::vector<double> dist(layout.N2(), 0.0);
    for (std::uint64_t idx = 0; idx < state.amplitudes.size(); ++idx)
        dist[layout.j2_of_local(idx)] += std::norm(state.amplitudes[idx]);
    return dist;
}

struct PeriodReport {
    std::uint64_t Nb = 0;
    std::uint64_t a = 0;
    std::vector<std::uint64_t> peak_positions;
    /// Recovered order; when no candidate satisfies a^r = 1 (mod N_b) this is
    /// the unverified N2 / gcd guess and order_verified is false.
    std::uint64_t r = 0;
    bool order_verified = false;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> factors;
    std::uint64_t transitions_observed = 0;
    std::string method = "gcd";
};

inline void to_json(nlohmann::json &j, const PeriodReport &report) {
    j = nlohmann::json{{"Nb", report.Nb}, {"a", report.a}, {"r", report.r}};
    if (report.factors)
        j["factors"] = {report.factors->first, report.factors->second};
    else
        j["factors"] = nullptr;
    j["peaks"] = report.peak_positions;
    j["transitions"] = report.transitions_observed;
    j["method"] = report.method;
}

/// A readout position on the n2-register and its weight (intensity or count).
struct WeightedPosition {
    std::uint64_t position = 0;
    double weight = 0.0;
};

namespace detail {

/// Denominators of the continued-fraction convergents of num/den not above
/// `bound`.
inline std::vector<std::uint64_t> convergent_denominators(std::uint64_t num, std::uint64_t den,
                                                          std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    std::uint64_t q_prev = 1, q = 0; // q_{-2}, q_{-1}
    while (den != 0) {
        const std::uint64_t coeff = num / den;
        const std::uint64_t q_next = coeff * q + q_prev;
        if (q_next > bound)
            break;
        if (q_next > 1)
            out.push_back(q_next);
        q_prev = q;
        q = q_next;
        const std::uint64_t rem = num % den;
        num = den;
        den = rem;
    }
    return out;
}

/// Smallest divisor d of a valid order r with a^d = 1.
inline std::uint64_t reduce_order(std::uint64_t a, std::uint64_t r, std::uint64_t Nb) {
    std::uint64_t rest = r;
    auto strip = [&](std::uint64_t p) {
        while (rest % p == 0)
            rest /= p;
        while (r % p == 0 && powmod(a, r / p, Nb) == 1)
            r /= p;
    };
    for (std::uint64_t p = 2; p * p <= rest; ++p)
        if (rest % p == 0)
            strip(p);
    if (rest > 1)
        strip(rest);
    return r;
}

} // namespace detail

/**
 * Recovers the order r of a mod N_b from readout positions on an N2-point
 * Fourier grid. Only the ceil(2 log2 N_b) heaviest positions are used.
 * First r = N2 / gcd(N2, positions) is tried (exact when r divides N2);
 * otherwise continued-fraction denominators of position / N2 bounded by N_b
 * are tried, together with their pairwise lcms and small multiples. Any
 * accepted r is reduced to the minimal order. Factors come from
 * gcd(a^{r/2} +- 1, N_b) when r is even and a^{r/2} != -1.
 */
inline PeriodReport extract_period(std::vector<WeightedPosition> peaks, std::uint64_t N2,
                                   std::uint64_t Nb, std::uint64_t a) {
    if (N2 == 0 || !std::has_single_bit(N2))
        detail::fail_validation("N2 must be a power of two");
    PeriodReport report;
    report.Nb = Nb;
    report.a = a;

    std::stable_sort(peaks.begin(), peaks.end(), [](const auto &x, const auto &y) {
        if (x.weight != y.weight)
            return x.weight > y.weight;
        return x.position < y.position;
    });
    const auto keep = static_cast<std::size_t>(std::ceil(2.0 * std::log2(static_cast<double>(Nb))));
    if (peaks.size() > keep)
        peaks.resize(keep);
    std::set<std::uint64_t> positions;
    for (const auto &p : peaks) {
        if (p.position >= N2)
            detail::fail_validation("peak position outside the n2-register");
        positions.insert(p.position);
    }
    report.peak_positions.assign(positions.begin(), positions.end());

    auto is_order = [&](std::uint64_t r) { return r > 0 && detail::powmod(a, r, Nb) == 1; };

    std::uint64_t g = N2;
    for (auto p : positions)
        g = std::gcd(g, p);
    const std::uint64_t exact = N2 / g;
    if (is_order(exact)) {
        report.r = detail::reduce_order(a, exact, Nb);
        report.order_verified = true;
        report.method = "gcd";
    } else {
        report.method = "cf";
        std::set<std::uint64_t> candidates;
        for (auto p : positions)
            if (p != 0)
                for (auto q : detail::convergent_denominators(p, N2, Nb))
                    candidates.insert(q);
        std::vector<std::uint64_t> base(candidates.begin(), candidates.end());
        for (std::size_t i = 0; i < base.size(); ++i)
            for (std::size_t k = i + 1; k < base.size(); ++k) {
                const auto l = std::lcm(base[i], base[k]);
                if (l <= Nb)
                    candidates.insert(l);
            }
        std::uint64_t best = 0;
        for (auto c : candidates)
            for (std::uint64_t mult = c; mult <= Nb; mult += c)
                if (is_order(mult)) {
                    if (best == 0 || mult < best)
                        best = mult;
                    break;
                }
        if (best != 0) {
            report.r = detail::reduce_order(a, best, Nb);
            report.order_verified = true;
        } else {
            report.r = exact;
        }
    }

    if (report.order_verified && report.r % 2 == 0) {
        const std::uint64_t half = detail::powmod(a, report.r / 2, Nb);
        if (half != Nb - 1) {
            const std::uint64_t f1 = std::gcd(half + Nb - 1, Nb);
            const std::uint64_t f2 = std::gcd(half + 1, Nb);
            if (f1 > 1 && f1 < Nb && f2 > 1 && f2 < Nb)
                report.factors = std::minmax(f1, f2);
        }
    }
    return report;
}

struct ShorOptions {
    SpectrumMode mode = SpectrumMode::expected;
    std::uint64_t molecules_per_constituent = 1;
    ExecPolicy policy{};
};

struct ShorRun {
    Ensemble ensemble;
    Spectrum spectrum;
    PeriodReport report;
};

/**
 * Uniform ensemble -> modular exponentiation -> Fourier transform on the
 * n2-register of every constituent -> ancilla readout coupled to the
 * n2-register only -> period extraction. In expected mode every
 * (constituent, peak) pair counts as one transition; in sampled mode every
 * sampled molecule does.
 */
inline ShorRun run_pqc_shor(const ShorParams &params, std::uint64_t seed,
                            const ShorOptions &options = {}) {
    const auto layout = params.layout();
    CircuitProgram program{{op::ModExp{params.Nb, params.a}, op::QftN2{}}};
    Ensemble ens =
        execute(prepare_uniform_ensemble(layout, options.policy.limits), program, options.policy);

    const auto config = default_couplings(layout.n2, CoupledRegister::n2_only);
    Spectrum spectrum = options.mode == SpectrumMode::expected
                            ? measure_expected(ens, config)
                            : measure_sampled(ens, config, options.molecules_per_constituent,
                                              seed, options.policy.worker_count);

    std::map<std::uint64_t, double> weight;
    std::uint64_t transitions = 0;
    for (const auto &p : spectrum.peaks) {
        const double w = spectrum.mode == SpectrumMode::expected ? p.intensity
                                                                 : static_cast<double>(p.count);
        weight[p.state] += w;
        transitions += spectrum.mode == SpectrumMode::expected ? 1 : p.count;
    }
    std::vector<WeightedPosition> positions;
    for (const auto &[pos, w] : weight)
        positions.push_back({pos, w});

    PeriodReport report = extract_period(std::move(positions), layout.N2(), params.Nb, params.a);
    report.transitions_observed = transitions;
    return {std::move(ens), std::move(spectrum), std::move(report)};
}

} // namespace pqc
