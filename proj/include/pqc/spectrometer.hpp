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
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pqc/ensemble.hpp"
#include "pqc/error.hpp"
#include "pqc/parallel.hpp"
#include "pqc/rng.hpp"

/// Ancilla-spectrum readout. The ancilla's transition frequency is
/// omega0 + sum_k pi J_0k (-1)^{i_k} (rad/s) over the coupled qubits, and the
/// peak points up when the ancilla is |0>, down when it is |1>.
namespace pqc {

enum class Direction { up, down };
enum class SpectrumMode { sampled, expected };

/// Which qubits the ancilla is J-coupled to, in qubit order.
enum class CoupledRegister {
    argument,              ///< n1 then n2 (the default readout)
    n2_only,               ///< n2-register only
    function_and_argument, ///< function register, then n1, then n2
};

/// Exact fraction num/den, den > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    /// Smallest-denominator convergent p/q (q < 2^31) with p/q == value in
    /// double arithmetic; otherwise the exact dyadic value when it fits in
    /// 64 bits; otherwise the last convergent.
    static Rational from_double(double value) {
        if (value == 0.0 || !std::isfinite(value))
            return {0, 1};
        const double target = std::abs(value);
        const std::int64_t sign = value < 0 ? -1 : 1;
        std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        double x = target;
        for (int it = 0; it < 64; ++it) {
            const double a = std::floor(x);
            if (a > 4.0e18)
                break;
            const auto ai = static_cast<std::int64_t>(a);
            const std::int64_t p2 = ai * p1 + p0;
            const std::int64_t q2 = ai * q1 + q0;
            if (q2 > (std::int64_t{1} << 31) || p2 < 0)
                break;
            p0 = p1, q0 = q1, p1 = p2, q1 = q2;
            if (static_cast<double>(p1) / static_cast<double>(q1) == target)
                return {sign * p1, q1};
            if (x - a <= 0.0)
                break;
            x = 1.0 / (x - a);
        }
        int exp = 0;
        const double mant = std::frexp(target, &exp);
        auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
        int e = exp - 53;
        while (e < 0 && (m % 2) == 0) {
            m /= 2;
            ++e;
        }
        if (e >= 0 && e < 62 && m < (std::int64_t{1} << (62 - e)))
            return {sign * m * (std::int64_t{1} << e), 1};
        if (e < 0 && e > -62)
            return {sign * m, std::int64_t{1} << (-e)};
        return {sign * p1, q1 == 0 ? 1 : q1};
    }

    [[nodiscard]] std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    friend bool operator==(const Rational &, const Rational &) = default;
};

/// Couplings J_0k (Hz) between the ancilla and the coupled qubits, plus the
/// offset omega0 (rad/s).
class CouplingConfig {
  public:
    CouplingConfig() = default;

    /// Throws ValidationError unless every |J| > 0 and distinct bit strings
    /// give distinct frequencies.
    CouplingConfig(double omega0, std::vector<double> couplings,
                   CoupledRegister target = CoupledRegister::argument)
        : omega0_(omega0), couplings_(std::move(couplings)), target_(target) {
        check_injective();
    }

    [[nodiscard]] double omega0() const { return omega0_; }
    [[nodiscard]] const std::vector<double> &couplings() const { return couplings_; }
    [[nodiscard]] CoupledRegister target() const { return target_; }
    [[nodiscard]] int width() const { return static_cast<int>(couplings_.size()); }

    /// frequency / pi for the coupled-bit label (most significant bit first).
    [[nodiscard]] double freq_over_pi(std::uint64_t label) const {
        double acc = omega0_ / std::numbers::pi;
        const int w = width();
        for (int k = 0; k < w; ++k) {
            const bool one = ((label >> (w - 1 - k)) & 1U) != 0;
            acc += one ? -couplings_[k] : couplings_[k];
        }
        return acc;
    }

  private:
    void check_injective() const {
        if (couplings_.size() > 62)
            detail::fail_validation("at most 62 coupled qubits are supported");
        for (double j : couplings_)
            if (!(std::abs(j) > 0.0) || !std::isfinite(j))
                detail::fail_validation("every coupling constant must be finite and non-zero");
        // Superincreasing magnitudes make the sign pattern recoverable.
        std::vector<double> mags;
        for (double j : couplings_)
            mags.push_back(std::abs(j));
        std::sort(mags.begin(), mags.end());
        bool superincreasing = true;
        double partial = 0.0;
        for (double v : mags) {
            if (!(v > partial)) {
                superincreasing = false;
                break;
            }
            partial += v;
        }
        if (superincreasing)
            return;
        if (couplings_.size() > 20)
            detail::fail_validation(
                "cannot verify injectivity of a non-superincreasing coupling set wider than 20");
        std::set<double> seen;
        for (std::uint64_t label = 0; label < (std::uint64_t{1} << couplings_.size()); ++label)
            if (!seen.insert(freq_over_pi(label)).second)
                detail::fail_validation("coupling constants map two states to one frequency");
    }

    double omega0_ = 0.0;
    std::vector<double> couplings_;
    CoupledRegister target_ = CoupledRegister::argument;
};

/// omega0 = 0 and J_0k = 2^(n-k) Hz for k = 1..n, so the frequency is a
/// strictly decreasing affine function of the integer label:
/// freq/pi = (2^n - 1) - 2 * label.
inline CouplingConfig default_couplings(int n,
                                        CoupledRegister target = CoupledRegister::argument) {
    if (n < 0 || n > 52)
        detail::fail_validation("default couplings support 0..52 coupled qubits");
    std::vector<double> js;
    for (int k = 1; k <= n; ++k)
        js.push_back(std::ldexp(1.0, n - k));
    return CouplingConfig(0.0, std::move(js), target);
}

/// omega0 + sum_k pi J_0k (-1)^{bits[k]}, bits in qubit order.
inline double frequency_of(std::span<const std::uint8_t> bits, const CouplingConfig &config) {
    if (static_cast<int>(bits.size()) != config.width())
        detail::fail_validation("bit string length " + std::to_string(bits.size()) +
                                " does not match " + std::to_string(config.width()) +
                                " couplings");
    double acc = config.omega0();
    for (std::size_t k = 0; k < bits.size(); ++k)
        acc += std::numbers::pi * config.couplings()[k] * (bits[k] ? -1.0 : 1.0);
    return acc;
}

/// Same rule on an integer label of `config.width()` bits, MSB first.
inline double frequency_of(std::uint64_t label, const CouplingConfig &config) {
    std::vector<std::uint8_t> bits(config.width());
    for (int k = 0; k < config.width(); ++k)
        bits[k] = static_cast<std::uint8_t>((label >> (config.width() - 1 - k)) & 1U);
    return frequency_of(bits, config);
}

struct Peak {
    double frequency = 0.0;     ///< rad/s
    double freq_over_pi = 0.0;  ///< frequency / pi, exact for dyadic couplings
    Direction direction = Direction::up;
    std::uint64_t count = 0;    ///< sampled mode
    double intensity = 0.0;     ///< expected mode
    std::uint64_t state = 0;    ///< coupled-bit label the molecule collapsed to
    int state_width = 0;
    std::optional<std::uint64_t> j1; ///< expected mode only

    [[nodiscard]] std::string state_bits() const {
        std::string s(static_cast<std::size_t>(state_width), '0');
        for (int k = 0; k < state_width; ++k)
            if ((state >> (state_width - 1 - k)) & 1U)
                s[static_cast<std::size_t>(k)] = '1';
        return s;
    }
};

struct Spectrum {
    std::vector<Peak> peaks;
    SpectrumMode mode = SpectrumMode::expected;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t count_direction(Direction d) const {
        return static_cast<std::size_t>(std::count_if(
            peaks.begin(), peaks.end(), [d](const Peak &p) { return p.direction == d; }));
    }
};

/// Intensities at or below this are dropped from expected spectra.
inline constexpr double kPruneIntensity = 1e-14;

namespace detail {

inline std::uint64_t coupled_label(const RegisterLayout &layout, CoupledRegister target,
                                   std::uint64_t j1, std::uint64_t local) {
    const std::uint64_t j2 = layout.j2_of_local(local);
    switch (target) {
    case CoupledRegister::argument:
        return layout.combine(j1, j2);
    case CoupledRegister::n2_only:
        return j2;
    case CoupledRegister::function_and_argument:
        return (layout.function_of(local) << layout.n()) | layout.combine(j1, j2);
    }
    return 0;
}

inline int coupled_width(const RegisterLayout &layout, CoupledRegister target) {
    switch (target) {
    case CoupledRegister::argument:
        return layout.n();
    case CoupledRegister::n2_only:
        return layout.n2;
    case CoupledRegister::function_and_argument:
        return layout.m + layout.n();
    }
    return 0;
}

inline void check_coupling_width(const RegisterLayout &layout, const CouplingConfig &config) {
    const int need = coupled_width(layout, config.target());
    if (need != config.width())
        fail_validation("coupling configuration has " + std::to_string(config.width()) +
                        " constants but the readout couples " + std::to_string(need) +
                        " qubits");
}

inline Peak make_peak(const CouplingConfig &config, std::uint64_t label, Direction dir) {
    Peak p;
    p.frequency = frequency_of(label, config);
    p.freq_over_pi = config.freq_over_pi(label);
    p.direction = dir;
    p.state = label;
    p.state_width = config.width();
    return p;
}

inline void sort_peaks(std::vector<Peak> &peaks) {
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak &a, const Peak &b) {
        if (a.freq_over_pi != b.freq_over_pi)
            return a.freq_over_pi > b.freq_over_pi;
        if (a.direction != b.direction)
            return a.direction == Direction::up;
        return a.j1.value_or(0) < b.j1.value_or(0);
    });
}

} // namespace detail

/// Noise-free limit: one peak per (constituent, coupled label, direction)
/// with intensity weight * probability.
inline Spectrum measure_expected(const Ensemble &ensemble, const CouplingConfig &config) {
    const auto &layout = ensemble.layout;
    detail::check_coupling_width(layout, config);
    Spectrum spec;
    spec.mode = SpectrumMode::expected;
    for (const auto &c : ensemble.constituents) {
        std::map<std::pair<std::uint64_t, int>, double> mass;
        for (std::uint64_t idx = 0; idx < c.amplitudes.size(); ++idx) {
            const double p = std::norm(c.amplitudes[idx]);
            if (p == 0.0)
                continue;
            const auto label = detail::coupled_label(layout, config.target(), c.j1, idx);
            mass[{label, static_cast<int>(layout.ancilla_of(idx))}] += p;
        }
        for (const auto &[key, p] : mass) {
            const double intensity = c.weight * p;
            if (intensity <= kPruneIntensity)
                continue;
            Peak peak = detail::make_peak(config, key.first,
                                          key.second ? Direction::down : Direction::up);
            peak.intensity = intensity;
            peak.j1 = c.j1;
            spec.peaks.push_back(peak);
        }
    }
    detail::sort_peaks(spec.peaks);
    return spec;
}

/**
 * Simulates `molecules_per_constituent` single-molecule readouts per
 * constituent: each draws a basis state with Born probabilities from its own
 * stream derive_stream(seed, j1, "measure"). Peaks with equal frequency and
 * direction are merged by count. The result does not depend on `workers`.
 */
inline Spectrum measure_sampled(const Ensemble &ensemble, const CouplingConfig &config,
                                std::uint64_t molecules_per_constituent, std::uint64_t seed,
                                std::size_t workers = 1) {
    const auto &layout = ensemble.layout;
    detail::check_coupling_width(layout, config);
    if (molecules_per_constituent < 1)
        detail::fail_validation("molecules_per_constituent must be at least 1");

    using Counts = std::map<std::pair<std::uint64_t, int>, std::uint64_t>;
    std::vector<Counts> per_constituent(ensemble.constituents.size());
    detail::parallel_for(ensemble.constituents.size(), workers, 0,
                         [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto &c = ensemble.constituents[i];
            std::vector<double> cdf(c.amplitudes.size());
            double total = 0.0;
            for (std::size_t k = 0; k < cdf.size(); ++k) {
                total += std::norm(c.amplitudes[k]);
                cdf[k] = total;
            }
            auto rng = derive_stream(seed, c.j1, "measure");
            auto &counts = per_constituent[i];
            for (std::uint64_t s = 0; s < molecules_per_constituent; ++s) {
                const double u = rng.uniform01() * total;
                auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
                // strict upper bound never selects a zero-probability entry
                if (it == cdf.end())
                    --it;
                auto idx = static_cast<std::uint64_t>(it - cdf.begin());
                const auto label = detail::coupled_label(layout, config.target(), c.j1, idx);
                ++counts[{label, static_cast<int>(layout.ancilla_of(idx))}];
            }
        }
    });

    Counts merged;
    for (const auto &counts : per_constituent)
        for (const auto &[key, n] : counts)
            merged[key] += n;

    Spectrum spec;
    spec.mode = SpectrumMode::sampled;
    spec.seed = seed;
    for (const auto &[key, n] : merged) {
        Peak peak =
            detail::make_peak(config, key.first, key.second ? Direction::down : Direction::up);
        peak.count = n;
        spec.peaks.push_back(peak);
    }
    detail::sort_peaks(spec.peaks);
    return spec;
}

inline const char *to_string(Direction d) { return d == Direction::up ? "up" : "down"; }
inline const char *to_string(SpectrumMode m) {
    return m == SpectrumMode::expected ? "expected" : "sampled";
}

inline void to_json(nlohmann::json &j, const Spectrum &spec) {
    j = nlohmann::json::object();
    j["mode"] = to_string(spec.mode);
    if (spec.mode == SpectrumMode::sampled)
        j["seed"] = spec.seed;
    else
        j["seed"] = nullptr;
    auto peaks = nlohmann::json::array();
    for (const auto &p : spec.peaks) {
        const auto r = Rational::from_double(p.freq_over_pi);
        nlohmann::json item = {{"freq_over_pi", {r.num, r.den}},
                               {"dir", to_string(p.direction)}};
        if (spec.mode == SpectrumMode::sampled)
            item["count"] = p.count;
        else
            item["intensity"] = p.intensity;
        item["state_bits"] = p.state_bits();
        if (p.j1)
            item["j1"] = *p.j1;
        peaks.push_back(std::move(item));
    }
    j["peaks"] = std::move(peaks);
}

inline void from_json(const nlohmann::json &j, CouplingConfig &config) {
    try {
        auto target = CoupledRegister::argument;
        if (j.contains("target")) {
            const auto t = j.at("target").get<std::string>();
            if (t == "n2")
                target = CoupledRegister::n2_only;
            else if (t == "function_and_argument")
                target = CoupledRegister::function_and_argument;
            else if (t != "argument")
                detail::fail_validation("unknown coupling target '" + t + "'");
        }
        config = CouplingConfig(j.value("omega0", 0.0), j.at("J").get<std::vector<double>>(),
                                target);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed couplings document: ") + e.what());
    }
}

} // namespace pqc
