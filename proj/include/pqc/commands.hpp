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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pqc/pqc.hpp"

/// Subcommands of the `pqc` tool, callable without a process boundary.
/// Each returns the process exit code.
namespace pqc::cli {

enum ExitCode : int {
    kOk = 0,
    kAlgorithmFailure = 1,
    kInvalidConfig = 2,
    kOverBudget = 3,
};

/// Seed from the PQC_SEED environment variable, 0 when unset.
inline std::uint64_t default_seed() {
    const char *env = std::getenv("PQC_SEED");
    if (env == nullptr || *env == '\0')
        return 0;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || env[0] == '-')
        throw ValidationError(std::string("PQC_SEED is not an unsigned integer: ") + env);
    return v;
}

namespace detail {

inline std::string fmt_double(double v, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline std::string fmt_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline void write_text(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ValidationError("cannot open '" + path + "' for writing");
    f << text;
    if (!f)
        throw ValidationError("failed writing '" + path + "'");
}

inline std::string read_text(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline nlohmann::json read_json(const std::string &path) {
    try {
        return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_json(const std::string &path, const nlohmann::json &j) {
    write_text(path, j.dump(2) + "\n");
}

inline CouplingConfig load_couplings(const std::string &path) {
    return read_json(path).get<CouplingConfig>();
}

/// One line per peak: frequency as an exact multiple of pi, direction, weight.
inline void print_spectrum(std::ostream &out, const Spectrum &spec) {
    out << "spectrum mode=" << to_string(spec.mode) << " peaks=" << spec.peaks.size() << "\n";
    for (const auto &p : spec.peaks) {
        out << "  freq/pi=" << Rational::from_double(p.freq_over_pi).str()
            << " dir=" << to_string(p.direction) << " state=" << p.state_bits();
        if (spec.mode == SpectrumMode::expected)
            out << " weight=" << fmt_double(p.intensity);
        else
            out << " count=" << p.count;
        if (p.j1)
            out << " j1=" << *p.j1;
        out << "\n";
    }
}

template <class Fn>
int guarded(std::ostream &err, Fn &&fn) {
    try {
        return fn();
    } catch (const BudgetError &e) {
        err << "budget: " << e.what() << "\n";
        return kOverBudget;
    } catch (const Error &e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kInvalidConfig;
    } catch (const nlohmann::json::exception &e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidConfig;
    }
}

} // namespace detail

struct GroverConfig {
    int n1 = 0;
    int n2 = 1;
    std::uint64_t marked = 0;
    std::optional<std::uint64_t> iterations;
    SpectrumMode mode = SpectrumMode::expected;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    ResourceBudget budget{};
    std::string couplings_file;
    std::string output;
    std::string ensemble_output;
};

/// Exit 0 iff the marked state was found with probability >= 1 - 1e-6.
inline int cmd_grover(const GroverConfig &cfg, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        cfg.budget.check(cfg.n1);
        const auto layout = RegisterLayout::make(cfg.n1, cfg.n2, 0);
        GroverOptions options;
        options.budget = cfg.budget;
        options.iterations_override = cfg.iterations;
        options.policy.worker_count = cfg.workers;
        options.policy.master_seed = cfg.seed;
        options.mode = cfg.mode;
        options.molecules_per_constituent = cfg.samples;
        options.seed = cfg.seed;
        if (!cfg.couplings_file.empty())
            options.couplings = detail::load_couplings(cfg.couplings_file);
        const auto run = run_pqc_grover(layout, cfg.marked, options);
        const auto &rep = run.report;

        out << "grover n1=" << cfg.n1 << " n2=" << cfg.n2 << " marked=" << rep.marked_full
            << " J=" << rep.params.J << " phi=" << detail::fmt_double(rep.params.phi)
            << " queries=" << rep.queries_used
            << " p_success=" << detail::fmt_double(rep.success_probability) << "\n";
        detail::print_spectrum(out, rep.spectrum);
        if (!cfg.output.empty())
            detail::write_json(cfg.output, nlohmann::json(rep));
        if (!cfg.ensemble_output.empty())
            detail::write_json(cfg.ensemble_output, nlohmann::json(run.ensemble));
        return rep.success_probability >= 1.0 - 1e-6 ? kOk : kAlgorithmFailure;
    });
}

struct ShorConfig {
    std::uint64_t Nb = 15;
    std::uint64_t a = 7;
    std::optional<int> n1;
    std::optional<int> n2;
    SpectrumMode mode = SpectrumMode::expected;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string output;
};

/// Exit 0 iff two nontrivial factors were recovered, 1 when a retry with a
/// different base is needed.
inline int cmd_shor(const ShorConfig &cfg, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        const auto params = ShorParams::make(cfg.Nb, cfg.a, cfg.n1, cfg.n2);
        const auto advisory = n1_validity_check(params);
        if (advisory.level != ShorAdvisory::Level::pass)
            err << "advisory (" << (advisory.level == ShorAdvisory::Level::warn ? "warn" : "fail")
                << "): " << advisory.message << "\n";
        ShorOptions options;
        options.mode = cfg.mode;
        options.molecules_per_constituent = cfg.samples;
        options.policy.worker_count = cfg.workers;
        options.policy.master_seed = cfg.seed;
        const auto run = run_pqc_shor(params, cfg.seed, options);
        const auto &rep = run.report;

        out << "shor Nb=" << params.Nb << " a=" << params.a << " n=" << params.n
            << " n1=" << params.n1 << " n2=" << params.n2 << " m=" << params.m << "\n";
        out << "peaks:";
        for (auto p : rep.peak_positions)
            out << " " << p;
        out << "\nr=" << rep.r << (rep.order_verified ? "" : " (unverified)")
            << " method=" << rep.method << " transitions=" << rep.transitions_observed << "\n";
        if (rep.factors)
            out << "factors: " << rep.factors->first << " x " << rep.factors->second << "\n";
        else
            out << "factors: none (retry with a different a)\n";
        if (!cfg.output.empty())
            detail::write_json(cfg.output, nlohmann::json(rep));
        return rep.factors ? kOk : kAlgorithmFailure;
    });
}

struct SweepConfig {
    int n = 0;
    bool realized = false;
    std::string output;
};

/// CSV "n1,N1,Nq_asym,Nq_real,product" for n1 = 0..n; the product column is
/// Nq_asym^2 N1, or (J+1)^2 N1 with `realized`.
inline int cmd_sweep(const SweepConfig &cfg, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        if (cfg.n < 1 || cfg.n > RegisterLayout::kMaxQubits)
            throw ValidationError("sweep needs 1 <= n <= 62");
        std::vector<int> splits;
        for (int n1 = 0; n1 <= cfg.n; ++n1)
            splits.push_back(n1);
        std::ostringstream csv;
        csv << "n1,N1,Nq_asym,Nq_real,product\n";
        for (const auto &row : sweep_tradeoff(cfg.n, splits))
            csv << row.n1 << "," << row.N1 << "," << detail::fmt_fixed(row.Nq_asymptotic) << ","
                << row.Nq_realized << ","
                << detail::fmt_fixed(cfg.realized ? row.product_realized : row.product_asymptotic)
                << "\n";
        out << csv.str();
        if (!cfg.output.empty())
            detail::write_text(cfg.output, csv.str());
        return kOk;
    });
}

struct RpaConfig {
    int n = 2;
    std::uint64_t k = 1;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> marked;
    std::string output;
};

inline int cmd_rpa(const RpaConfig &cfg, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        if (cfg.n < 2 || cfg.n > 24)
            throw ValidationError("rpa needs 2 <= n <= 24");
        if (cfg.k < 1 || cfg.trials < 1)
            throw ValidationError("k and trials must be at least 1");
        const std::uint64_t N = std::uint64_t{1} << cfg.n;
        const auto dist = rpa_one_iteration_distribution(N, cfg.marked);
        std::uint64_t wins = 0;
        std::uint64_t marked_draws = 0;
        std::uint64_t last_winner = 0;
        for (std::uint64_t t = 0; t < cfg.trials; ++t) {
            const auto vote = rpa_majority_vote(dist, cfg.k, cfg.seed, t);
            wins += vote.success ? 1 : 0;
            marked_draws += vote.marked_count;
            last_winner = vote.winner;
        }
        const double nd = static_cast<double>(N);
        const double closed = (3 * nd - 4) * (3 * nd - 4) / (nd * nd * nd);
        const double freq = static_cast<double>(marked_draws) /
                            (static_cast<double>(cfg.k) * static_cast<double>(cfg.trials));
        const double rate = static_cast<double>(wins) / static_cast<double>(cfg.trials);

        out << "rpa N=" << N << " marked=" << dist.marked << " k=" << cfg.k
            << " trials=" << cfg.trials << "\n"
            << "p_marked=" << detail::fmt_double(dist.p_marked)
            << " closed_form=" << detail::fmt_double(closed)
            << " p_other=" << detail::fmt_double(dist.p_other) << "\n"
            << "marked_frequency=" << detail::fmt_double(freq) << " success_rate="
            << detail::fmt_double(rate) << " winner=" << last_winner << "\n";
        if (!cfg.output.empty())
            detail::write_json(cfg.output, {{"N", N},
                                            {"marked", dist.marked},
                                            {"k", cfg.k},
                                            {"trials", cfg.trials},
                                            {"seed", cfg.seed},
                                            {"p_marked", dist.p_marked},
                                            {"p_other", dist.p_other},
                                            {"closed_form", closed},
                                            {"marked_frequency", freq},
                                            {"success_rate", rate},
                                            {"winner", last_winner}});
        return kOk;
    });
}

struct SpectrumConfig {
    std::string input;
    SpectrumMode mode = SpectrumMode::expected;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string couplings_file;
    std::string output;
};

/// Renders a saved ensemble through the ancilla readout.
inline int cmd_spectrum(const SpectrumConfig &cfg, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        const auto ens = detail::read_json(cfg.input).get<Ensemble>();
        const auto config = cfg.couplings_file.empty() ? default_couplings(ens.layout.n())
                                                       : detail::load_couplings(cfg.couplings_file);
        const auto spec = cfg.mode == SpectrumMode::expected
                              ? measure_expected(ens, config)
                              : measure_sampled(ens, config, cfg.samples, cfg.seed, cfg.workers);
        detail::print_spectrum(out, spec);
        if (!cfg.output.empty())
            detail::write_json(cfg.output, nlohmann::json(spec));
        return kOk;
    });
}

} // namespace pqc::cli
