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

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pqc/commands.hpp"

namespace {

const std::map<std::string, pqc::SpectrumMode> kModes{{"expected", pqc::SpectrumMode::expected},
                                                       {"sampled", pqc::SpectrumMode::sampled}};

} // namespace

int main(int argc, char **argv) {
    using namespace pqc::cli;

    std::uint64_t seed = 0;
    try {
        seed = default_seed();
    } catch (const pqc::Error &e) {
        std::cerr << e.what() << "\n";
        return kInvalidConfig;
    }

    CLI::App app{"Parallel quantum computing on a simulated ensemble quantum computer"};
    app.require_subcommand(1);

    GroverConfig grover;
    grover.seed = seed;
    auto *g = app.add_subcommand("grover", "zero-failure search split over N1 sub-databases");
    g->add_option("--n1", grover.n1, "mixed argument qubits")->required();
    g->add_option("--n2", grover.n2, "coherent argument qubits")->required();
    g->add_option("--marked", grover.marked, "marked label j1*N2 + j2")->required();
    g->add_option("--iterations", grover.iterations, "override the iteration count J");
    g->add_option("--mode", grover.mode, "expected | sampled")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    g->add_option("--samples", grover.samples, "molecules per constituent (sampled mode)");
    g->add_option("--seed", grover.seed, "RNG seed (default $PQC_SEED or 0)");
    g->add_option("--workers", grover.workers, "worker threads");
    g->add_option("--NE", grover.budget.N_E, "molecule budget N_E");
    g->add_option("--Ns", grover.budget.N_s, "molecules per logical molecule");
    g->add_option("--couplings", grover.couplings_file, "JSON {\"omega0\", \"J\": [...]}");
    g->add_option("-o,--output", grover.output, "SearchReport JSON path");
    g->add_option("--ensemble-out", grover.ensemble_output, "final ensemble JSON path");

    ShorConfig shor;
    shor.seed = seed;
    auto *s = app.add_subcommand("shor", "order finding with the Fourier transform on n2 only");
    s->add_option("--nb", shor.Nb, "modulus N_b")->required();
    s->add_option("--a", shor.a, "base a, coprime to N_b")->required();
    s->add_option("--n1", shor.n1, "mixed argument qubits");
    s->add_option("--n2", shor.n2, "coherent argument qubits");
    s->add_option("--mode", shor.mode, "expected | sampled")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    s->add_option("--samples", shor.samples, "molecules per constituent (sampled mode)");
    s->add_option("--seed", shor.seed, "RNG seed (default $PQC_SEED or 0)");
    s->add_option("--workers", shor.workers, "worker threads");
    s->add_option("-o,--output", shor.output, "PeriodReport JSON path");

    SweepConfig sweep;
    auto *w = app.add_subcommand("sweep", "query count against molecule count, n1 = 0..n");
    w->add_option("--n", sweep.n, "argument qubits")->required();
    w->add_flag("--realized", sweep.realized, "product column from the realized J+1");
    w->add_option("-o,--output", sweep.output, "CSV path");

    RpaConfig rpa;
    rpa.seed = seed;
    auto *r = app.add_subcommand("rpa", "repetition-parallel baseline with majority vote");
    r->add_option("--n", rpa.n, "qubits, N = 2^n")->required();
    r->add_option("--k", rpa.k, "parallel computers per vote")->required();
    r->add_option("--trials", rpa.trials, "independent votes");
    r->add_option("--marked", rpa.marked, "marked item (default N-1)");
    r->add_option("--seed", rpa.seed, "RNG seed (default $PQC_SEED or 0)");
    r->add_option("-o,--output", rpa.output, "report JSON path");

    SpectrumConfig spectrum;
    spectrum.seed = seed;
    auto *sp = app.add_subcommand("spectrum", "render a saved ensemble through the readout");
    sp->add_option("--input", spectrum.input, "ensemble JSON")->required();
    sp->add_option("--mode", spectrum.mode, "expected | sampled")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    sp->add_option("--samples", spectrum.samples, "molecules per constituent (sampled mode)");
    sp->add_option("--seed", spectrum.seed, "RNG seed (default $PQC_SEED or 0)");
    sp->add_option("--workers", spectrum.workers, "worker threads");
    sp->add_option("--couplings", spectrum.couplings_file, "JSON {\"omega0\", \"J\": [...]}");
    sp->add_option("-o,--output", spectrum.output, "Spectrum JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kInvalidConfig;
    }

    if (*g)
        return cmd_grover(grover, std::cout, std::cerr);
    if (*s)
        return cmd_shor(shor, std::cout, std::cerr);
    if (*w)
        return cmd_sweep(sweep, std::cout, std::cerr);
    if (*r)
        return cmd_rpa(rpa, std::cout, std::cerr);
    return cmd_spectrum(spectrum, std::cout, std::cerr);
}
