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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pqc/pqc.hpp"

namespace pqc {
namespace {

constexpr double kTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ConstituentState n2_state(const RegisterLayout &layout, std::vector<Complex> n2_amps,
                          std::uint64_t j1 = 0) {
    ConstituentState s{j1, AmplitudeVector(layout.constituent_dim()), 1.0};
    for (std::size_t j2 = 0; j2 < n2_amps.size(); ++j2)
        s.amplitudes[layout.local_index(0, 0, j2)] = n2_amps[j2];
    return s;
}

void expect_amps(const ConstituentState &s, const std::vector<Complex> &want, double tol = kTol) {
    ASSERT_EQ(s.amplitudes.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        EXPECT_NEAR(std::abs(s.amplitudes[i] - want[i]), 0.0, tol) << "index " << i;
}

TEST(RegisterLayout, RejectsInvalidSizes) {
    EXPECT_THROW(RegisterLayout::make(0, 0), ValidationError);
    EXPECT_THROW(RegisterLayout::make(-1, 2), ValidationError);
    EXPECT_THROW(RegisterLayout::make(1, 1, -1), ValidationError);
    EXPECT_THROW(RegisterLayout::make(40, 30), ValidationError);
    EXPECT_NO_THROW(RegisterLayout::make(0, 1));
}

TEST(RegisterLayout, CombinedLabelMatchesNotation) {
    // |01,10> = |0110> = |1,2> = |6>
    const auto layout = RegisterLayout::make(2, 2);
    EXPECT_EQ(layout.combine(1, 2), 6U);
    EXPECT_EQ(layout.j1_of(6), 1U);
    EXPECT_EQ(layout.j2_of(6), 2U);
    EXPECT_EQ(layout.N(), 16U);
}

TEST(RegisterLayout, LocalIndexPutsAncillaOnTop) {
    const auto layout = RegisterLayout::make(1, 2, 1);
    EXPECT_EQ(layout.constituent_dim(), 16U);
    EXPECT_EQ(layout.local_index(1, 0, 0), 8U);
    EXPECT_EQ(layout.local_index(0, 1, 0), 4U);
    EXPECT_EQ(layout.local_index(0, 0, 3), 3U);
    EXPECT_EQ(layout.local_bit_of_qubit(0), 3);
    EXPECT_EQ(layout.local_bit_of_qubit(1), 2);
    EXPECT_THROW((void)layout.local_bit_of_qubit(2), ValidationError);
}

TEST(PrepareUniform, TwoByTwo) {
    const auto ens = prepare_uniform_ensemble(RegisterLayout::make(2, 2));
    ASSERT_EQ(ens.constituents.size(), 4U);
    for (std::uint64_t j1 = 0; j1 < 4; ++j1) {
        const auto &c = ens.constituents[j1];
        EXPECT_EQ(c.j1, j1);
        EXPECT_DOUBLE_EQ(c.weight, 0.25);
        expect_amps(c, {0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0});
    }
    EXPECT_NO_THROW(ens.validate());
}

TEST(PrepareUniform, SingleMolecule) {
    const auto ens = prepare_uniform_ensemble(RegisterLayout::make(0, 3));
    ASSERT_EQ(ens.constituents.size(), 1U);
    for (std::uint64_t j2 = 0; j2 < 8; ++j2)
        EXPECT_NEAR(ens.constituents[0].amplitudes[j2].real(), 1.0 / std::sqrt(8.0), kTol);
}

TEST(PrepareUniform, CompletelyMixedRegister) {
    const auto ens = prepare_uniform_ensemble(RegisterLayout::make(3, 0));
    ASSERT_EQ(ens.constituents.size(), 8U);
    for (const auto &c : ens.constituents) {
        EXPECT_DOUBLE_EQ(c.weight, 0.125);
        expect_amps(c, {1.0, 0.0});
    }
}

TEST(PrepareUniform, CapacityBound) {
    Limits tight;
    tight.max_constituent_amplitudes = 1U << 4;
    EXPECT_THROW(prepare_uniform_ensemble(RegisterLayout::make(0, 4), tight), CapacityError);
    EXPECT_NO_THROW(prepare_uniform_ensemble(RegisterLayout::make(0, 3), tight));
    tight = Limits{};
    tight.max_total_amplitudes = 64;
    EXPECT_THROW(prepare_uniform_ensemble(RegisterLayout::make(6, 1), tight), CapacityError);
}

TEST(PrepareGeneral, DeltaRows) {
    const auto layout = RegisterLayout::make(1, 2);
    const auto ens = prepare_general_ensemble(layout, {{1, 0, 0, 0}, {1, 0, 0, 0}});
    for (const auto &c : ens.constituents)
        expect_amps(c, {1, 0, 0, 0, 0, 0, 0, 0});
}

TEST(PrepareGeneral, UniformRowsMatchUniformPreparation) {
    const auto layout = RegisterLayout::make(2, 2);
    std::vector<std::vector<Complex>> rows(4, std::vector<Complex>(4, 0.5));
    EXPECT_EQ(prepare_general_ensemble(layout, rows), prepare_uniform_ensemble(layout));
}

TEST(PrepareGeneral, DistinctConstituents) {
    const auto layout = RegisterLayout::make(1, 2);
    const auto ens = prepare_general_ensemble(layout, {{1, 0, 0, 0}, {0, 1, 0, 0}});
    expect_amps(ens.constituents[0], {1, 0, 0, 0, 0, 0, 0, 0});
    expect_amps(ens.constituents[1], {0, 1, 0, 0, 0, 0, 0, 0});
    EXPECT_DOUBLE_EQ(ens.constituents[1].weight, 0.5);
}

TEST(PrepareGeneral, ReportsEveryUnnormalisedRow) {
    const auto layout = RegisterLayout::make(2, 1);
    try {
        prepare_general_ensemble(layout, {{1, 0}, {1, 1}, {0, 1}, {0.5, 0}});
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("1, 3"), std::string::npos) << msg;
    }
}

TEST(PrepareGeneral, AcceptsInputWithinInputTolerance) {
    const auto layout = RegisterLayout::make(0, 1);
    const double a = kInvSqrt2 * (1.0 + 1e-10);
    const auto ens = prepare_general_ensemble(layout, {{a, a}});
    EXPECT_NEAR(norm_squared(ens.constituents[0].amplitudes), 1.0, kTol);
}

TEST(HadamardN2, UniformToZero) {
    const auto layout = RegisterLayout::make(0, 2);
    auto s = n2_state(layout, {0.5, 0.5, 0.5, 0.5});
    hadamard_n2(layout, s);
    expect_amps(s, {1, 0, 0, 0, 0, 0, 0, 0});
}

TEST(HadamardN2, ZeroToUniform) {
    const auto layout = RegisterLayout::make(0, 2);
    auto s = n2_state(layout, {1, 0, 0, 0});
    hadamard_n2(layout, s);
    expect_amps(s, {0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0});
}

TEST(HadamardN2, HandComputedVector) {
    const auto layout = RegisterLayout::make(0, 2);
    auto s = n2_state(layout, {kInvSqrt2, 0, 0, -kInvSqrt2});
    hadamard_n2(layout, s);
    expect_amps(s, {0, kInvSqrt2, kInvSqrt2, 0, 0, 0, 0, 0});
}

TEST(HadamardN2, InvolutionOnRandomStates) {
    std::mt19937_64 rng(11);
    for (int n2 = 0; n2 <= 6; ++n2) {
        const auto layout = RegisterLayout::make(1, n2, 1);
        ConstituentState s{1, oracle::random_state(layout.constituent_dim(), rng), 1.0};
        const auto original = s;
        hadamard_n2(layout, s);
        EXPECT_NEAR(norm_squared(s.amplitudes), 1.0, kTol);
        hadamard_n2(layout, s);
        EXPECT_LT(oracle::max_abs_diff(s.amplitudes, original.amplitudes), kTol) << "n2=" << n2;
    }
}

TEST(PhaseOnMarked, OtherConstituentUntouched) {
    const auto layout = RegisterLayout::make(1, 1);
    auto s = n2_state(layout, {kInvSqrt2, kInvSqrt2}, 0);
    const auto before = s;
    phase_on_marked(layout, s, layout.combine(1, 1), 1.234);
    EXPECT_EQ(s, before);
}

TEST(PhaseOnMarked, ZeroAngleIsIdentity) {
    const auto layout = RegisterLayout::make(1, 1);
    auto s = n2_state(layout, {kInvSqrt2, kInvSqrt2}, 1);
    const auto before = s;
    phase_on_marked(layout, s, layout.combine(1, 1), 0.0);
    EXPECT_EQ(s, before);
}

TEST(PhaseOnMarked, SignFlip) {
    const auto layout = RegisterLayout::make(0, 1);
    auto s = n2_state(layout, {kInvSqrt2, kInvSqrt2});
    phase_on_marked(layout, s, 1, std::numbers::pi);
    expect_amps(s, {kInvSqrt2, -kInvSqrt2, 0, 0});
}

TEST(PhaseOnMarked, ActsOnEveryAncillaAndFunctionSlice) {
    const auto layout = RegisterLayout::make(0, 1, 1);
    ConstituentState s{0, AmplitudeVector(8, 1.0 / std::sqrt(8.0)), 1.0};
    phase_on_marked(layout, s, 1, std::numbers::pi);
    for (std::uint64_t i = 0; i < 8; ++i)
        EXPECT_NEAR(s.amplitudes[i].real(), (i & 1U) ? -1.0 / std::sqrt(8.0) : 1.0 / std::sqrt(8.0),
                    kTol);
}

TEST(PhaseOnMarked, RejectsOutOfRangeLabel) {
    const auto layout = RegisterLayout::make(1, 1);
    auto s = n2_state(layout, {1, 0});
    EXPECT_THROW(phase_on_marked(layout, s, 4, 0.1), ValidationError);
}

TEST(PhaseOnZeroN2, FullTurnIsIdentity) {
    std::mt19937_64 rng(3);
    const auto layout = RegisterLayout::make(0, 3, 1);
    ConstituentState s{0, oracle::random_state(layout.constituent_dim(), rng), 1.0};
    const auto before = s;
    phase_on_zero_n2(layout, s, 2 * std::numbers::pi);
    EXPECT_LT(oracle::max_abs_diff(s.amplitudes, before.amplitudes), kTol);
}

TEST(PhaseOnZeroN2, PiOnUniform) {
    const auto layout = RegisterLayout::make(0, 1);
    auto s = n2_state(layout, {kInvSqrt2, kInvSqrt2});
    phase_on_zero_n2(layout, s, std::numbers::pi);
    expect_amps(s, {-kInvSqrt2, kInvSqrt2, 0, 0});
}

TEST(PhaseOnZeroN2, QuarterTurnOnZero) {
    const auto layout = RegisterLayout::make(0, 1);
    auto s = n2_state(layout, {1, 0});
    phase_on_zero_n2(layout, s, std::numbers::pi / 2);
    expect_amps(s, {Complex(0, 1), 0, 0, 0});
}

TEST(FlipFunctionIfMarked, MarkedBasisStateFlipsAncilla) {
    const auto layout = RegisterLayout::make(1, 2);
    auto s = n2_state(layout, {0, 0, 1, 0}, 1);
    flip_function_if_marked(layout, s, layout.combine(1, 2), 0);
    EXPECT_NEAR(std::abs(s.amplitudes[layout.local_index(1, 0, 2)]), 1.0, kTol);
    EXPECT_NEAR(norm_squared(s.amplitudes), 1.0, kTol);
}

TEST(FlipFunctionIfMarked, UnmarkedConstituentUnchanged) {
    const auto layout = RegisterLayout::make(1, 2);
    auto s = n2_state(layout, {0, 0, 1, 0}, 0);
    const auto before = s;
    flip_function_if_marked(layout, s, layout.combine(1, 2), 0);
    EXPECT_EQ(s, before);
}

TEST(FlipFunctionIfMarked, OnlyMarkedSliceFlipsInSuperposition) {
    const auto layout = RegisterLayout::make(1, 2);
    auto s = n2_state(layout, {0.5, 0.5, 0.5, 0.5}, 1);
    flip_function_if_marked(layout, s, layout.combine(1, 2), 0);
    // ancilla-0 block keeps j2 = 0, 1, 3; ancilla-1 block holds j2 = 2
    expect_amps(s, {0.5, 0.5, 0, 0.5, 0, 0, 0.5, 0});
}

TEST(FlipFunctionIfMarked, TargetsFunctionQubit) {
    const auto layout = RegisterLayout::make(0, 1, 2);
    auto s = n2_state(layout, {0, 1});
    flip_function_if_marked(layout, s, 1, 2);
    EXPECT_NEAR(std::abs(s.amplitudes[layout.local_index(0, 1, 1)]), 1.0, kTol);
    flip_function_if_marked(layout, s, 1, 1);
    EXPECT_NEAR(std::abs(s.amplitudes[layout.local_index(0, 3, 1)]), 1.0, kTol);
    EXPECT_THROW(flip_function_if_marked(layout, s, 1, 3), ValidationError);
}

TEST(ApplyUnitaryN2F, IdentityLeavesStateAlone) {
    std::mt19937_64 rng(5);
    const auto layout = RegisterLayout::make(0, 2, 1);
    ConstituentState s{0, oracle::random_state(layout.constituent_dim(), rng), 1.0};
    const auto before = s;
    apply_unitary_n2f(layout, s, DenseMatrix::identity(layout.slice_dim()));
    EXPECT_LT(oracle::max_abs_diff(s.amplitudes, before.amplitudes), kTol);
}

TEST(ApplyUnitaryN2F, SingleQubitHadamardMatchesHadamardN2) {
    std::mt19937_64 rng(6);
    const auto layout = RegisterLayout::make(1, 1);
    ConstituentState a{1, oracle::random_state(layout.constituent_dim(), rng), 1.0};
    auto b = a;
    apply_unitary_n2f(layout, a, oracle::hadamard1());
    hadamard_n2(layout, b);
    EXPECT_LT(oracle::max_abs_diff(a.amplitudes, b.amplitudes), kTol);
}

TEST(ApplyUnitaryN2F, RandomUnitaryPreservesNorm) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto layout = RegisterLayout::make(1, 3, 1);
        ConstituentState s{0, oracle::random_state(layout.constituent_dim(), rng), 1.0};
        apply_unitary_n2f(layout, s, oracle::random_unitary(layout.slice_dim(), rng));
        EXPECT_NEAR(norm_squared(s.amplitudes), 1.0, kTol);
    }
}

TEST(ApplyUnitaryN2F, RejectsNonUnitaryAndWrongSize) {
    const auto layout = RegisterLayout::make(0, 1);
    auto s = n2_state(layout, {1, 0});
    EXPECT_THROW(apply_unitary_n2f(layout, s, DenseMatrix(2, {1, 1, 0, 1})), ValidationError);
    EXPECT_THROW(apply_unitary_n2f(layout, s, DenseMatrix::identity(4)), ValidationError);
}

TEST(DegenerateN2, HadamardAndZeroPhaseAreIdentity) {
    const auto layout = RegisterLayout::make(2, 0, 1);
    ConstituentState s{3, AmplitudeVector(layout.constituent_dim()), 1.0};
    ASSERT_EQ(s.amplitudes.size(), 4U);
    s.amplitudes[0] = 1.0;
    const auto before = s;
    hadamard_n2(layout, s);
    EXPECT_EQ(s, before);
    qft_n2(layout, s);
    EXPECT_EQ(s, before);
}

TEST(FullState, ExpandProjectRoundTrip) {
    std::mt19937_64 rng(8);
    const auto layout = RegisterLayout::make(2, 3, 1);
    for (std::uint64_t j1 = 0; j1 < layout.N1(); ++j1) {
        ConstituentState s{j1, oracle::random_state(layout.constituent_dim(), rng), 0.25};
        const auto full = expand_full(layout, s);
        EXPECT_NEAR(norm_squared(full.amplitudes), 1.0, kTol);
        EXPECT_NEAR(leakage(full, j1), 0.0, 1e-15);
        const auto back = project_constituent(full, j1, 0.25);
        EXPECT_LT(oracle::max_abs_diff(back.amplitudes, s.amplitudes), 1e-14);
    }
}

TEST(FullState, CapacityLimit) {
    const auto layout = RegisterLayout::make(8, 8, 0);
    ConstituentState s{0, AmplitudeVector(layout.constituent_dim()), 1.0};
    s.amplitudes[0] = 1.0;
    EXPECT_THROW(expand_full(layout, s), CapacityError);
}

TEST(FullState, OraclePhaseMatchesConstituentPhase) {
    std::mt19937_64 rng(9);
    for (int n1 = 0; n1 <= 4; ++n1) {
        for (int n2 = 1; n2 + n1 <= 8; n2 += 2) {
            const auto layout = RegisterLayout::make(n1, n2);
            std::uniform_int_distribution<std::uint64_t> pick(0, layout.N() - 1);
            const std::uint64_t marked = pick(rng);
            for (std::uint64_t j1 : {std::uint64_t{0}, layout.j1_of(marked)}) {
                ConstituentState s{j1, oracle::random_state(layout.constituent_dim(), rng), 1.0};
                auto full = expand_full(layout, s);
                phase_on_marked(layout, s, marked, 0.77);
                oracle::full_phase_on_marked(full, marked, 0.77);
                EXPECT_LT(oracle::max_abs_diff(project_constituent(full, j1).amplitudes,
                                               s.amplitudes),
                          kTol);
            }
        }
    }
}

TEST(FullState, HadamardMatchesConstituentHadamard) {
    std::mt19937_64 rng(10);
    for (int n2 = 1; n2 <= 6; ++n2) {
        const auto layout = RegisterLayout::make(2, n2);
        ConstituentState s{2, oracle::random_state(layout.constituent_dim(), rng), 1.0};
        auto full = expand_full(layout, s);
        hadamard_n2(layout, s);
        oracle::full_hadamard_n2(full);
        EXPECT_LT(oracle::max_abs_diff(project_constituent(full, 2).amplitudes, s.amplitudes),
                  kTol);
        EXPECT_NEAR(leakage(full, 2), 0.0, kTol);
    }
}

TEST(EnsembleJson, FieldNamesAndRoundTrip) {
    const auto ens = prepare_general_ensemble(RegisterLayout::make(1, 1),
                                              {{Complex(0.6, 0.0), Complex(0.0, 0.8)}, {1, 0}});
    const nlohmann::json j = ens;
    EXPECT_EQ(j.at("n1"), 1);
    EXPECT_EQ(j.at("n2"), 1);
    EXPECT_EQ(j.at("m"), 0);
    const auto &c = j.at("constituents").at(0);
    EXPECT_EQ(c.at("j1"), 0);
    EXPECT_DOUBLE_EQ(c.at("weight").get<double>(), 0.5);
    EXPECT_DOUBLE_EQ(c.at("amps").at(1).at(1).get<double>(), 0.8);
    EXPECT_EQ(j.get<Ensemble>(), ens);
}

TEST(EnsembleJson, RejectsBrokenDocuments) {
    auto j = nlohmann::json(prepare_uniform_ensemble(RegisterLayout::make(1, 1)));
    auto dup = j;
    dup["constituents"][1]["j1"] = 0;
    EXPECT_THROW(dup.get<Ensemble>(), ValidationError);
    auto weights = j;
    weights["constituents"][0]["weight"] = 0.9;
    EXPECT_THROW(weights.get<Ensemble>(), ValidationError);
    auto missing = j;
    missing.erase("n2");
    EXPECT_THROW(missing.get<Ensemble>(), ValidationError);
}

} // namespace
} // namespace pqc
