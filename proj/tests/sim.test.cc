// Copyright 2026 The netqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "netqec/sim.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "netqec/builders.h"

using namespace netqec;

namespace {

Circuit with_inserted(const Circuit &base, const std::vector<std::pair<size_t, Instruction>> &inserts) {
    Circuit out;
    out.round_starts = base.round_starts;
    const auto &insts = base.instructions();
    for (size_t k = 0; k <= insts.size(); k++) {
        for (const auto &[pos, inst] : inserts) {
            if (pos == k) {
                out.append(inst);
            }
        }
        if (k < insts.size()) {
            out.append(insts[k]);
        }
    }
    return out;
}

Instruction pauli_error(Op op, uint32_t q, double p) {
    Instruction inst;
    inst.op = op;
    inst.targets = {q};
    inst.args = {p};
    return inst;
}

std::vector<uint32_t> first_shot(const Circuit &c) {
    return frame_sample(c, 1, 7).detectors.row_support(0);
}

std::vector<uint32_t> xor_support(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
    std::vector<uint32_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

const char *kTwoQubit =
    "R 0 1\n"
    "X_ERROR(0.1) 0\n"
    "X_ERROR(0.2) 0\n"
    "CX 0 1\n"
    "M 0 1\n"
    "DETECTOR rec[-1]\n"
    "DETECTOR rec[-2]\n"
    "DETECTOR rec[-1] rec[-2]\n"
    "OBSERVABLE_INCLUDE(0) rec[-1]\n";

}  // namespace

TEST(sim, noiseless_circuit_fires_nothing) {
    auto c = build_surface_circuit(3, 3, NoiseModel{}, true, PauliBasis::Z);
    auto s = frame_sample(c, 1000, 3);
    EXPECT_EQ(s.shots(), 1000u);
    EXPECT_EQ(s.detectors.cols(), c.num_detectors());
    for (size_t r = 0; r < s.shots(); r++) {
        EXPECT_FALSE(s.detectors.row_any(r));
        EXPECT_FALSE(s.observables.row_any(r));
    }
}

TEST(sim, deterministic_flip_fires_predicted_detectors) {
    auto c = Circuit::from_text("R 0 1\nX_ERROR(1) 0\nCX 0 1\nM 0 1\nDETECTOR rec[-1]\nDETECTOR rec[-2]\nDETECTOR rec[-1] rec[-2]\nOBSERVABLE_INCLUDE(0) rec[-2]\n");
    auto s = frame_sample(c, 64, 11);
    for (size_t r = 0; r < s.shots(); r++) {
        EXPECT_EQ(s.detectors.row_support(r), (std::vector<uint32_t>{0, 1}));
        EXPECT_TRUE(s.observables.get(r, 0));
    }

    // A Z flip before a Z measurement is invisible; before an X measurement it is not.
    auto z = Circuit::from_text("R 0\nRX 1\nZ_ERROR(1) 0 1\nM 0\nMX 1\nDETECTOR rec[-2]\nDETECTOR rec[-1]\n");
    EXPECT_EQ(first_shot(z), (std::vector<uint32_t>{1}));
}

TEST(sim, output_is_independent_of_worker_count) {
    auto c = build_surface_circuit(3, 3, NoiseModel::uniform(0.01, 0.01), true, PauliBasis::X);
    auto one = frame_sample(c, 5000, 99, 1);
    auto three = frame_sample(c, 5000, 99, 3);
    EXPECT_EQ(one, three);
    EXPECT_EQ(one, frame_sample(c, 5000, 99, 1));
    EXPECT_NE(one, frame_sample(c, 5000, 100, 1));
}

TEST(sim, deterministic_faults_compose_linearly) {
    auto base = build_surface_circuit(3, 2, NoiseModel{}, true, PauliBasis::Z);
    std::mt19937_64 rng(5);
    size_t len = base.instructions().size();
    uint32_t nq = static_cast<uint32_t>(base.num_qubits());
    for (int trial = 0; trial < 40; trial++) {
        auto make = [&]() {
            Op op = rng() % 2 ? Op::X_ERROR : Op::Z_ERROR;
            return std::pair<size_t, Instruction>{rng() % len, pauli_error(op, static_cast<uint32_t>(rng() % nq), 1)};
        };
        auto a = make();
        auto b = make();
        auto sa = first_shot(with_inserted(base, {a}));
        auto sb = first_shot(with_inserted(base, {b}));
        auto sab = first_shot(with_inserted(base, {a, b}));
        EXPECT_EQ(sab, xor_support(sa, sb)) << "trial " << trial;
    }
}

TEST(sim, dem_signature_matches_injected_fault) {
    auto base = build_bb_circuit(build_bb_preset("72"), 1, NoiseModel{}, nullptr, PauliBasis::Z);
    std::mt19937_64 rng(8);
    size_t len = base.instructions().size();
    uint32_t nq = static_cast<uint32_t>(base.num_qubits());
    int nonzero = 0;
    for (int trial = 0; trial < 60; trial++) {
        size_t pos = rng() % len;
        uint32_t q = static_cast<uint32_t>(rng() % nq);
        Op op = rng() % 2 ? Op::X_ERROR : Op::Z_ERROR;
        auto dem = extract_dem(with_inserted(base, {{pos, pauli_error(op, q, 0.01)}}));
        auto shot = frame_sample(with_inserted(base, {{pos, pauli_error(op, q, 1)}}), 1, 1);
        auto fired = shot.detectors.row_support(0);
        uint64_t obs = shot.observables.row(0)[0];
        if (fired.empty() && obs == 0) {
            EXPECT_TRUE(dem.faults.empty());
            continue;
        }
        nonzero++;
        ASSERT_EQ(dem.faults.size(), 1u);
        EXPECT_NEAR(dem.faults[0].probability, 0.01, 1e-15);
        EXPECT_EQ(dem.faults[0].signature.detectors, fired);
        EXPECT_EQ(dem.faults[0].signature.observables, obs);
    }
    EXPECT_GT(nonzero, 10);
}

TEST(sim, dem_merges_equal_signatures) {
    auto dem = extract_dem(Circuit::from_text(kTwoQubit));
    ASSERT_EQ(dem.faults.size(), 1u);
    EXPECT_NEAR(dem.faults[0].probability, 0.26, 1e-12);
    EXPECT_EQ(dem.faults[0].signature.detectors, (std::vector<uint32_t>{0, 1}));
    EXPECT_EQ(dem.faults[0].signature.observables, 1u);

    // X and Y components of a depolarizing channel flip the same measurement; merged, they
    // reproduce the channel's flip probability 2p/3.
    auto d2 = extract_dem(Circuit::from_text("R 0\nDEPOLARIZE1(0.3) 0\nM 0\nDETECTOR rec[-1]\n"));
    ASSERT_EQ(d2.faults.size(), 1u);
    EXPECT_NEAR(d2.faults[0].probability, 0.2, 1e-12);

    // Two-qubit channel: the first qubit's measurement flips under 8 of the 15 Paulis.
    auto d4 = extract_dem(Circuit::from_text("R 0 1\nDEPOLARIZE2(0.15) 0 1\nM 0\nDETECTOR rec[-1]\n"));
    ASSERT_EQ(d4.faults.size(), 1u);
    EXPECT_NEAR(d4.faults[0].probability, 0.15 * 8 / 15, 1e-12);

    auto d3 = extract_dem(Circuit::from_text("R 0\nZ_ERROR(0.2) 0\nM 0\nDETECTOR rec[-1]\n"));
    EXPECT_TRUE(d3.faults.empty());
    EXPECT_EQ(d3.num_detectors, 1u);
}

TEST(sim, dem_sample_extreme_priors) {
    DetectorErrorModel dem;
    dem.num_detectors = 4;
    dem.num_observables = 1;
    dem.faults.push_back({0.0, {{0, 1}, 1}, {}});
    dem.faults.push_back({1.0, {{1, 2}, 0}, {}});
    dem.faults.push_back({1.0, {{3}, 1}, {}});
    auto s = dem_sample(dem, 500, 4);
    for (size_t r = 0; r < s.shots(); r++) {
        EXPECT_EQ(s.detectors.row_support(r), (std::vector<uint32_t>{1, 2, 3}));
        EXPECT_TRUE(s.observables.get(r, 0));
    }
    EXPECT_EQ(s, dem_sample(dem, 500, 4));
}

TEST(sim, dem_matrices_layout) {
    auto c = build_surface_circuit(3, 2, NoiseModel::uniform(0.001), false, PauliBasis::Z);
    auto dem = extract_dem(c);
    auto m = dem_matrices(dem);
    ASSERT_EQ(m.check.rows(), c.num_detectors());
    ASSERT_EQ(m.check.cols(), dem.faults.size());
    ASSERT_EQ(m.logical.rows(), c.num_observables());
    ASSERT_EQ(m.logical.cols(), dem.faults.size());
    ASSERT_EQ(m.priors.size(), dem.faults.size());
    auto cols = m.check.column_supports();
    for (size_t j = 0; j < dem.faults.size(); j++) {
        EXPECT_EQ(m.priors[j], dem.faults[j].probability);
        EXPECT_EQ(cols[j], dem.faults[j].signature.detectors);
        EXPECT_EQ(m.logical.get(0, j), bool(dem.faults[j].signature.observables & 1));
    }
}

TEST(sim, sample_io_round_trip) {
    auto c = build_surface_circuit(3, 3, NoiseModel::uniform(0.02, 0.02), true, PauliBasis::Z);
    auto s = frame_sample(c, 777, 21);
    std::stringstream buf;
    write_sample(buf, s);
    EXPECT_EQ(read_sample(buf), s);

    std::stringstream bad("XXXX0000000000000000000000000000");
    EXPECT_THROW(read_sample(bad), std::invalid_argument);

    auto small = frame_sample(Circuit::from_text(kTwoQubit), 1, 1);
    auto csv = sample_to_csv(small);
    bool fired = small.detectors.get(0, 0);
    EXPECT_EQ(csv, fired ? "110,1\n" : "000,0\n");
}

TEST(sim, frame_and_dem_marginals_agree) {
    NoiseModel n = NoiseModel::uniform(0.004, 0.01);
    auto c = build_surface_circuit(3, 3, n, true, PauliBasis::Z);
    auto dem = extract_dem(c);
    const size_t shots = 200000;
    auto a = frame_sample(c, shots, 1);
    auto b = dem_sample(dem, shots, 2);
    auto check = [&](const BitTable &x, const BitTable &y, const char *what) {
        for (size_t col = 0; col < x.cols(); col++) {
            size_t kx = 0, ky = 0;
            for (size_t r = 0; r < shots; r++) {
                kx += x.get(r, col);
                ky += y.get(r, col);
            }
            double fx = double(kx) / shots, fy = double(ky) / shots;
            double pooled = (fx + fy) / 2;
            double sigma = std::sqrt(2 * pooled * (1 - pooled) / shots);
            // 5 sigma per column plus 1% relative slack for the independent-component DEM rates.
            EXPECT_LE(std::abs(fx - fy), 5 * sigma + 0.01 * pooled) << what << " " << col << ": " << fx << " vs " << fy;
        }
    };
    check(a.detectors, b.detectors, "detector");
    check(a.observables, b.observables, "observable");
}
