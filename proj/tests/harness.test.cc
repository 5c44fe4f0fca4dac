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


#include "netqec/harness.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace netqec;

namespace {

ExperimentConfig ghz_config(double p_ghz, uint64_t max_shots) {
    ExperimentConfig c;
    c.code = "surface";
    c.distances = {3};
    c.modes = {ExperimentMode::kNetworked};
    c.sweep = SweepParameter::kPGhz;
    c.values = {p_ghz};
    c.p = 0;
    c.max_shots = max_shots;
    c.workers = 1;
    c.seed = 17;
    return c;
}

void expect_sig_digits(double got, double want, const std::string &what) {
    EXPECT_LE(std::abs(got - want), 5e-7 * std::abs(want)) << what << ": " << got << " vs " << want;
}

}  // namespace

TEST(harness, config_json_round_trip) {
    auto c = ExperimentConfig::from_json(R"({
        "name": "t", "code": "72", "modes": ["monolithic", "partitioned"], "values": [0.001, 0.003],
        "bell_fidelity": [0.99, 0.96], "max_shots": 5000, "seed": 4,
        "decoder": {"type": "bposd", "bp_method": "product_sum", "max_iterations": 50, "osd_order": 2}
    })");
    EXPECT_EQ(c.code, "72");
    ASSERT_EQ(c.p_bells.size(), 2u);
    EXPECT_EQ(c.p_bells[0], 0.0125);
    EXPECT_EQ(c.p_bells[1], 0.05);
    EXPECT_EQ(c.decoder.bposd.method, BpMethod::kProductSum);
    EXPECT_EQ(c.decoder.bposd.max_iterations, 50u);
    auto again = ExperimentConfig::from_json(c.to_json());
    EXPECT_EQ(again.to_json(), c.to_json());
}

TEST(harness, bundled_configs_validate) {
    size_t count = 0;
    for (const auto &entry : std::filesystem::directory_iterator(std::string(NETQEC_SOURCE_DIR) + "/configs")) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        std::ifstream in(entry.path());
        std::stringstream text;
        text << in.rdbuf();
        auto c = ExperimentConfig::from_json(text.str());
        EXPECT_NO_THROW(c.validate()) << entry.path();
        EXPECT_EQ(c.name, entry.path().stem().string());
        count++;
    }
    EXPECT_GE(count, 6u);
}

TEST(harness, config_errors_name_the_field) {
    auto message = [](const std::string &text) {
        try {
            ExperimentConfig::from_json(text);
        } catch (const std::invalid_argument &e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message(R"({"values": [0.01], "max_shots": 0})").find("max_shots"), std::string::npos);
    EXPECT_NE(message(R"({"values": [0.01], "shots": 10})").find("'shots'"), std::string::npos);
    EXPECT_NE(message(R"({"values": [0.7]})").find("values"), std::string::npos);
    EXPECT_NE(message(R"({"values": [0.01], "decoder": {"osd_order": "x"}})").find("decoder.osd_order"),
              std::string::npos);
    EXPECT_NE(message(R"({"values": [0.01], "code": "73"})").find("'code'"), std::string::npos);
    EXPECT_NE(message(R"({"values": [0.01], "modes": ["partitioned"]})").find("modes"), std::string::npos);
    EXPECT_NE(message(R"({"values": [0.01], "distances": [4]})").find("distances"), std::string::npos);
    EXPECT_NE(message("{not json").find("JSON"), std::string::npos);
}

TEST(harness, zero_noise_point_has_no_failures) {
    auto c = ghz_config(0.0, 3000);
    for (auto sampler : {SamplerKind::kDem, SamplerKind::kFrame}) {
        c.sampler = sampler;
        auto pts = run_experiment(c);
        ASSERT_EQ(pts.size(), 1u);
        EXPECT_TRUE(pts[0].error.empty()) << pts[0].error;
        EXPECT_EQ(pts[0].shots, 3000u);
        EXPECT_EQ(pts[0].failures, 0u);
        EXPECT_EQ(pts[0].p_l, 0);
    }
}

TEST(harness, shot_budget_is_never_exceeded) {
    auto c = ghz_config(0.001, 40000);
    c.max_failures = 1000000;
    auto pts = run_experiment(c);
    EXPECT_EQ(pts[0].shots, 40000u);
}

TEST(harness, failure_budget_stops_near_expected_shots) {
    // Networked d=3 with GHZ noise 1% has p_L near 1e-2, so 1000 failures take about 1e5 shots.
    auto c = ghz_config(0.01, 1000000);
    c.max_failures = 1000;
    auto pts = run_experiment(c);
    const auto &pt = pts[0];
    EXPECT_GE(pt.failures, 1000u);
    EXPECT_EQ(pt.shots % c.batch_size, 0u);
    // The last batch pushed the count over the limit; without it the limit was not reached.
    EXPECT_LT(double(pt.failures) - pt.p_l * c.batch_size * 1.5, 1000.0);
    EXPECT_GT(pt.shots, 60000u);
    EXPECT_LT(pt.shots, 160000u);
}

TEST(harness, results_are_reproducible_and_worker_independent) {
    auto c = ghz_config(0.02, 50000);
    c.values = {0.01, 0.02};
    c.distances = {3, 5};
    c.max_failures = 300;
    c.batch_size = 4096;
    auto a = run_experiment(c);
    c.workers = 3;
    auto b = run_experiment(c);
    ASSERT_EQ(a.size(), 4u);
    std::ostringstream ca, cb;
    write_points_csv(ca, a);
    write_points_csv(cb, b);
    EXPECT_EQ(ca.str(), cb.str());
    c.seed++;
    auto d = run_experiment(c);
    std::ostringstream cd;
    write_points_csv(cd, d);
    EXPECT_NE(ca.str(), cd.str());
}

TEST(harness, partitioned_points_record_bell_budget) {
    ExperimentConfig c;
    c.code = "72";
    c.modes = {ExperimentMode::kMonolithic, ExperimentMode::kPartitioned};
    c.p_bells = {0.0125};
    c.values = {0.001};
    c.rounds = 2;
    c.max_shots = 200;
    c.workers = 1;
    auto pts = run_experiment(c);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].bell_per_shot, 0u);
    auto part = bipartition(build_combined_tanner(build_bb_preset("72")), c.partition);
    auto cut = cut_size(build_combined_tanner(build_bb_preset("72")), part.assignment);
    EXPECT_EQ(pts[1].bell_per_shot, cut * 2);
    EXPECT_EQ(pts[1].code, "bb72");
    EXPECT_EQ(pts[1].rounds, 2u);
    auto report = report_csv(pts);
    EXPECT_NE(report.find("bb72/partitioned/p_bell=0.0125"), std::string::npos);
    EXPECT_NE(report.find("," + std::to_string(cut * 2) + "\n"), std::string::npos);
    EXPECT_NE(report.find("uncoded,,,,0.001,,0.001,0.001,0.001,0\n"), std::string::npos);
}

TEST(harness, points_csv_round_trip) {
    ExperimentPoint pt;
    pt.code = "bb90";
    pt.mode = "partitioned";
    pt.p = 0.003;
    pt.p_bell = 0.05;
    pt.p_ghz = 0.002;
    pt.shots = 1000;
    pt.failures = 10;
    pt.p_l = 0.01;
    std::tie(pt.ci_lo, pt.ci_hi) = wilson_interval(10, 1000);
    pt.bell_per_shot = 980;
    pt.seed = 3;
    std::ostringstream out;
    write_points_csv(out, {pt});
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "code,mode,p,p_bell,p_ghz,shots,failures,p_l,ci_lo,ci_hi,bell_per_shot,seed");
    std::istringstream in(out.str());
    auto back = read_points_csv(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].code, "bb90");
    EXPECT_EQ(back[0].distance, 10);
    EXPECT_EQ(back[0].ci_lo, pt.ci_lo);
    EXPECT_EQ(back[0].bell_per_shot, 980u);
    std::istringstream bad("code,mode\nx,y\n");
    EXPECT_THROW(read_points_csv(bad), std::invalid_argument);
}

TEST(harness, metadata_records_rounds) {
    auto c = ghz_config(0.0, 10);
    auto pts = run_experiment(c);
    auto meta = run_metadata_json(c, pts);
    EXPECT_NE(meta.find("\"rounds\": 3"), std::string::npos);
    EXPECT_NE(meta.find("\"ghz_channel\": \"per_qubit\""), std::string::npos);
}

TEST(harness, fit_recovers_known_triples) {
    struct Row {
        int alpha;
        double c0, c1, c2;
    };
    const Row rows[] = {
        {3, 13.680, -290.350, 2.209e4}, {3, 17.590, -1059.125, 6.059e4}, {4, 18.263, -214.952, 1.572e4},
        {4, 23.547, -1328.447, 7.466e4}, {5, 23.500, -1081.297, 9.657e4}, {5, 27.004, -1029.260, 5.650e4},
    };
    for (const auto &row : rows) {
        std::vector<std::pair<double, double>> pts;
        for (double p : {3e-3, 5e-3, 8e-3}) {
            pts.emplace_back(p, std::pow(p, row.alpha) * std::exp(row.c0 + row.c1 * p + row.c2 * p * p));
        }
        auto fit = fit_ansatz(pts, row.alpha);
        EXPECT_EQ(fit.n_pts, 3u);
        expect_sig_digits(fit.c0, row.c0, "c0");
        expect_sig_digits(fit.c1, row.c1, "c1");
        expect_sig_digits(fit.c2, row.c2, "c2");
        for (auto [p, pl] : pts) {
            EXPECT_NEAR(fit.evaluate(p) / pl, 1, 1e-12);
        }
        EXPECT_LT(fit.residual, 1e-12);
    }
}

TEST(harness, fit_two_points_truncates) {
    std::vector<std::pair<double, double>> pts = {{1e-3, 7 * std::pow(1e-3, 4)}, {4e-3, 7 * std::pow(4e-3, 4)}};
    auto fit = fit_ansatz(pts, 4);
    EXPECT_NEAR(fit.c0, std::log(7.0), 1e-12);
    EXPECT_NEAR(fit.c1, 0, 1e-9);
    EXPECT_EQ(fit.c2, 0);
    EXPECT_EQ(fit.n_pts, 2u);
}

TEST(harness, fit_least_squares_matches_normal_equations) {
    std::vector<std::pair<double, double>> pts = {
        {1e-3, 2.1e-6}, {2e-3, 1.9e-5}, {3e-3, 8.0e-5}, {5e-3, 4.4e-4}, {8e-3, 2.7e-3}};
    auto fit = fit_ansatz(pts, 2);
    // Normal equations of the quadratic in long double.
    long double m[3][4] = {};
    for (auto [p, pl] : pts) {
        long double row[3] = {1, p, (long double)p * p};
        long double y = std::log((long double)pl) - 2 * std::log((long double)p);
        for (int i = 0; i < 3; i++) {
            for (int j = 0; j < 3; j++) {
                m[i][j] += row[i] * row[j];
            }
            m[i][3] += row[i] * y;
        }
    }
    for (int col = 0; col < 3; col++) {
        for (int r = 0; r < 3; r++) {
            if (r != col) {
                long double f = m[r][col] / m[col][col];
                for (int k = 0; k < 4; k++) {
                    m[r][k] -= f * m[col][k];
                }
            }
        }
    }
    EXPECT_NEAR(fit.c0, double(m[0][3] / m[0][0]), 1e-6);
    EXPECT_NEAR(fit.c1 / double(m[1][3] / m[1][1]), 1, 1e-6);
    EXPECT_NEAR(fit.c2 / double(m[2][3] / m[2][2]), 1, 1e-6);
    EXPECT_GT(fit.residual, 0);
}

TEST(harness, fit_rejects_bad_points) {
    EXPECT_THROW(fit_ansatz({{1e-3, 1e-5}}, 3), std::invalid_argument);
    EXPECT_THROW(fit_ansatz({{1e-3, 1e-5}, {2e-3, 0}}, 3), std::invalid_argument);
    EXPECT_THROW(fit_ansatz({{1e-3, 1e-5}, {2e-3, 1e-4}}, 0), std::invalid_argument);
    ExperimentPoint a, b;
    a.code = b.code = "bb72";
    a.mode = b.mode = "monolithic";
    a.p = 1e-3;
    a.p_l = 1e-5;
    b.p = 2e-3;
    b.p_l = 0;
    try {
        fit_curves_json({a, b});
        FAIL() << "expected an error";
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
    }
}

TEST(harness, fit_curves_groups_by_curve) {
    std::vector<ExperimentPoint> pts;
    for (double pb : {0.0125, 0.05}) {
        for (double p : {3e-3, 5e-3, 8e-3}) {
            ExperimentPoint pt;
            pt.code = "bb144";
            pt.mode = "partitioned";
            pt.p_bell = pb;
            pt.p = p;
            pt.p_l = std::pow(p, 5) * std::exp(27.004 - 1029.26 * p + 5.65e4 * p * p);
            pts.push_back(pt);
        }
    }
    auto text = fit_curves_json(pts);
    EXPECT_NE(text.find("\"alpha\": 5"), std::string::npos);
    EXPECT_NE(text.find("\"p_bell\": 0.05"), std::string::npos);
    EXPECT_NE(text.find("\"n_pts\": 3"), std::string::npos);
    EXPECT_EQ(ansatz_alpha("bb72"), 3);
    EXPECT_EQ(ansatz_alpha("90"), 4);
    EXPECT_EQ(ansatz_alpha("bb144"), 5);
    EXPECT_EQ(ansatz_alpha("surface_d5"), 3);
}

TEST(harness, curve_crossings_interpolate) {
    std::vector<std::pair<double, double>> a = {{1, 1e-3}, {2, 1e-2}, {3, 1e-1}};
    std::vector<std::pair<double, double>> b = {{1, 1e-2}, {2, 1e-2 * std::sqrt(10.0)}, {3, 1e-1 * std::sqrt(10.0)}};
    EXPECT_TRUE(curve_crossings(a, b).empty());
    std::vector<std::pair<double, double>> c = {{1, 1e-2}, {2, 1e-2}, {3, 1e-2}};
    auto x = curve_crossings(a, c);
    ASSERT_EQ(x.size(), 1u);
    EXPECT_DOUBLE_EQ(x[0], 2);
    std::vector<std::pair<double, double>> e = {{1, 1e-4}, {3, 1e-1}};
    std::vector<std::pair<double, double>> f = {{1, 1e-3}, {3, 1e-2}};
    auto y = curve_crossings(e, f);
    ASSERT_EQ(y.size(), 1u);
    EXPECT_NEAR(y[0], 1 + 2 * (1.0 / 2.0), 1e-12);
}
