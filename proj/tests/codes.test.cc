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


#include "netqec/codes.h"

#include <gtest/gtest.h>

#include "support/oracles.h"

using namespace netqec;

namespace {

bool all_zero(const oracle::Dense &d) {
    for (const auto &row : d) {
        for (auto v : row) {
            if (v) {
                return false;
            }
        }
    }
    return true;
}

size_t popcount_and(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
    size_t n = 0;
    for (auto x : a) {
        for (auto y : b) {
            n += x == y;
        }
    }
    return n;
}

void expect_valid_logicals(const CssCode &code) {
    ASSERT_EQ(code.logicals.size(), code.k);
    auto hx_rows = code.hx.dense_rows();
    auto hz_rows = code.hz.dense_rows();
    for (size_t i = 0; i < code.k; i++) {
        const auto &pi = code.logicals[i];
        auto xv = BitVector::from_support(code.n, pi.x_support);
        auto zv = BitVector::from_support(code.n, pi.z_support);
        for (const auto &r : hz_rows) {
            EXPECT_FALSE(r.dot(xv));
        }
        for (const auto &r : hx_rows) {
            EXPECT_FALSE(r.dot(zv));
        }
        // Not a stabilizer: appending it raises the rank.
        auto with_x = hx_rows;
        with_x.push_back(xv);
        EXPECT_EQ(gf2_rank(with_x, code.n), gf2_rank(code.hx) + 1);
        auto with_z = hz_rows;
        with_z.push_back(zv);
        EXPECT_EQ(gf2_rank(with_z, code.n), gf2_rank(code.hz) + 1);
        for (size_t j = 0; j < code.k; j++) {
            EXPECT_EQ(popcount_and(pi.x_support, code.logicals[j].z_support) % 2, i == j ? 1u : 0u)
                << "pair " << i << "," << j;
        }
    }
}

}  // namespace

TEST(codes, surface_parameters) {
    for (int d : {1, 3, 5, 7, 9}) {
        auto code = build_surface_code(d);
        EXPECT_EQ(code.n, static_cast<size_t>(2 * d * d - 2 * d + 1));
        EXPECT_EQ(code.k, 1u);
        EXPECT_EQ(oracle::dense_rank(oracle::to_dense(code.hx)) + oracle::dense_rank(oracle::to_dense(code.hz)),
                  code.n - 1);
    }
    auto d1 = build_surface_code(1);
    EXPECT_EQ(d1.hx.rows() + d1.hz.rows(), 0u);
}

TEST(codes, surface_rejects_bad_distance) {
    EXPECT_THROW(build_surface_code(4), std::invalid_argument);
    EXPECT_THROW(build_surface_code(0), std::invalid_argument);
    EXPECT_THROW(build_surface_code(-3), std::invalid_argument);
}

TEST(codes, surface_check_weights_and_commutation) {
    auto code = build_surface_code(3);
    size_t max_w = 0;
    for (size_t r = 0; r < code.hx.rows(); r++) {
        max_w = std::max(max_w, code.hx.row_weight(r));
    }
    for (size_t r = 0; r < code.hz.rows(); r++) {
        max_w = std::max(max_w, code.hz.row_weight(r));
    }
    EXPECT_EQ(max_w, 4u);
    EXPECT_EQ(code.hx.rows() + code.hz.rows(), 12u);

    auto d5 = build_surface_code(5);
    EXPECT_EQ(d5.n, 41u);
    auto prod = oracle::dense_product(oracle::to_dense(d5.hx), oracle::dense_transpose(oracle::to_dense(d5.hz)));
    EXPECT_TRUE(all_zero(prod));
}

TEST(codes, surface_logicals) {
    for (int d : {3, 5, 7}) {
        auto code = build_surface_code(d);
        expect_valid_logicals(code);
        EXPECT_EQ(code.logicals[0].z_support.size(), static_cast<size_t>(d));
        EXPECT_EQ(code.logicals[0].x_support.size(), static_cast<size_t>(d));
    }
    auto code = build_surface_code(3);
    auto computed = compute_logicals(code.hx, code.hz);
    ASSERT_EQ(computed.size(), 1u);
    EXPECT_EQ(computed[0].z_support.size(), 3u);
}

TEST(codes, monomial_parsing) {
    EXPECT_EQ(parse_monomial("x^3"), (Monomial{'x', 3}));
    EXPECT_EQ(parse_monomial("y"), (Monomial{'y', 1}));
    EXPECT_EQ(parse_monomial("1"), (Monomial{'x', 0}));
    EXPECT_EQ(parse_monomial("y^12").str(), "y^12");
    EXPECT_THROW(parse_monomial("z^2"), std::invalid_argument);
    EXPECT_THROW(parse_monomial("x^"), std::invalid_argument);
    EXPECT_THROW(parse_monomial("x3"), std::invalid_argument);
}

TEST(codes, monomial_matrix_identities) {
    for (auto [ell, m] : {std::pair<uint32_t, uint32_t>{3, 4}, {5, 2}, {6, 6}}) {
        auto id = BinaryMatrix::identity(ell * m);
        EXPECT_EQ(monomial_matrix(ell, m, {'x', ell}), id);
        EXPECT_EQ(monomial_matrix(ell, m, {'y', m}), id);
        auto x = monomial_matrix(ell, m, {'x', 1});
        auto y = monomial_matrix(ell, m, {'y', 1});
        EXPECT_EQ(x * y, y * x);
        auto x2 = monomial_matrix(ell, m, {'x', 2});
        EXPECT_EQ(x * x, x2);
    }
}

TEST(codes, bb_spec_normalization) {
    BBSpec spec{6, 6, {{'x', 9}, {'y', 1}, {'y', 2}}, {{'y', 3}, {'x', 1}, {'x', 2}}};
    spec.normalize();
    EXPECT_EQ(spec.a_terms[0], (Monomial{'x', 3}));
    BBSpec dup{6, 6, {{'x', 1}, {'x', 7}}, {{'y', 1}}};
    EXPECT_THROW(dup.normalize(), std::invalid_argument);
    BBSpec empty{6, 6, {}, {{'y', 1}}};
    EXPECT_THROW(empty.normalize(), std::invalid_argument);
}

TEST(codes, bb_presets) {
    struct Expected {
        const char *name;
        size_t n;
        size_t k;
        size_t d;
    };
    for (auto e : {Expected{"72", 72, 12, 6}, Expected{"90", 90, 8, 10}, Expected{"144", 144, 12, 12}}) {
        auto code = build_bb_preset(e.name);
        EXPECT_EQ(code.n, e.n);
        EXPECT_EQ(code.k, e.k);
        EXPECT_EQ(code.distance, e.d);
        auto hx = oracle::to_dense(code.hx);
        auto hz = oracle::to_dense(code.hz);
        EXPECT_EQ(code.n - oracle::dense_rank(hx) - oracle::dense_rank(hz), e.k) << e.name;
        EXPECT_TRUE(all_zero(oracle::dense_product(hx, oracle::dense_transpose(hz))));
        size_t half = code.n / 2;
        for (const auto *h : {&code.hx, &code.hz}) {
            for (size_t r = 0; r < h->rows(); r++) {
                EXPECT_EQ(h->row_weight(r), 6u);
            }
            for (size_t c = 0; c < code.n; c++) {
                EXPECT_EQ(h->col_weight(c), 3u) << (c < half ? "left" : "right");
            }
        }
        expect_valid_logicals(code);
    }
    EXPECT_EQ(build_bb_preset("[[72,12,6]]").n, 72u);
    EXPECT_EQ(build_bb_preset("bb144").n, 144u);
    EXPECT_THROW(bb_preset("73"), std::invalid_argument);
}

TEST(codes, bb_random_specs_commute) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; trial++) {
        uint32_t ell = 2 + rng() % 6;
        uint32_t m = 2 + rng() % 6;
        BBSpec spec{ell, m, {}, {}};
        for (int t = 0; t < 3; t++) {
            Monomial a{rng() & 1 ? 'x' : 'y', static_cast<uint32_t>(rng() % 7)};
            Monomial b{rng() & 1 ? 'x' : 'y', static_cast<uint32_t>(rng() % 7)};
            spec.a_terms.push_back(a);
            spec.b_terms.push_back(b);
        }
        CssCode code;
        try {
            code = build_bb_code(spec);
        } catch (const std::invalid_argument &) {
            continue;
        }
        EXPECT_TRUE((code.hx * code.hz.transpose()).is_zero());
        EXPECT_EQ(code.k, css_logical_count(code.hx, code.hz));
        expect_valid_logicals(code);
    }
}

TEST(codes, compute_logicals_rejects_noncommuting) {
    std::vector<std::pair<uint32_t, uint32_t>> ex{{0, 0}};
    std::vector<std::pair<uint32_t, uint32_t>> ez{{0, 0}};
    auto hx = BinaryMatrix::from_entries(1, 2, ex);
    auto hz = BinaryMatrix::from_entries(1, 2, ez);
    EXPECT_THROW(compute_logicals(hx, hz), std::invalid_argument);
}
