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

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>

namespace netqec {

char basis_name(PauliBasis b) {
    return b == PauliBasis::X ? 'X' : 'Z';
}

PauliBasis parse_basis(std::string_view text) {
    if (text == "X" || text == "x") {
        return PauliBasis::X;
    }
    if (text == "Z" || text == "z") {
        return PauliBasis::Z;
    }
    throw std::invalid_argument("basis must be X or Z, got '" + std::string(text) + "'");
}

std::string Monomial::str() const {
    if (exponent == 0) {
        return "1";
    }
    if (exponent == 1) {
        return std::string(1, var);
    }
    return std::string(1, var) + "^" + std::to_string(exponent);
}

Monomial parse_monomial(std::string_view text) {
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (text == "1") {
        return Monomial{'x', 0};
    }
    if (text.empty() || (text[0] != 'x' && text[0] != 'y')) {
        throw std::invalid_argument("bad monomial '" + std::string(text) + "'");
    }
    Monomial mono{text[0], 1};
    if (text.size() == 1) {
        return mono;
    }
    if (text[1] != '^' || text.size() < 3) {
        throw std::invalid_argument("bad monomial '" + std::string(text) + "'");
    }
    auto digits = text.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), mono.exponent);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw std::invalid_argument("bad monomial exponent '" + std::string(text) + "'");
    }
    return mono;
}

void BBSpec::normalize() {
    if (ell == 0 || m == 0) {
        throw std::invalid_argument("BB spec needs positive ell and m");
    }
    if (a_terms.empty() || b_terms.empty()) {
        throw std::invalid_argument("BB spec needs nonempty a_terms and b_terms");
    }
    for (auto *terms : {&a_terms, &b_terms}) {
        for (auto &t : *terms) {
            if (t.var != 'x' && t.var != 'y') {
                throw std::invalid_argument("monomial variable must be x or y");
            }
            t.exponent %= (t.var == 'x' ? ell : m);
            // x^0 and y^0 are the same element; keep the canonical spelling.
            if (t.exponent == 0) {
                t.var = 'x';
            }
        }
        for (size_t i = 0; i < terms->size(); i++) {
            for (size_t j = i + 1; j < terms->size(); j++) {
                if ((*terms)[i] == (*terms)[j]) {
                    throw std::invalid_argument("repeated monomial " + (*terms)[i].str() + " cancels over GF(2)");
                }
            }
        }
    }
}

uint32_t monomial_target(uint32_t ell, uint32_t m, const Monomial &mono, uint32_t row) {
    uint32_t i = row / m;
    uint32_t j = row % m;
    if (mono.var == 'x') {
        i = (i + mono.exponent) % ell;
    } else {
        j = (j + mono.exponent) % m;
    }
    return i * m + j;
}

BinaryMatrix monomial_matrix(uint32_t ell, uint32_t m, const Monomial &mono) {
    uint32_t size = ell * m;
    std::vector<std::pair<uint32_t, uint32_t>> entries;
    entries.reserve(size);
    for (uint32_t r = 0; r < size; r++) {
        entries.emplace_back(r, monomial_target(ell, m, mono, r));
    }
    return BinaryMatrix::from_entries(size, size, entries);
}

namespace {

BinaryMatrix polynomial_matrix(uint32_t ell, uint32_t m, const std::vector<Monomial> &terms) {
    BinaryMatrix sum(ell * m, ell * m);
    for (const auto &t : terms) {
        sum = sum + monomial_matrix(ell, m, t);
    }
    return sum;
}

// Incrementally maintained span; vectors are stored reduced against earlier ones.
class SpanTracker {
   public:
    explicit SpanTracker(size_t n) : n_(n) {
    }

    BitVector reduce(BitVector v) const {
        for (size_t k = 0; k < basis_.size(); k++) {
            if (v.get(pivots_[k])) {
                v ^= basis_[k];
            }
        }
        return v;
    }

    bool add(const BitVector &v) {
        auto r = reduce(v);
        size_t p = r.first_set();
        if (p == n_) {
            return false;
        }
        basis_.push_back(std::move(r));
        pivots_.push_back(p);
        return true;
    }

   private:
    size_t n_;
    std::vector<BitVector> basis_;
    std::vector<size_t> pivots_;
};

std::vector<BitVector> logical_candidates(const BinaryMatrix &stabilizers, const BinaryMatrix &dual_checks) {
    SpanTracker span(stabilizers.cols());
    for (size_t r = 0; r < stabilizers.rows(); r++) {
        span.add(stabilizers.dense_row(r));
    }
    std::vector<BitVector> chosen;
    for (auto &v : gf2_nullspace(dual_checks)) {
        if (span.add(v)) {
            chosen.push_back(std::move(v));
        }
    }
    return chosen;
}

void reduce_weight(BitVector &op, const BinaryMatrix &stabilizers) {
    auto rows = stabilizers.dense_rows();
    bool improved = true;
    while (improved) {
        improved = false;
        for (const auto &row : rows) {
            auto candidate = op ^ row;
            if (candidate.popcount() < op.popcount()) {
                op = std::move(candidate);
                improved = true;
            }
        }
    }
}

}  // namespace

size_t css_logical_count(const BinaryMatrix &hx, const BinaryMatrix &hz) {
    return hx.cols() - gf2_rank(hx) - gf2_rank(hz);
}

std::vector<LogicalPair> compute_logicals(const BinaryMatrix &hx, const BinaryMatrix &hz) {
    if (hx.cols() != hz.cols()) {
        throw std::invalid_argument("hx and hz act on different qubit counts");
    }
    if (!(hx * hz.transpose()).is_zero()) {
        throw std::invalid_argument("X and Z checks do not commute");
    }
    // X logicals commute with Z checks and lie outside the X stabilizer span; dually for Z.
    auto xs = logical_candidates(hx, hz);
    auto zs = logical_candidates(hz, hx);
    if (xs.size() != zs.size()) {
        throw std::logic_error("logical X and Z spaces have different dimensions");
    }
    size_t k = xs.size();
    for (size_t i = 0; i < k; i++) {
        size_t j = i;
        while (j < k && !xs[i].dot(zs[j])) {
            j++;
        }
        if (j == k) {
            throw std::logic_error("degenerate symplectic pairing");
        }
        std::swap(zs[i], zs[j]);
        for (size_t m = i + 1; m < k; m++) {
            if (xs[m].dot(zs[i])) {
                xs[m] ^= xs[i];
            }
            if (xs[i].dot(zs[m])) {
                zs[m] ^= zs[i];
            }
        }
    }
    std::vector<LogicalPair> pairs(k);
    for (size_t i = 0; i < k; i++) {
        reduce_weight(xs[i], hx);
        reduce_weight(zs[i], hz);
        pairs[i].x_support = xs[i].support();
        pairs[i].z_support = zs[i].support();
    }
    return pairs;
}

CssCode build_surface_code(int d) {
    if (d < 1 || d % 2 == 0) {
        throw std::invalid_argument("surface code distance must be odd and >= 1, got " + std::to_string(d));
    }
    int width = 2 * d - 1;
    SurfaceLayout layout;
    layout.distance = d;
    std::map<std::array<int, 2>, uint32_t> data_index;
    for (int r = 0; r < width; r++) {
        for (int c = 0; c < width; c++) {
            if ((r + c) % 2 == 0) {
                data_index[{r, c}] = static_cast<uint32_t>(layout.data.size());
                layout.data.push_back({r, c});
            } else if (r % 2 == 1) {
                layout.x_checks.push_back({r, c});
            } else {
                layout.z_checks.push_back({r, c});
            }
        }
    }
    auto neighbors = [&](const std::array<int, 2> &pos) {
        std::vector<uint32_t> out;
        const int dr[4] = {-1, 0, 0, 1};
        const int dc[4] = {0, -1, 1, 0};
        for (int k = 0; k < 4; k++) {
            auto it = data_index.find({pos[0] + dr[k], pos[1] + dc[k]});
            if (it != data_index.end()) {
                out.push_back(it->second);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    CssCode code;
    code.name = "surface_d" + std::to_string(d);
    code.n = layout.data.size();
    code.distance = static_cast<size_t>(d);
    code.hx = BinaryMatrix(layout.x_checks.size(), code.n);
    code.hz = BinaryMatrix(layout.z_checks.size(), code.n);
    for (size_t r = 0; r < layout.x_checks.size(); r++) {
        code.hx.set_row(r, neighbors(layout.x_checks[r]));
    }
    for (size_t r = 0; r < layout.z_checks.size(); r++) {
        code.hz.set_row(r, neighbors(layout.z_checks[r]));
    }
    code.k = css_logical_count(code.hx, code.hz);

    // Z string down the left column, X string along the top row.
    LogicalPair pair;
    for (int r = 0; r < width; r += 2) {
        pair.z_support.push_back(data_index.at({r, 0}));
    }
    for (int c = 0; c < width; c += 2) {
        pair.x_support.push_back(data_index.at({0, c}));
    }
    std::sort(pair.z_support.begin(), pair.z_support.end());
    std::sort(pair.x_support.begin(), pair.x_support.end());
    code.logicals.push_back(std::move(pair));
    code.surface = std::move(layout);
    return code;
}

CssCode build_bb_code(BBSpec spec) {
    spec.normalize();
    auto a = polynomial_matrix(spec.ell, spec.m, spec.a_terms);
    auto b = polynomial_matrix(spec.ell, spec.m, spec.b_terms);
    CssCode code;
    code.n = 2 * static_cast<size_t>(spec.ell) * spec.m;
    code.hx = BinaryMatrix::hstack(a, b);
    code.hz = BinaryMatrix::hstack(b.transpose(), a.transpose());
    code.k = css_logical_count(code.hx, code.hz);
    code.logicals = compute_logicals(code.hx, code.hz);
    code.name = "bb_" + std::to_string(code.n) + "_" + std::to_string(code.k);
    code.bb = std::move(spec);
    return code;
}

namespace {

struct Preset {
    const char *key;
    size_t n;
    size_t k;
    size_t d;
    uint32_t ell;
    uint32_t m;
    const char *a[3];
    const char *b[3];
};

// Instances of the weight-6 bivariate bicycle family with three monomials per polynomial.
constexpr Preset kPresets[] = {
    {"72", 72, 12, 6, 6, 6, {"x^3", "y", "y^2"}, {"y^3", "x", "x^2"}},
    {"90", 90, 8, 10, 15, 3, {"x^9", "y", "y^2"}, {"1", "x^2", "x^7"}},
    {"144", 144, 12, 12, 12, 6, {"x^3", "y", "y^2"}, {"y^3", "x", "x^2"}},
};

const Preset &find_preset(std::string_view name) {
    std::string key(name);
    if (key.rfind("bb", 0) == 0) {
        key = key.substr(2);
        if (!key.empty() && (key[0] == '_' || key[0] == '-')) {
            key = key.substr(1);
        }
    }
    if (key.rfind("[[", 0) == 0) {
        auto comma = key.find(',');
        key = key.substr(2, comma == std::string::npos ? std::string::npos : comma - 2);
    }
    for (const auto &p : kPresets) {
        if (key == p.key) {
            return p;
        }
    }
    throw std::invalid_argument("unknown BB preset '" + std::string(name) + "' (known: 72, 90, 144)");
}

}  // namespace

BBSpec bb_preset(std::string_view name) {
    const auto &p = find_preset(name);
    BBSpec spec;
    spec.ell = p.ell;
    spec.m = p.m;
    for (auto t : p.a) {
        spec.a_terms.push_back(parse_monomial(t));
    }
    for (auto t : p.b) {
        spec.b_terms.push_back(parse_monomial(t));
    }
    spec.normalize();
    return spec;
}

std::optional<size_t> bb_preset_distance(std::string_view name) {
    return find_preset(name).d;
}

std::vector<std::string> bb_preset_names() {
    std::vector<std::string> names;
    for (const auto &p : kPresets) {
        names.emplace_back(p.key);
    }
    return names;
}

CssCode build_bb_preset(std::string_view name) {
    const auto &p = find_preset(name);
    auto code = build_bb_code(bb_preset(name));
    if (code.n != p.n || code.k != p.k) {
        throw std::logic_error(
            "preset " + std::string(p.key) + " produced [[" + std::to_string(code.n) + "," + std::to_string(code.k) +
            "]] instead of [[" + std::to_string(p.n) + "," + std::to_string(p.k) + "]]");
    }
    code.distance = p.d;
    code.name = "bb" + std::string(p.key);
    return code;
}

}  // namespace netqec
