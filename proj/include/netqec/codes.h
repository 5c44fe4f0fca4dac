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

#ifndef NETQEC_CODES_H
#define NETQEC_CODES_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netqec/gf2.h"

namespace netqec {

enum class PauliBasis : uint8_t { X, Z };

char basis_name(PauliBasis b);
PauliBasis parse_basis(std::string_view text);

/// x^e or y^e; "1" is stored as x^0.
struct Monomial {
    char var = 'x';
    uint32_t exponent = 0;

    bool operator==(const Monomial &) const = default;
    std::string str() const;
};

/// Grammar: `x^E | y^E | x | y | 1`.
Monomial parse_monomial(std::string_view text);

/// Bivariate bicycle code parameters: A = sum(a_terms), B = sum(b_terms) over F2[x,y]/(x^ell-1, y^m-1).
struct BBSpec {
    uint32_t ell = 0;
    uint32_t m = 0;
    std::vector<Monomial> a_terms;
    std::vector<Monomial> b_terms;

    /// Reduces exponents mod ell / m and rejects empty or degenerate specs.
    void normalize();
    bool operator==(const BBSpec &) const = default;
};

/// Lattice positions used by the surface-code circuit builder. Coordinates are (row, col)
/// on the (2d-1)x(2d-1) grid; data sits where row+col is even.
struct SurfaceLayout {
    int distance = 0;
    std::vector<std::array<int, 2>> data;
    std::vector<std::array<int, 2>> x_checks;
    std::vector<std::array<int, 2>> z_checks;
};

struct LogicalPair {
    std::vector<uint32_t> x_support;
    std::vector<uint32_t> z_support;
};

struct CssCode {
    std::string name;
    size_t n = 0;
    size_t k = 0;
    /// Known distance metadata; never computed.
    std::optional<size_t> distance;
    BinaryMatrix hx;
    BinaryMatrix hz;
    std::vector<LogicalPair> logicals;
    std::optional<BBSpec> bb;
    std::optional<SurfaceLayout> surface;
};

/// Planar (unrotated) surface code; d = 1 gives a bare qubit with no checks.
CssCode build_surface_code(int d);

/// H_X = [A | B], H_Z = [B^T | A^T]; data index (i, j) -> i*m + j in each block.
CssCode build_bb_code(BBSpec spec);

/// Monomial matrix of size ell*m built from x = S_ell (x) I_m and y = I_ell (x) S_m.
BinaryMatrix monomial_matrix(uint32_t ell, uint32_t m, const Monomial &mono);

/// Column reached from `row` through a monomial matrix (every monomial matrix is a permutation).
uint32_t monomial_target(uint32_t ell, uint32_t m, const Monomial &mono, uint32_t row);

/// Symplectic Gram-Schmidt over the logical space of a CSS code. Returns k pairs where the
/// X part of pair i anticommutes only with the Z part of pair i. Throws if hx hz^T != 0.
std::vector<LogicalPair> compute_logicals(const BinaryMatrix &hx, const BinaryMatrix &hz);

/// n - rank(hx) - rank(hz).
size_t css_logical_count(const BinaryMatrix &hx, const BinaryMatrix &hz);

/// Names accepted: "72", "90", "144", "bb72", "[[72,12,6]]", etc.
BBSpec bb_preset(std::string_view name);
std::optional<size_t> bb_preset_distance(std::string_view name);
std::vector<std::string> bb_preset_names();

/// Builds a named preset, checking k against the rank computation.
CssCode build_bb_preset(std::string_view name);

}  // namespace netqec

#endif
