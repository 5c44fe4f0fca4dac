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


#ifndef NETQEC_PARTITION_H
#define NETQEC_PARTITION_H

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "netqec/codes.h"

namespace netqec {

enum class VertexKind : uint8_t { Data, XCheck, ZCheck };

const char *vertex_kind_name(VertexKind kind);

/// Data vertices come first, then X checks, then Z checks.
struct TannerGraph {
    size_t num_data = 0;
    size_t num_x_checks = 0;
    size_t num_z_checks = 0;
    /// (check vertex, data vertex) pairs, one per nonzero of [H_X; H_Z].
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    std::vector<std::vector<uint32_t>> adjacency;

    size_t num_vertices() const {
        return num_data + num_x_checks + num_z_checks;
    }
    VertexKind kind(uint32_t v) const;
    uint32_t local_index(uint32_t v) const;
    uint32_t vertex_id(VertexKind kind, uint32_t index) const;
};

TannerGraph build_combined_tanner(const CssCode &code);
TannerGraph build_combined_tanner(const BinaryMatrix &hx, const BinaryMatrix &hz);

struct Partition {
    /// Node id per vertex, indexed like TannerGraph vertices.
    std::vector<uint8_t> assignment;
    std::array<size_t, 2> data_counts{};
    std::array<size_t, 2> x_check_counts{};
    std::array<size_t, 2> z_check_counts{};

    uint8_t node_of(const TannerGraph &g, VertexKind kind, uint32_t index) const {
        return assignment[g.vertex_id(kind, index)];
    }
};

/// Fills the per-kind counts from `assignment`.
Partition make_partition(const TannerGraph &graph, std::vector<uint8_t> assignment);

struct BipartitionOptions {
    size_t num_parts = 2;
    size_t balance_tol = 2;
    size_t restarts = 64;
    uint64_t seed = 0;
};

/// Fiduccia-Mattheyses with random balanced starts. Deterministic in (graph, options).
Partition bipartition(const TannerGraph &graph, const BipartitionOptions &options);

/// Number of edges whose endpoints sit on different nodes.
size_t cut_size(const TannerGraph &graph, const std::vector<uint8_t> &assignment);

struct PartitionStats {
    size_t total_edges = 0;
    size_t cut_edges_x = 0;
    size_t cut_edges_z = 0;
    size_t cut_edges_total = 0;
    size_t local_edges = 0;
    size_t cross_partition_stabs_x = 0;
    size_t cross_partition_stabs_z = 0;
    std::array<size_t, 2> data_counts{};
    std::array<size_t, 2> x_check_counts{};
    std::array<size_t, 2> z_check_counts{};

    uint64_t bell_pairs_per_shot(uint64_t n_rep) const {
        return static_cast<uint64_t>(cut_edges_total) * n_rep;
    }
    std::string to_json(uint64_t n_rep) const;
};

PartitionStats partition_stats(const TannerGraph &graph, const Partition &partition);

/// Lines of `vertex_kind index node`.
std::string export_partition(const TannerGraph &graph, const Partition &partition);
Partition import_partition(const TannerGraph &graph, std::string_view text);

}  // namespace netqec

#endif
