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


#include "netqec/partition.h"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace netqec {

const char *vertex_kind_name(VertexKind kind) {
    switch (kind) {
        case VertexKind::Data:
            return "data";
        case VertexKind::XCheck:
            return "xcheck";
        case VertexKind::ZCheck:
            return "zcheck";
    }
    return "?";
}

VertexKind TannerGraph::kind(uint32_t v) const {
    if (v < num_data) {
        return VertexKind::Data;
    }
    if (v < num_data + num_x_checks) {
        return VertexKind::XCheck;
    }
    return VertexKind::ZCheck;
}

uint32_t TannerGraph::local_index(uint32_t v) const {
    if (v < num_data) {
        return v;
    }
    if (v < num_data + num_x_checks) {
        return v - num_data;
    }
    return v - num_data - num_x_checks;
}

uint32_t TannerGraph::vertex_id(VertexKind kind, uint32_t index) const {
    switch (kind) {
        case VertexKind::Data:
            return index;
        case VertexKind::XCheck:
            return num_data + index;
        case VertexKind::ZCheck:
            return num_data + num_x_checks + index;
    }
    return 0;
}

TannerGraph build_combined_tanner(const BinaryMatrix &hx, const BinaryMatrix &hz) {
    if (hx.cols() != hz.cols()) {
        throw std::invalid_argument("hx and hz have different column counts");
    }
    TannerGraph g;
    g.num_data = hx.cols();
    g.num_x_checks = hx.rows();
    g.num_z_checks = hz.rows();
    g.adjacency.resize(g.num_vertices());
    auto add_rows = [&](const BinaryMatrix &h, VertexKind kind) {
        for (size_t r = 0; r < h.rows(); r++) {
            uint32_t check = g.vertex_id(kind, static_cast<uint32_t>(r));
            for (auto c : h.row(r)) {
                g.edges.emplace_back(check, c);
                g.adjacency[check].push_back(c);
                g.adjacency[c].push_back(check);
            }
        }
    };
    add_rows(hx, VertexKind::XCheck);
    add_rows(hz, VertexKind::ZCheck);
    for (auto &adj : g.adjacency) {
        std::sort(adj.begin(), adj.end());
    }
    return g;
}

TannerGraph build_combined_tanner(const CssCode &code) {
    return build_combined_tanner(code.hx, code.hz);
}

Partition make_partition(const TannerGraph &graph, std::vector<uint8_t> assignment) {
    if (assignment.size() != graph.num_vertices()) {
        throw std::invalid_argument("assignment size does not match vertex count");
    }
    Partition p;
    for (uint32_t v = 0; v < assignment.size(); v++) {
        uint8_t node = assignment[v];
        if (node > 1) {
            throw std::invalid_argument("node id must be 0 or 1");
        }
        switch (graph.kind(v)) {
            case VertexKind::Data:
                p.data_counts[node]++;
                break;
            case VertexKind::XCheck:
                p.x_check_counts[node]++;
                break;
            case VertexKind::ZCheck:
                p.z_check_counts[node]++;
                break;
        }
    }
    p.assignment = std::move(assignment);
    return p;
}

size_t cut_size(const TannerGraph &graph, const std::vector<uint8_t> &assignment) {
    size_t cut = 0;
    for (auto [c, d] : graph.edges) {
        cut += assignment[c] != assignment[d];
    }
    return cut;
}

namespace {

size_t abs_diff(size_t a, size_t b) {
    return a > b ? a - b : b - a;
}

class FmRefiner {
   public:
    FmRefiner(const TannerGraph &g, size_t tol) : g_(g), tol_(tol) {
        for (const auto &adj : g.adjacency) {
            max_degree_ = std::max(max_degree_, static_cast<int>(adj.size()));
        }
    }

    // Runs passes until neither the cut nor the check imbalance improves.
    void refine(std::vector<uint8_t> &side) {
        auto best = score(side);
        while (true) {
            run_pass(side);
            auto now = score(side);
            if (!(now < best)) {
                break;
            }
            best = now;
        }
    }

   private:
    std::pair<size_t, size_t> score(const std::vector<uint8_t> &side) const {
        std::array<size_t, 2> xs{}, zs{};
        for (uint32_t v = g_.num_data; v < side.size(); v++) {
            (g_.kind(v) == VertexKind::XCheck ? xs : zs)[side[v]]++;
        }
        return {cut_size(g_, side), abs_diff(xs[0], xs[1]) + abs_diff(zs[0], zs[1])};
    }

    void run_pass(std::vector<uint8_t> &side) {
        size_t nv = g_.num_vertices();
        std::vector<int> gain(nv, 0);
        std::vector<bool> locked(nv, false);
        std::vector<std::set<uint32_t>> buckets(2 * max_degree_ + 1);
        std::array<size_t, 2> data{}, xs{}, zs{};
        size_t cut = 0;
        for (uint32_t v = 0; v < nv; v++) {
            for (auto u : g_.adjacency[v]) {
                gain[v] += side[u] != side[v] ? 1 : -1;
            }
            buckets[gain[v] + max_degree_].insert(v);
            switch (g_.kind(v)) {
                case VertexKind::Data:
                    data[side[v]]++;
                    break;
                case VertexKind::XCheck:
                    xs[side[v]]++;
                    break;
                case VertexKind::ZCheck:
                    zs[side[v]]++;
                    break;
            }
        }
        cut = cut_size(g_, side);

        auto check_imbalance = [&]() { return abs_diff(xs[0], xs[1]) + abs_diff(zs[0], zs[1]); };
        // Within a pass the data split may drift slightly past the tolerance, which lets
        // tol = 0 swap vertices; only prefixes that satisfy the tolerance are kept.
        auto data_move_ok = [&](uint8_t from) {
            size_t a = data[from] - 1;
            size_t b = data[1 - from] + 1;
            return abs_diff(a, b) <= tol_ + 2;
        };

        std::vector<uint32_t> moves;
        std::pair<size_t, size_t> best{cut, check_imbalance()};
        size_t best_prefix = 0;
        while (true) {
            uint32_t chosen = UINT32_MAX;
            for (int b = static_cast<int>(buckets.size()) - 1; b >= 0 && chosen == UINT32_MAX; b--) {
                for (auto v : buckets[b]) {
                    if (v >= g_.num_data || data_move_ok(side[v])) {
                        chosen = v;
                        break;
                    }
                }
            }
            if (chosen == UINT32_MAX) {
                break;
            }
            uint32_t v = chosen;
            uint8_t from = side[v];
            buckets[gain[v] + max_degree_].erase(v);
            locked[v] = true;
            cut -= gain[v];
            side[v] = 1 - from;
            switch (g_.kind(v)) {
                case VertexKind::Data:
                    data[from]--;
                    data[1 - from]++;
                    break;
                case VertexKind::XCheck:
                    xs[from]--;
                    xs[1 - from]++;
                    break;
                case VertexKind::ZCheck:
                    zs[from]--;
                    zs[1 - from]++;
                    break;
            }
            gain[v] = -gain[v];
            for (auto u : g_.adjacency[v]) {
                if (locked[u]) {
                    continue;
                }
                buckets[gain[u] + max_degree_].erase(u);
                gain[u] += side[u] == from ? 2 : -2;
                buckets[gain[u] + max_degree_].insert(u);
            }
            moves.push_back(v);
            std::pair<size_t, size_t> now{cut, check_imbalance()};
            if (abs_diff(data[0], data[1]) <= tol_ && now < best) {
                best = now;
                best_prefix = moves.size();
            }
        }
        for (size_t i = moves.size(); i > best_prefix; i--) {
            side[moves[i - 1]] ^= 1;
        }
    }

    const TannerGraph &g_;
    size_t tol_;
    int max_degree_ = 0;
};

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::vector<uint8_t> random_start(const TannerGraph &g, std::mt19937_64 &rng) {
    std::vector<uint8_t> side(g.num_vertices(), 0);
    std::vector<uint32_t> order(g.num_data);
    for (uint32_t i = 0; i < g.num_data; i++) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    // With an odd count the larger half lands on a random side.
    uint8_t low = rng() & 1;
    size_t half = g.num_data / 2;
    for (size_t i = 0; i < g.num_data; i++) {
        side[order[i]] = i < half ? low : 1 - low;
    }
    // Each check starts on the side holding most of its data neighbors.
    for (uint32_t v = g.num_data; v < g.num_vertices(); v++) {
        size_t ones = 0;
        for (auto u : g.adjacency[v]) {
            ones += side[u];
        }
        size_t zeros = g.adjacency[v].size() - ones;
        side[v] = ones == zeros ? (rng() & 1) : (ones > zeros);
    }
    return side;
}

}  // namespace

Partition bipartition(const TannerGraph &graph, const BipartitionOptions &options) {
    if (options.num_parts != 2) {
        throw std::invalid_argument("only two-way partitions are supported");
    }
    if (graph.num_vertices() == 0) {
        throw std::invalid_argument("cannot partition an empty graph");
    }
    if (options.balance_tol < graph.num_data % 2) {
        throw std::invalid_argument("balance tolerance " + std::to_string(options.balance_tol) +
                                    " is infeasible for an odd number of data vertices");
    }
    if (options.restarts == 0) {
        throw std::invalid_argument("restarts must be positive");
    }
    FmRefiner refiner(graph, options.balance_tol);
    std::vector<uint8_t> best;
    std::pair<size_t, size_t> best_score{SIZE_MAX, SIZE_MAX};
    for (size_t r = 0; r < options.restarts; r++) {
        std::mt19937_64 rng(splitmix64(options.seed * 0x100000001B3ULL + r));
        auto side = random_start(graph, rng);
        refiner.refine(side);
        auto p = make_partition(graph, side);
        std::pair<size_t, size_t> score{cut_size(graph, side),
                                        abs_diff(p.x_check_counts[0], p.x_check_counts[1]) +
                                            abs_diff(p.z_check_counts[0], p.z_check_counts[1])};
        if (score < best_score) {
            best_score = score;
            best = std::move(side);
        }
    }
    return make_partition(graph, std::move(best));
}

PartitionStats partition_stats(const TannerGraph &graph, const Partition &partition) {
    if (partition.assignment.size() != graph.num_vertices()) {
        throw std::invalid_argument("partition does not cover every vertex");
    }
    PartitionStats s;
    s.total_edges = graph.edges.size();
    std::vector<bool> crossing(graph.num_vertices(), false);
    for (auto [c, d] : graph.edges) {
        if (partition.assignment[c] == partition.assignment[d]) {
            s.local_edges++;
            continue;
        }
        crossing[c] = true;
        (graph.kind(c) == VertexKind::XCheck ? s.cut_edges_x : s.cut_edges_z)++;
    }
    s.cut_edges_total = s.cut_edges_x + s.cut_edges_z;
    for (uint32_t v = graph.num_data; v < graph.num_vertices(); v++) {
        if (crossing[v]) {
            (graph.kind(v) == VertexKind::XCheck ? s.cross_partition_stabs_x : s.cross_partition_stabs_z)++;
        }
    }
    auto recount = make_partition(graph, partition.assignment);
    s.data_counts = recount.data_counts;
    s.x_check_counts = recount.x_check_counts;
    s.z_check_counts = recount.z_check_counts;
    return s;
}

std::string PartitionStats::to_json(uint64_t n_rep) const {
    nlohmann::ordered_json j;
    j["tanner_edges"] = total_edges;
    j["bridge_edges"] = cut_edges_total;
    j["bridge_edges_x"] = cut_edges_x;
    j["bridge_edges_z"] = cut_edges_z;
    j["local_edges"] = local_edges;
    j["cross_partition_stabilizers"] = cross_partition_stabs_x + cross_partition_stabs_z;
    j["cross_partition_stabilizers_x"] = cross_partition_stabs_x;
    j["cross_partition_stabilizers_z"] = cross_partition_stabs_z;
    j["data_qubits"] = {data_counts[0], data_counts[1]};
    j["x_checks"] = {x_check_counts[0], x_check_counts[1]};
    j["z_checks"] = {z_check_counts[0], z_check_counts[1]};
    j["n_rep"] = n_rep;
    j["bell_pairs_per_shot"] = bell_pairs_per_shot(n_rep);
    return j.dump(2);
}

std::string export_partition(const TannerGraph &graph, const Partition &partition) {
    std::ostringstream out;
    for (uint32_t v = 0; v < graph.num_vertices(); v++) {
        out << vertex_kind_name(graph.kind(v)) << ' ' << graph.local_index(v) << ' '
            << static_cast<int>(partition.assignment[v]) << '\n';
    }
    return out.str();
}

Partition import_partition(const TannerGraph &graph, std::string_view text) {
    std::vector<int> assignment(graph.num_vertices(), -1);
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string kind;
        long long index = -1;
        int node = -1;
        std::string extra;
        if (!(ls >> kind >> index >> node) || (ls >> extra)) {
            throw std::invalid_argument("partition line " + std::to_string(line_no) + " is malformed");
        }
        VertexKind k;
        size_t limit;
        if (kind == "data") {
            k = VertexKind::Data;
            limit = graph.num_data;
        } else if (kind == "xcheck") {
            k = VertexKind::XCheck;
            limit = graph.num_x_checks;
        } else if (kind == "zcheck") {
            k = VertexKind::ZCheck;
            limit = graph.num_z_checks;
        } else {
            throw std::invalid_argument("partition line " + std::to_string(line_no) + ": unknown vertex kind '" +
                                        kind + "'");
        }
        if (index < 0 || static_cast<size_t>(index) >= limit) {
            throw std::invalid_argument("partition line " + std::to_string(line_no) + ": index out of range");
        }
        if (node != 0 && node != 1) {
            throw std::invalid_argument("partition line " + std::to_string(line_no) + ": node must be 0 or 1");
        }
        uint32_t v = graph.vertex_id(k, static_cast<uint32_t>(index));
        if (assignment[v] != -1) {
            throw std::invalid_argument("partition line " + std::to_string(line_no) + ": " + kind + " " +
                                        std::to_string(index) + " assigned twice");
        }
        assignment[v] = node;
    }
    std::vector<uint8_t> out(graph.num_vertices());
    for (uint32_t v = 0; v < graph.num_vertices(); v++) {
        if (assignment[v] < 0) {
            throw std::invalid_argument(std::string("partition file is missing ") + vertex_kind_name(graph.kind(v)) +
                                        " " + std::to_string(graph.local_index(v)));
        }
        out[v] = static_cast<uint8_t>(assignment[v]);
    }
    return make_partition(graph, std::move(out));
}

}  // namespace netqec
