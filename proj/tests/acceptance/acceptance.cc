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


// Acceptance checks. Run with criterion numbers (1-10) or "all"; prints one PASS/FAIL line
// per criterion and exits non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netqec/builders.h"
#include "netqec/codes.h"
#include "netqec/decode.h"
#include "netqec/gf2.h"
#include "netqec/harness.h"
#include "netqec/partition.h"
#include "netqec/sim.h"
#include "support/gadget_oracle.h"
#include "support/matching_oracle.h"
#include "support/tableau.h"

using namespace netqec;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Accumulates sub-checks into one outcome; failed checks are listed in the detail.
class Checks {
   public:
    void expect(bool ok, const std::string &what) {
        pass_ &= ok;
        if (!ok) {
            note("FAILED " + what);
        }
    }
    void note(const std::string &what) {
        if (!notes_.empty()) {
            notes_ += "; ";
        }
        notes_ += what;
    }
    Outcome outcome() const {
        return {pass_, notes_};
    }

   private:
    bool pass_ = true;
    std::string notes_;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

ExperimentConfig load_config(const std::string &file) {
    std::ifstream in(std::string(NETQEC_SOURCE_DIR) + "/configs/" + file);
    if (!in) {
        throw std::runtime_error("cannot open configs/" + file);
    }
    std::stringstream text;
    text << in.rdbuf();
    return ExperimentConfig::from_json(text.str());
}

void log_point(const ExperimentPoint &pt) {
    std::cerr << "  " << pt.code << " " << pt.mode << " p=" << pt.p << " p_ghz=" << pt.p_ghz
              << " p_bell=" << pt.p_bell << " shots=" << pt.shots << " p_L=" << pt.p_l << " ("
              << fmt(pt.wall_seconds) << " s)" << std::endl;
}

// ---------------------------------------------------------------------------------------------

Outcome codes_structure() {
    Checks c;
    auto t0 = Clock::now();
    struct Want {
        const char *name;
        size_t n, k;
    };
    for (auto w : {Want{"72", 72, 12}, Want{"90", 90, 8}, Want{"144", 144, 12}}) {
        auto code = build_bb_preset(w.name);
        size_t k = code.n - gf2_rank(code.hx) - gf2_rank(code.hz);
        c.expect(code.n == w.n && k == w.k && code.k == w.k,
                 std::string("bb") + w.name + " n=" + std::to_string(code.n) + " k=" + std::to_string(k));
    }
    for (auto [d, n] : {std::pair{3, 13}, std::pair{5, 41}, std::pair{7, 85}}) {
        auto code = build_surface_code(d);
        size_t k = code.n - gf2_rank(code.hx) - gf2_rank(code.hz);
        c.expect(code.n == static_cast<size_t>(n) && k == 1 && code.k == 1,
                 "surface d=" + std::to_string(d) + " n=" + std::to_string(code.n) + " k=" + std::to_string(k));
    }
    double secs = seconds_since(t0);
    c.expect(secs < 1.0, "runtime " + fmt(secs) + " s");
    c.note("all presets and surface d=3,5,7 match in " + fmt(secs) + " s");
    return c.outcome();
}

Outcome partition_quality() {
    Checks c;
    BipartitionOptions opts;
    opts.num_parts = 2;
    opts.balance_tol = 2;
    opts.restarts = 64;
    opts.seed = 0;
    {
        auto graph = build_combined_tanner(build_bb_preset("72"));
        auto t0 = Clock::now();
        auto part = bipartition(graph, opts);
        double secs = seconds_since(t0);
        auto stats = partition_stats(graph, part);
        auto [a, b] = std::minmax(stats.data_counts[0], stats.data_counts[1]);
        c.expect(stats.total_edges == 432, "bb72 edges " + std::to_string(stats.total_edges));
        c.expect(stats.cut_edges_total <= 120, "bb72 cut " + std::to_string(stats.cut_edges_total) + " <= 120");
        c.expect((a == 35 && b == 37) || (a == 36 && b == 36),
                 "bb72 data split " + std::to_string(a) + "/" + std::to_string(b));
        c.expect(secs < 10, "bb72 runtime " + fmt(secs) + " s");
        c.note("bb72 cut " + std::to_string(stats.cut_edges_total) + " split " + std::to_string(a) + "/" +
               std::to_string(b) + " in " + fmt(secs) + " s");
    }
    for (auto [name, reference_cut] : {std::pair{"90", 102.0}, std::pair{"144", 124.0}}) {
        auto graph = build_combined_tanner(build_bb_preset(name));
        auto stats = partition_stats(graph, bipartition(graph, opts));
        double limit = 1.15 * reference_cut;
        c.expect(stats.cut_edges_total <= limit,
                 std::string("bb") + name + " cut " + std::to_string(stats.cut_edges_total) + " <= " + fmt(limit));
        c.note(std::string("bb") + name + " cut " + std::to_string(stats.cut_edges_total));
    }
    return c.outcome();
}

Outcome noiseless_determinism() {
    Checks c;
    auto t0 = Clock::now();
    const size_t shots = 10000;
    NoiseModel quiet;
    std::vector<std::pair<std::string, Circuit>> circuits;
    for (int d : {3, 5, 7}) {
        for (bool networked : {false, true}) {
            for (auto basis : {PauliBasis::Z, PauliBasis::X}) {
                circuits.emplace_back(std::string(networked ? "networked" : "monolithic") + " surface d=" +
                                          std::to_string(d) + " " + basis_name(basis),
                                      build_surface_circuit(d, d, quiet, networked, basis));
            }
        }
    }
    for (const auto &name : bb_preset_names()) {
        auto code = build_bb_preset(name);
        size_t rounds = bb_preset_distance(name).value_or(1);
        auto part = bipartition(build_combined_tanner(code), BipartitionOptions{});
        for (auto basis : {PauliBasis::Z, PauliBasis::X}) {
            circuits.emplace_back("monolithic bb" + name + " " + basis_name(basis),
                                  build_bb_circuit(code, rounds, quiet, nullptr, basis));
            circuits.emplace_back("partitioned bb" + name + " " + basis_name(basis),
                                  build_bb_circuit(code, rounds, quiet, &part, basis));
        }
    }
    std::mt19937_64 rng(3);
    size_t total_events = 0, total_failures = 0;
    for (const auto &[name, circuit] : circuits) {
        auto sample = frame_sample(circuit, shots, 11, 4);
        size_t events = 0, failures = 0;
        for (size_t s = 0; s < sample.shots(); s++) {
            events += sample.detectors.row_any(s);
            failures += sample.observables.row_any(s);
        }
        auto dem = extract_dem(circuit);
        // The reference run itself must be deterministic: random outcomes of a stabilizer
        // simulation still give all-zero detectors and observables.
        oracle::Tableau t(circuit.num_qubits());
        auto res = oracle::run_noiseless(circuit, t, rng);
        bool tableau_quiet = std::none_of(res.detectors.begin(), res.detectors.end(), [](uint8_t v) { return v; }) &&
                             std::none_of(res.observables.begin(), res.observables.end(), [](uint8_t v) { return v; });
        c.expect(sample.shots() == shots && events == 0 && failures == 0 && dem.faults.empty() && tableau_quiet,
                 name + ": events " + std::to_string(events) + ", failures " + std::to_string(failures) +
                     ", dem faults " + std::to_string(dem.faults.size()) +
                     (tableau_quiet ? "" : ", tableau run fired"));
        total_events += events;
        total_failures += failures;
    }
    double secs = seconds_since(t0);
    c.expect(secs < 60, "runtime " + fmt(secs) + " s");
    c.note(std::to_string(circuits.size()) + " circuits x " + std::to_string(shots) + " shots: " +
           std::to_string(total_events) + " detector events, " + std::to_string(total_failures) +
           " logical failures, " + fmt(secs) + " s");
    return c.outcome();
}

// Crossings of the d=5 and d=7 curves with the d=3 curve must fall inside [lo, hi].
Outcome surface_crossings(const ExperimentConfig &config, double lo, double hi) {
    Checks c;
    std::map<int, std::vector<std::pair<double, double>>> curves;
    auto points = run_experiment(config, log_point);
    for (const auto &pt : points) {
        c.expect(pt.error.empty(), "point error: " + pt.error);
        c.expect(pt.shots == config.max_shots, "d=" + std::to_string(pt.distance) + " shots " + std::to_string(pt.shots));
        double x = config.sweep == SweepParameter::kPGhz ? pt.p_ghz : pt.p;
        curves[pt.distance].emplace_back(x, pt.p_l);
    }
    for (int d : {5, 7}) {
        auto xs = curve_crossings(curves[3], curves[d]);
        bool inside = std::any_of(xs.begin(), xs.end(), [&](double x) { return x >= lo && x <= hi; });
        std::string list;
        for (double x : xs) {
            list += (list.empty() ? "" : ",") + fmt(x);
        }
        c.expect(inside, "d=" + std::to_string(d) + "/d=3 crossing in [" + fmt(lo) + "," + fmt(hi) + "]: {" + list + "}");
        c.note("d=" + std::to_string(d) + " crosses d=3 at {" + list + "}");
    }
    return c.outcome();
}

Outcome ghz_threshold() {
    auto config = load_config("ghz_sweep.json");
    return surface_crossings(config, 0.01, 0.02);
}

Outcome networked_threshold() {
    auto config = load_config("networked_surface_sweep.json");
    return surface_crossings(config, 0.005, 0.01);
}

Outcome partitioned_ordering() {
    Checks c;
    auto base = load_config("bb72_partitioned.json");
    base.max_shots = 100000;
    base.max_failures = base.max_shots;

    auto ordering = base;
    ordering.values = {0.003};
    ordering.p_bells = {0.0125, 0.05};
    auto points = run_experiment(ordering, log_point);
    const ExperimentPoint *mono = nullptr, *low = nullptr, *high = nullptr;
    for (const auto &pt : points) {
        c.expect(pt.error.empty(), "point error: " + pt.error);
        if (pt.mode == "monolithic") {
            mono = &pt;
        } else if (pt.p_bell == 0.0125) {
            low = &pt;
        } else if (pt.p_bell == 0.05) {
            high = &pt;
        }
    }
    if (!mono || !low || !high) {
        c.expect(false, "missing curve at p=0.003");
        return c.outcome();
    }
    auto show = [](const char *label, const ExperimentPoint &pt) {
        return std::string(label) + " " + fmt(pt.p_l) + " [" + fmt(pt.ci_lo) + "," + fmt(pt.ci_hi) + "] (" +
               std::to_string(pt.shots) + " shots)";
    };
    c.expect(high->ci_lo > low->ci_hi, "p_bell=0.05 above p_bell=0.0125 with disjoint intervals");
    c.expect(low->ci_lo > mono->ci_hi, "p_bell=0.0125 above monolithic with disjoint intervals");
    c.note("p=0.003: " + show("pb=0.05", *high) + " > " + show("pb=0.0125", *low) + " > " + show("mono", *mono));

    auto low_p = base;
    low_p.values = {0.001};
    low_p.modes = {ExperimentMode::kPartitioned};
    low_p.p_bells = {0.0125};
    auto pts = run_experiment(low_p, log_point);
    if (pts.size() != 1 || !pts[0].error.empty()) {
        c.expect(false, "p=0.001 partitioned point did not run");
        return c.outcome();
    }
    c.expect(pts[0].ci_hi < 0.001, "p=0.001 partitioned p_bell=0.0125 below uncoded line: " + show("p_L", pts[0]));
    c.note("p=0.001: " + show("pb=0.0125", pts[0]) + " vs uncoded 0.001");
    return c.outcome();
}

Outcome fit_recovery() {
    Checks c;
    // Coefficient triples (alpha, c0, c1, c2) of the six partitioned-code curves.
    struct Row {
        int alpha;
        double c0, c1, c2;
    };
    const Row rows[] = {
        {3, 13.680, -290.350, 2.209e4}, {3, 17.590, -1059.125, 6.059e4}, {4, 18.263, -214.952, 1.572e4},
        {4, 23.547, -1328.447, 7.466e4}, {5, 23.500, -1081.297, 9.657e4}, {5, 27.004, -1029.260, 5.650e4},
    };
    auto six_digits = [](double got, double want) { return std::fabs(got - want) <= 5e-7 * std::fabs(want); };
    for (const auto &row : rows) {
        std::vector<std::pair<double, double>> pts;
        for (double p : {3e-3, 5e-3, 8e-3}) {
            pts.emplace_back(p, std::pow(p, row.alpha) * std::exp(row.c0 + row.c1 * p + row.c2 * p * p));
        }
        auto fit = fit_ansatz(pts, row.alpha);
        c.expect(fit.n_pts == 3 && six_digits(fit.c0, row.c0) && six_digits(fit.c1, row.c1) && six_digits(fit.c2, row.c2),
                 "triple c0=" + fmt(row.c0) + " recovered as (" + fmt(fit.c0) + ", " + fmt(fit.c1) + ", " +
                     fmt(fit.c2) + ")");
        pts.pop_back();
        auto two = fit_ansatz(pts, row.alpha);
        c.expect(two.n_pts == 2 && two.c2 == 0, "two-point fit has c2 = " + fmt(two.c2));
    }
    c.note("six triples recovered to 6 significant digits; two-point fits have c2 = 0");
    return c.outcome();
}

Outcome fidelity_conversion() {
    Checks c;
    double a = bell_fidelity_to_p(0.96), b = bell_fidelity_to_p(0.99);
    c.expect(a == 0.05, "0.96 -> " + fmt(a));
    c.expect(b == 0.0125, "0.99 -> " + fmt(b));
    c.note("0.96 -> 0.05 and 0.99 -> 0.0125 exactly");
    return c.outcome();
}

// Per-component rate comparison of two samples of the same circuit.
struct MarginalComparison {
    size_t components = 0;
    double chi2 = 0;
    double max_z = 0;
};

MarginalComparison compare_marginals(const FrameSample &a, const FrameSample &b) {
    MarginalComparison out;
    double n = static_cast<double>(a.shots());
    auto column_counts = [](const BitTable &t) {
        std::vector<double> counts(t.cols(), 0);
        for (size_t r = 0; r < t.rows(); r++) {
            for (auto c : t.row_support(r)) {
                counts[c]++;
            }
        }
        return counts;
    };
    auto add = [&](const std::vector<double> &ca, const std::vector<double> &cb) {
        for (size_t i = 0; i < ca.size(); i++) {
            double q = (ca[i] + cb[i]) / (2 * n);
            if (q == 0) {
                continue;
            }
            double z = (ca[i] - cb[i]) / n / std::sqrt(2 * q * (1 - q) / n);
            out.components++;
            out.chi2 += z * z;
            out.max_z = std::max(out.max_z, std::fabs(z));
        }
    };
    add(column_counts(a.detectors), column_counts(b.detectors));
    add(column_counts(a.observables), column_counts(b.observables));
    return out;
}

Outcome oracle_suites() {
    Checks c;
    auto t0 = Clock::now();

    // Matching against exhaustive minimum-weight search.
    {
        std::mt19937_64 rng(2026);
        size_t syndromes = 0, bad = 0;
        for (int instance = 0; instance < 200; instance++) {
            uint32_t nodes = 2 + static_cast<uint32_t>(rng() % 9);
            auto g = oracle::random_graph_dem(rng, nodes, 8 + rng() % 9);
            MatchingDecoder dec(g.dem);
            auto ref = oracle::exhaustive_minimum(g);
            for (const auto &[syn, w] : ref.by_syndrome) {
                auto r = dec.decode_detailed(oracle::syndrome_bits(syn, nodes));
                auto it = ref.by_coset.find({syn, r.observables});
                bool ok = std::fabs(r.weight - w) < 1e-4 && it != ref.by_coset.end() && std::fabs(it->second - w) < 1e-4;
                bad += !ok;
                syndromes++;
            }
        }
        c.expect(bad == 0, "MWPM vs brute force: " + std::to_string(bad) + " mismatches");
        c.note("MWPM = brute force on 200 instances (" + std::to_string(syndromes) + " syndromes)");
    }

    // BP-OSD estimates must reproduce their syndromes; checked against the DEM fault lists.
    {
        struct Case {
            std::string name;
            DetectorErrorModel dem;
            size_t shots;
            BpOsdConfig config;
        };
        NoiseModel noise = NoiseModel::uniform(0.003, 0.002);
        auto bb = build_bb_preset("72");
        auto part = bipartition(build_combined_tanner(bb), BipartitionOptions{});
        auto full = extract_dem(build_bb_circuit(bb, 1, noise, nullptr, PauliBasis::Z));
        auto z_only = restrict_dem(full, basis_detectors(full, PauliBasis::Z));
        NoiseModel pnoise = NoiseModel::uniform(0.003, 0.002, 0.05);
        auto pfull = extract_dem(build_bb_circuit(bb, 1, pnoise, &part, PauliBasis::Z));
        auto surface = extract_dem(build_surface_circuit(3, 3, NoiseModel::uniform(0.005, 0.01), true, PauliBasis::Z));
        BpOsdConfig product;
        product.method = BpMethod::kProductSum;
        BpOsdConfig osd4;
        osd4.osd_order = 4;
        std::vector<Case> cases = {
            {"bb72 Z-detectors min-sum", z_only, 400000, {}},
            {"bb72 all detectors min-sum", full, 150000, {}},
            {"bb72 partitioned all detectors osd4", pfull, 100000, osd4},
            {"bb72 Z-detectors product-sum", z_only, 100000, product},
            {"networked surface d=3 min-sum", surface, 250000, {}},
        };
        size_t assertions = 0, invalid = 0, nontrivial = 0;
        for (const auto &cs : cases) {
            auto m = dem_matrices(cs.dem);
            BpOsdDecoder dec(m.check, m.priors, m.logical, cs.config);
            auto sample = dem_sample(cs.dem, cs.shots, 7);
            for (size_t s = 0; s < cs.shots; s++) {
                auto fired = sample.detectors.row_support(s);
                auto syndrome = BitVector::from_support(cs.dem.num_detectors, fired);
                BitVector estimate;
                try {
                    estimate = dec.decode_syndrome(syndrome);
                } catch (const std::exception &) {
                    invalid++;
                    continue;
                }
                BitVector produced(cs.dem.num_detectors);
                for (auto j : estimate.support()) {
                    for (auto d : cs.dem.faults[j].signature.detectors) {
                        produced.flip(d);
                    }
                }
                invalid += produced != syndrome;
                nontrivial += !fired.empty();
                assertions++;
            }
        }
        c.expect(invalid == 0 && assertions >= 1000000,
                 "BP-OSD syndrome validity: " + std::to_string(invalid) + " invalid of " + std::to_string(assertions));
        c.note("BP-OSD valid on " + std::to_string(assertions) + " decodes (" + std::to_string(nontrivial) +
               " non-trivial syndromes)");
    }

    // Pauli-frame and DEM samplers agree in distribution.
    {
        const size_t shots = 1000000;
        auto bb = build_bb_preset("72");
        auto part = bipartition(build_combined_tanner(bb), BipartitionOptions{});
        std::vector<std::pair<std::string, Circuit>> circuits = {
            {"surface d=3 networked", build_surface_circuit(3, 3, NoiseModel::uniform(0.001, 0.002), true, PauliBasis::Z)},
            {"bb72 2 rounds", build_bb_circuit(bb, 2, NoiseModel::uniform(0.001), nullptr, PauliBasis::Z)},
            {"bb72 partitioned 2 rounds",
             build_bb_circuit(bb, 2, NoiseModel::uniform(0.001, 0, 0.0125), &part, PauliBasis::Z)},
        };
        for (size_t k = 0; k < circuits.size(); k++) {
            const auto &[name, circuit] = circuits[k];
            auto dem = extract_dem(circuit);
            auto frame = frame_sample(circuit, shots, 100 + k, 4);
            auto sampled = dem_sample(dem, shots, 200 + k);
            auto cmp = compare_marginals(frame, sampled);
            double n = static_cast<double>(cmp.components);
            double bound = n + 5 * std::sqrt(2 * n);
            c.expect(cmp.chi2 < bound && cmp.max_z < 5.5,
                     name + " marginals chi2 " + fmt(cmp.chi2) + " (bound " + fmt(bound) + "), max |z| " + fmt(cmp.max_z));
            c.note(name + ": " + std::to_string(cmp.components) + " rates, chi2 " + fmt(cmp.chi2) + ", max |z| " +
                   fmt(cmp.max_z));
            if (k == 0) {
                auto dec = MatchingDecoder::for_basis(dem, PauliBasis::Z);
                auto ra = logical_error_rate(decode_batch(dec, frame.detectors), frame.observables);
                auto rb = logical_error_rate(decode_batch(dec, sampled.detectors), sampled.observables);
                c.expect(ra.ci_lo <= rb.ci_hi && rb.ci_lo <= ra.ci_hi,
                         "decoded rates overlap: frame " + fmt(ra.rate) + " dem " + fmt(rb.rate));
                c.note("decoded p_L frame " + fmt(ra.rate) + " vs dem " + fmt(rb.rate));
            }
        }
    }

    // Gadgets against direct tableau execution.
    {
        std::mt19937_64 rng(5);
        oracle::GadgetTally cnot, ghz;
        for (size_t n = 2; n <= 18; n++) {
            auto t = oracle::check_teleported_cnot(n, 60, rng);
            cnot.trials += t.trials;
            cnot.mismatches += t.mismatches;
        }
        for (size_t w = 2; w <= 8; w++) {
            auto t = oracle::check_ghz_measurement(12, w, 150, rng);
            ghz.trials += t.trials;
            ghz.mismatches += t.mismatches;
            ghz.random_cases += t.random_cases;
            ghz.random_ones += t.random_ones;
        }
        double frac = ghz.random_cases ? static_cast<double>(ghz.random_ones) / ghz.random_cases : 0;
        double tol = 5 * std::sqrt(0.25 / std::max<size_t>(ghz.random_cases, 1));
        c.expect(cnot.mismatches == 0, "teleported CNOT mismatches " + std::to_string(cnot.mismatches));
        c.expect(ghz.mismatches == 0, "GHZ gadget mismatches " + std::to_string(ghz.mismatches));
        c.expect(ghz.random_cases > 100 && std::fabs(frac - 0.5) < tol,
                 "GHZ random outcomes: " + fmt(frac) + " ones over " + std::to_string(ghz.random_cases));
        c.note("gadgets: " + std::to_string(cnot.trials) + " CNOT and " + std::to_string(ghz.trials) +
               " GHZ trials agree with the tableau");
    }
    c.note(fmt(seconds_since(t0)) + " s");
    return c.outcome();
}

Outcome bell_budget() {
    Checks c;
    auto code = build_bb_preset("72");
    auto graph = build_combined_tanner(code);
    auto part = bipartition(graph, BipartitionOptions{});
    auto stats = partition_stats(graph, part);
    const size_t rounds = 6;
    auto circuit = build_bb_circuit(code, rounds, NoiseModel::uniform(0.001, 0, 0.0125), &part, PauliBasis::Z);
    uint64_t counted = 0;
    for (const auto &inst : circuit.instructions()) {
        if (inst.op == Op::DEPOLARIZE2 && inst.tag == "bell") {
            counted += inst.targets.size() / 2;
        }
    }
    uint64_t expected = stats.cut_edges_total * rounds;
    c.expect(counted == expected, "Bell pairs " + std::to_string(counted) + " vs E_cut*6 = " + std::to_string(expected));
    c.expect(count_bell_pairs(circuit) == expected, "count_bell_pairs " + std::to_string(count_bell_pairs(circuit)));
    c.note(std::to_string(counted) + " Bell pairs per shot = " + std::to_string(stats.cut_edges_total) + " x 6");
    return c.outcome();
}

struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria = {
        {1, "codes structure", codes_structure},
        {2, "partition quality", partition_quality},
        {3, "noiseless determinism", noiseless_determinism},
        {4, "GHZ-noise threshold", ghz_threshold},
        {5, "networked surface threshold", networked_threshold},
        {6, "partitioned vs monolithic ordering", partitioned_ordering},
        {7, "fit recovery", fit_recovery},
        {8, "fidelity conversion", fidelity_conversion},
        {9, "oracle suites", oracle_suites},
        {10, "Bell budget", bell_budget},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; i++) {
        std::string arg = argv[i];
        if (arg == "all") {
            for (const auto &cr : criteria) {
                selected.insert(cr.id);
            }
        } else {
            selected.insert(std::stoi(arg));
        }
    }
    if (selected.empty()) {
        std::cerr << "usage: netqec_acceptance <criterion 1-10>... | all" << std::endl;
        return 2;
    }
    bool all_pass = true;
    for (const auto &cr : criteria) {
        if (!selected.count(cr.id)) {
            continue;
        }
        Outcome out;
        auto t0 = Clock::now();
        try {
            out = cr.run();
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        all_pass &= out.pass;
        std::cout << "criterion " << cr.id << " (" << cr.name << "): " << (out.pass ? "PASS" : "FAIL") << " ["
                  << fmt(seconds_since(t0)) << " s] " << out.detail << std::endl;
    }
    return all_pass ? 0 : 1;
}
