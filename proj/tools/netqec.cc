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


// Command-line front end: code construction, partitioning, circuit emission, sampling,
// decoding and full experiment sweeps.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "netqec/builders.h"
#include "netqec/codes.h"
#include "netqec/decode.h"
#include "netqec/harness.h"
#include "netqec/partition.h"
#include "netqec/sim.h"

using namespace netqec;

namespace {

struct Common {
    uint64_t seed = 0;
    size_t workers = 4;
    std::string out;
};

void add_common(CLI::App *cmd, Common &common) {
    cmd->add_option("--seed", common.seed, "Random seed");
    cmd->add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", common.out, "Output file (stdout when omitted or '-')");
}

void write_output(const std::string &path, const std::string &text, bool binary = false) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    f << text;
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

CssCode make_code(const std::string &name, int distance) {
    if (name == "surface") {
        return build_surface_code(distance);
    }
    return build_bb_preset(name);
}


}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"netqec: distributed quantum error correction experiments"};
    app.require_subcommand(1);

    // build-code
    Common c_build;
    std::string code_name = "72";
    int distance = 3;
    auto *build = app.add_subcommand("build-code", "Build a CSS code and print its matrices and logicals as JSON");
    build->add_option("--code", code_name, "surface, 72, 90 or 144");
    build->add_option("--distance", distance, "Surface-code distance");
    add_common(build, c_build);

    // partition
    Common c_part;
    std::string part_code = "72";
    BipartitionOptions part_opts;
    size_t part_rounds = 0;
    std::string assignment_out;
    auto *part = app.add_subcommand("partition", "Bipartition the combined Tanner graph of a BB code");
    part->add_option("--code", part_code, "BB preset");
    part->add_option("--tol", part_opts.balance_tol, "Allowed data-qubit imbalance");
    part->add_option("--restarts", part_opts.restarts, "Random restarts");
    part->add_option("--rounds", part_rounds, "Syndrome rounds for the Bell budget (default: code distance)");
    part->add_option("--assignment", assignment_out, "Also write the vertex assignment to this file");
    add_common(part, c_part);

    // emit-circuit
    Common c_emit;
    std::string emit_code = "surface", emit_mode = "monolithic", emit_basis = "Z", ghz_channel = "per_qubit";
    std::string partition_file;
    int emit_distance = 3;
    size_t emit_rounds = 0;
    double emit_p = 0, emit_p_ghz = 0, emit_p_bell = 0, emit_fidelity = -1;
    bool no_overhead = false;
    auto *emit = app.add_subcommand("emit-circuit", "Write a memory-experiment circuit in text form");
    emit->add_option("--code", emit_code, "surface or a BB preset");
    emit->add_option("--distance", emit_distance, "Surface-code distance");
    emit->add_option("--mode", emit_mode, "monolithic, networked or partitioned");
    emit->add_option("--rounds", emit_rounds, "Syndrome rounds (default: code distance)");
    emit->add_option("--basis", emit_basis, "Memory basis X or Z");
    emit->add_option("--p", emit_p, "Local circuit-level error rate");
    emit->add_option("--p-ghz", emit_p_ghz, "GHZ error rate");
    auto *pb_opt = emit->add_option("--p-bell", emit_p_bell, "Bell-pair error rate");
    emit->add_option("--bell-fidelity", emit_fidelity, "Bell-pair fidelity (sets --p-bell)")->excludes(pb_opt);
    emit->add_option("--ghz-channel", ghz_channel, "per_qubit or uniform");
    emit->add_flag("--no-bridge-overhead", no_overhead, "Teleported CNOTs carry only the local CNOT noise");
    emit->add_option("--partition", partition_file, "Assignment file from `partition --assignment`");
    add_common(emit, c_emit);

    // sample
    Common c_sample;
    std::string sample_circuit, sampler = "frame", sample_format = "binary";
    size_t shots = 1000;
    auto *sample = app.add_subcommand("sample", "Sample detector events and observable flips");
    sample->add_option("--circuit", sample_circuit, "Circuit text file")->required();
    sample->add_option("--shots", shots, "Number of shots");
    sample->add_option("--sampler", sampler, "frame or dem");
    sample->add_option("--format", sample_format, "binary or csv");
    add_common(sample, c_sample);

    // decode
    Common c_decode;
    std::string decode_circuit, decode_samples, decoder_type = "auto", decode_basis = "Z", bp_method = "min_sum";
    BpOsdConfig bp;
    auto *decode = app.add_subcommand("decode", "Decode sampled detector events and report the logical error rate");
    decode->add_option("--circuit", decode_circuit, "Circuit text file")->required();
    decode->add_option("--samples", decode_samples, "Binary sample file")->required();
    decode->add_option("--decoder", decoder_type, "auto, mwpm or bposd");
    decode->add_option("--basis", decode_basis, "Memory basis X or Z");
    decode->add_option("--bp-method", bp_method, "min_sum or product_sum");
    decode->add_option("--max-iterations", bp.max_iterations, "BP iterations");
    decode->add_option("--osd-order", bp.osd_order, "OSD order");
    add_common(decode, c_decode);

    // run
    Common c_run;
    std::string config_path;
    auto *run = app.add_subcommand("run", "Run a full sweep from a JSON config and write the points CSV");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    add_common(run, c_run);

    // fit
    Common c_fit;
    std::string fit_in;
    int fit_alpha = 0;
    auto *fit = app.add_subcommand("fit", "Fit the logical-error ansatz to every curve of a points CSV");
    fit->add_option("--in", fit_in, "Points CSV")->required();
    fit->add_option("--alpha", fit_alpha, "Exponent (default: per code)");
    add_common(fit, c_fit);

    // report
    Common c_report;
    std::string report_in;
    auto *report = app.add_subcommand("report", "Emit plot data with intervals and the uncoded reference line");
    report->add_option("--in", report_in, "Points CSV")->required();
    add_common(report, c_report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            auto code = make_code(code_name, distance);
            nlohmann::ordered_json j;
            j["name"] = code.name.empty() ? code_name : code.name;
            j["n"] = code.n;
            j["k"] = code.k;
            j["distance"] = code.distance ? nlohmann::ordered_json(*code.distance) : nlohmann::ordered_json(nullptr);
            j["hx"] = code.hx.to_coordinate_text();
            j["hz"] = code.hz.to_coordinate_text();
            auto logicals = nlohmann::ordered_json::array();
            for (const auto &l : code.logicals) {
                logicals.push_back({{"x", l.x_support}, {"z", l.z_support}});
            }
            j["logicals"] = logicals;
            write_output(c_build.out, j.dump(2) + "\n");
        } else if (*part) {
            auto code = build_bb_preset(part_code);
            auto graph = build_combined_tanner(code);
            part_opts.seed = c_part.seed;
            auto p = bipartition(graph, part_opts);
            size_t rounds = part_rounds ? part_rounds : bb_preset_distance(part_code).value_or(1);
            write_output(c_part.out, partition_stats(graph, p).to_json(rounds) + "\n");
            if (!assignment_out.empty()) {
                write_output(assignment_out, export_partition(graph, p));
            }
        } else if (*emit) {
            ExperimentMode mode = parse_mode(emit_mode);
            PauliBasis basis = parse_basis(emit_basis);
            NoiseModel noise = NoiseModel::uniform(emit_p, emit_p_ghz,
                                                   emit_fidelity >= 0 ? bell_fidelity_to_p(emit_fidelity) : emit_p_bell);
            noise.bridge_overhead = !no_overhead;
            if (ghz_channel == "uniform") {
                noise.ghz_channel = GhzChannel::kUniform;
            } else if (ghz_channel != "per_qubit") {
                throw std::invalid_argument("--ghz-channel must be per_qubit or uniform");
            }
            Circuit circuit;
            if (emit_code == "surface") {
                if (mode == ExperimentMode::kPartitioned) {
                    throw std::invalid_argument("partitioned mode needs a BB code");
                }
                size_t rounds = emit_rounds ? emit_rounds : static_cast<size_t>(emit_distance);
                circuit = build_surface_circuit(emit_distance, rounds, noise, mode == ExperimentMode::kNetworked, basis);
            } else {
                if (mode == ExperimentMode::kNetworked) {
                    throw std::invalid_argument("networked mode needs the surface code");
                }
                auto code = build_bb_preset(emit_code);
                size_t rounds = emit_rounds ? emit_rounds : bb_preset_distance(emit_code).value_or(1);
                std::optional<Partition> p;
                if (mode == ExperimentMode::kPartitioned) {
                    auto graph = build_combined_tanner(code);
                    if (!partition_file.empty()) {
                        p = import_partition(graph, read_file(partition_file));
                    } else {
                        BipartitionOptions opts;
                        opts.seed = c_emit.seed;
                        p = bipartition(graph, opts);
                    }
                }
                circuit = build_bb_circuit(code, rounds, noise, p ? &*p : nullptr, basis);
            }
            write_output(c_emit.out, circuit.str());
        } else if (*sample) {
            auto circuit = Circuit::from_text(read_file(sample_circuit));
            FrameSample s;
            if (sampler == "frame") {
                s = frame_sample(circuit, shots, c_sample.seed, c_sample.workers);
            } else if (sampler == "dem") {
                s = dem_sample(extract_dem(circuit), shots, c_sample.seed);
            } else {
                throw std::invalid_argument("--sampler must be frame or dem");
            }
            if (sample_format == "csv") {
                write_output(c_sample.out, sample_to_csv(s));
            } else if (sample_format == "binary") {
                std::ostringstream buf;
                write_sample(buf, s);
                write_output(c_sample.out, buf.str(), true);
            } else {
                throw std::invalid_argument("--format must be binary or csv");
            }
        } else if (*decode) {
            auto circuit = Circuit::from_text(read_file(decode_circuit));
            std::istringstream in(read_file(decode_samples));
            auto s = read_sample(in);
            if (s.detectors.cols() != circuit.num_detectors() || s.observables.cols() != circuit.num_observables()) {
                throw std::invalid_argument("sample file does not match the circuit's detector/observable counts");
            }
            auto dem = extract_dem(circuit);
            PauliBasis basis = parse_basis(decode_basis);
            auto keep = basis_detectors(dem, basis);
            auto restricted = restrict_dem(dem, keep);
            bool matchable = true;
            for (const auto &f : restricted.faults) {
                matchable = matchable && f.signature.detectors.size() <= 2;
            }
            if (decoder_type == "auto") {
                decoder_type = matchable ? "mwpm" : "bposd";
            }
            if (bp_method == "product_sum") {
                bp.method = BpMethod::kProductSum;
            } else if (bp_method != "min_sum") {
                throw std::invalid_argument("--bp-method must be min_sum or product_sum");
            }
            std::vector<uint64_t> predictions;
            if (decoder_type == "mwpm") {
                auto dec = MatchingDecoder::for_basis(dem, basis);
                predictions = decode_batch(dec, s.detectors);
            } else if (decoder_type == "bposd") {
                auto mats = dem_matrices(restricted);
                BpOsdDecoder dec(mats.check, mats.priors, mats.logical, bp);
                for (size_t r = 0; r < s.shots(); r++) {
                    predictions.push_back(dec.decode(restrict_fired(s.detectors.row_support(r), keep)));
                }
            } else {
                throw std::invalid_argument("--decoder must be auto, mwpm or bposd");
            }
            auto rate = logical_error_rate(predictions, s.observables);
            nlohmann::ordered_json j = {{"decoder", decoder_type}, {"shots", rate.shots}, {"failures", rate.failures},
                                        {"p_l", rate.rate},       {"ci_lo", rate.ci_lo}, {"ci_hi", rate.ci_hi}};
            FrameSample pred;
            pred.detectors = BitTable(s.shots(), 0);
            pred.observables = BitTable(s.shots(), s.observables.cols());
            for (size_t r = 0; r < s.shots(); r++) {
                for (size_t o = 0; o < s.observables.cols(); o++) {
                    pred.observables.set(r, o, (predictions[r] >> o) & 1);
                }
            }
            if (!c_decode.out.empty()) {
                std::ostringstream buf;
                write_sample(buf, pred);
                write_output(c_decode.out, buf.str(), true);
                std::cerr << j.dump() << "\n";
            } else {
                std::cout << j.dump(2) << "\n";
            }
        } else if (*run) {
            auto config = ExperimentConfig::from_json(read_file(config_path));
            if (run->count("--seed")) {
                config.seed = c_run.seed;
            }
            if (run->count("--workers")) {
                config.workers = c_run.workers;
            }
            auto points = run_experiment(config, [](const ExperimentPoint &pt) {
                std::cerr << pt.code << " " << pt.mode << " p=" << pt.p << " p_ghz=" << pt.p_ghz
                          << " p_bell=" << pt.p_bell << " shots=" << pt.shots << " failures=" << pt.failures
                          << " p_L=" << pt.p_l << " (" << pt.wall_seconds << " s)";
                if (!pt.error.empty()) {
                    std::cerr << " error: " << pt.error;
                }
                std::cerr << "\n";
            });
            std::ostringstream csv;
            write_points_csv(csv, points);
            write_output(c_run.out, csv.str());
            if (!c_run.out.empty() && c_run.out != "-") {
                write_output(c_run.out + ".meta.json", run_metadata_json(config, points));
            }
            for (const auto &pt : points) {
                if (!pt.error.empty()) {
                    return 2;
                }
            }
        } else if (*fit) {
            std::istringstream in(read_file(fit_in));
            auto points = read_points_csv(in);
            write_output(c_fit.out, fit_curves_json(points, fit_alpha > 0 ? std::optional<int>(fit_alpha) : std::nullopt));
        } else if (*report) {
            std::istringstream in(read_file(report_in));
            write_output(c_report.out, report_csv(read_points_csv(in)));
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
