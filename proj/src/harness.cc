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

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include "json.hpp"
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "netqec/rng.h"

namespace netqec {

using nlohmann::json;

const char *mode_name(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::kMonolithic:
            return "monolithic";
        case ExperimentMode::kNetworked:
            return "networked";
        case ExperimentMode::kPartitioned:
            return "partitioned";
    }
    return "?";
}

ExperimentMode parse_mode(std::string_view text) {
    for (auto m : {ExperimentMode::kMonolithic, ExperimentMode::kNetworked, ExperimentMode::kPartitioned}) {
        if (text == mode_name(m)) {
            return m;
        }
    }
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected monolithic, networked or partitioned)");
}

namespace {

bool is_surface(const std::string &code) {
    return code == "surface";
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

[[noreturn]] void field_error(const std::string &field, const std::string &what) {
    throw std::invalid_argument("config field '" + field + "': " + what);
}

template <typename T>
T read_field(const json &j, const std::string &field) {
    try {
        return j.get<T>();
    } catch (const json::exception &) {
        field_error(field, "has the wrong type (got " + std::string(j.type_name()) + ")");
    }
}

std::vector<double> read_number_list(const json &j, const std::string &field) {
    if (j.is_number()) {
        return {j.get<double>()};
    }
    return read_field<std::vector<double>>(j, field);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (is_surface(code)) {
        if (distances.empty()) {
            field_error("distances", "must list at least one surface-code distance");
        }
        for (int d : distances) {
            if (d < 2 || d % 2 == 0) {
                field_error("distances", "surface-code distance must be odd and at least 3, got " + std::to_string(d));
            }
        }
    } else {
        try {
            bb_preset(code);
        } catch (const std::invalid_argument &e) {
            field_error("code", e.what());
        }
    }
    if (modes.empty()) {
        field_error("modes", "must list at least one mode");
    }
    for (auto m : modes) {
        if (m == ExperimentMode::kNetworked && !is_surface(code)) {
            field_error("modes", "networked mode needs the surface code");
        }
        if (m == ExperimentMode::kPartitioned && is_surface(code)) {
            field_error("modes", "partitioned mode needs a BB code");
        }
    }
    if (values.empty()) {
        field_error("values", "must list at least one sweep value");
    }
    for (double v : values) {
        if (!(v >= 0 && v < 0.5)) {
            field_error("values", "sweep value " + format_double(v) + " is outside [0, 0.5)");
        }
    }
    if (!(p >= 0 && p < 0.5)) {
        field_error("p", "must lie in [0, 0.5)");
    }
    if (!(p_ghz >= 0 && p_ghz <= 1)) {
        field_error("p_ghz", "must lie in [0, 1]");
    }
    for (double pb : p_bells) {
        if (!(pb >= 0 && pb <= 1)) {
            field_error("p_bell", "value " + format_double(pb) + " is outside [0, 1]");
        }
    }
    if (std::find(modes.begin(), modes.end(), ExperimentMode::kPartitioned) != modes.end() && p_bells.empty()) {
        field_error("p_bell", "partitioned mode needs at least one Bell error rate");
    }
    if (rounds && *rounds < 1) {
        field_error("rounds", "must be at least 1");
    }
    if (max_shots < 1) {
        field_error("max_shots", "must be at least 1");
    }
    if (max_failures < 1) {
        field_error("max_failures", "must be at least 1");
    }
    if (batch_size < 1) {
        field_error("batch_size", "must be at least 1");
    }
    if (workers < 1) {
        field_error("workers", "must be at least 1");
    }
    if (decoder.bposd.max_iterations < 1) {
        field_error("decoder.max_iterations", "must be at least 1");
    }
    if (decoder.bposd.osd_order > 20) {
        field_error("decoder.osd_order", "must be at most 20");
    }
    if (decoder.kind == DecoderKind::kMatching && !is_surface(code)) {
        field_error("decoder.type", "matching is only supported for surface codes");
    }
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    static const std::set<std::string> known = {
        "name",    "code",    "distances",      "modes",       "sweep",        "values",    "p",
        "p_ghz",   "p_bell",  "bell_fidelity",  "rounds",      "basis",        "max_shots", "max_failures",
        "seed",    "sampler", "decoder",        "workers",     "bridge_overhead", "ghz_channel", "partition",
        "batch_size"};
    for (const auto &[key, value] : j.items()) {
        if (!known.count(key)) {
            field_error(key, "unknown field");
        }
    }
    ExperimentConfig c;
    if (j.contains("name")) {
        c.name = read_field<std::string>(j["name"], "name");
    }
    if (j.contains("code")) {
        c.code = read_field<std::string>(j["code"], "code");
    }
    if (j.contains("distances")) {
        c.distances = j["distances"].is_number() ? std::vector<int>{read_field<int>(j["distances"], "distances")}
                                                 : read_field<std::vector<int>>(j["distances"], "distances");
    }
    if (j.contains("modes")) {
        c.modes.clear();
        auto names = j["modes"].is_string() ? std::vector<std::string>{j["modes"].get<std::string>()}
                                            : read_field<std::vector<std::string>>(j["modes"], "modes");
        for (const auto &m : names) {
            try {
                c.modes.push_back(parse_mode(m));
            } catch (const std::invalid_argument &e) {
                field_error("modes", e.what());
            }
        }
    } else if (!is_surface(c.code)) {
        c.modes = {ExperimentMode::kMonolithic};
    }
    if (j.contains("sweep")) {
        auto s = read_field<std::string>(j["sweep"], "sweep");
        if (s == "p") {
            c.sweep = SweepParameter::kP;
        } else if (s == "p_ghz") {
            c.sweep = SweepParameter::kPGhz;
        } else {
            field_error("sweep", "expected \"p\" or \"p_ghz\", got \"" + s + "\"");
        }
    }
    if (j.contains("values")) {
        c.values = read_number_list(j["values"], "values");
    }
    if (j.contains("p")) {
        c.p = read_field<double>(j["p"], "p");
    }
    if (j.contains("p_ghz")) {
        c.p_ghz = read_field<double>(j["p_ghz"], "p_ghz");
    }
    if (j.contains("p_bell") && j.contains("bell_fidelity")) {
        field_error("bell_fidelity", "give either p_bell or bell_fidelity, not both");
    }
    if (j.contains("p_bell")) {
        c.p_bells = read_number_list(j["p_bell"], "p_bell");
    }
    if (j.contains("bell_fidelity")) {
        c.p_bells.clear();
        for (double f : read_number_list(j["bell_fidelity"], "bell_fidelity")) {
            try {
                c.p_bells.push_back(bell_fidelity_to_p(f));
            } catch (const std::invalid_argument &e) {
                field_error("bell_fidelity", e.what());
            }
        }
    }
    if (j.contains("rounds") && !j["rounds"].is_null()) {
        c.rounds = read_field<size_t>(j["rounds"], "rounds");
    }
    if (j.contains("basis")) {
        try {
            c.basis = parse_basis(read_field<std::string>(j["basis"], "basis"));
        } catch (const std::invalid_argument &e) {
            field_error("basis", e.what());
        }
    }
    if (j.contains("max_shots")) {
        c.max_shots = read_field<uint64_t>(j["max_shots"], "max_shots");
    }
    if (j.contains("max_failures")) {
        c.max_failures = read_field<uint64_t>(j["max_failures"], "max_failures");
    }
    if (j.contains("seed")) {
        c.seed = read_field<uint64_t>(j["seed"], "seed");
    }
    if (j.contains("batch_size")) {
        c.batch_size = read_field<uint64_t>(j["batch_size"], "batch_size");
    }
    if (j.contains("workers")) {
        c.workers = read_field<size_t>(j["workers"], "workers");
    }
    if (j.contains("sampler")) {
        auto s = read_field<std::string>(j["sampler"], "sampler");
        if (s == "dem") {
            c.sampler = SamplerKind::kDem;
        } else if (s == "frame") {
            c.sampler = SamplerKind::kFrame;
        } else {
            field_error("sampler", "expected \"dem\" or \"frame\", got \"" + s + "\"");
        }
    }
    if (j.contains("bridge_overhead")) {
        c.bridge_overhead = read_field<bool>(j["bridge_overhead"], "bridge_overhead");
    }
    if (j.contains("ghz_channel")) {
        auto s = read_field<std::string>(j["ghz_channel"], "ghz_channel");
        if (s == "per_qubit") {
            c.ghz_channel = GhzChannel::kPerQubit;
        } else if (s == "uniform") {
            c.ghz_channel = GhzChannel::kUniform;
        } else {
            field_error("ghz_channel", "expected \"per_qubit\" or \"uniform\", got \"" + s + "\"");
        }
    }
    if (j.contains("decoder")) {
        const auto &d = j["decoder"];
        if (!d.is_object()) {
            field_error("decoder", "must be an object");
        }
        for (const auto &[key, value] : d.items()) {
            static const std::set<std::string> dk = {"type", "bp_method", "max_iterations", "scaling", "osd_order", "detectors"};
            if (!dk.count(key)) {
                field_error("decoder." + key, "unknown field");
            }
        }
        if (d.contains("type")) {
            auto s = read_field<std::string>(d["type"], "decoder.type");
            if (s == "auto") {
                c.decoder.kind = DecoderKind::kAuto;
            } else if (s == "mwpm" || s == "matching") {
                c.decoder.kind = DecoderKind::kMatching;
            } else if (s == "bposd") {
                c.decoder.kind = DecoderKind::kBpOsd;
            } else {
                field_error("decoder.type", "expected auto, mwpm or bposd, got \"" + s + "\"");
            }
        }
        if (d.contains("bp_method")) {
            auto s = read_field<std::string>(d["bp_method"], "decoder.bp_method");
            if (s == "min_sum") {
                c.decoder.bposd.method = BpMethod::kMinSum;
            } else if (s == "product_sum") {
                c.decoder.bposd.method = BpMethod::kProductSum;
            } else {
                field_error("decoder.bp_method", "expected min_sum or product_sum, got \"" + s + "\"");
            }
        }
        if (d.contains("max_iterations")) {
            c.decoder.bposd.max_iterations = read_field<size_t>(d["max_iterations"], "decoder.max_iterations");
        }
        if (d.contains("scaling")) {
            c.decoder.bposd.scaling = read_field<double>(d["scaling"], "decoder.scaling");
        }
        if (d.contains("osd_order")) {
            c.decoder.bposd.osd_order = read_field<size_t>(d["osd_order"], "decoder.osd_order");
        }
        if (d.contains("detectors")) {
            auto s = read_field<std::string>(d["detectors"], "decoder.detectors");
            if (s == "basis") {
                c.decoder.basis_detectors_only = true;
            } else if (s == "all") {
                c.decoder.basis_detectors_only = false;
            } else {
                field_error("decoder.detectors", "expected basis or all, got \"" + s + "\"");
            }
        }
    }
    if (j.contains("partition")) {
        const auto &pj = j["partition"];
        if (!pj.is_object()) {
            field_error("partition", "must be an object");
        }
        for (const auto &[key, value] : pj.items()) {
            if (key == "tol") {
                c.partition.balance_tol = read_field<size_t>(value, "partition.tol");
            } else if (key == "restarts") {
                c.partition.restarts = read_field<size_t>(value, "partition.restarts");
            } else if (key == "seed") {
                c.partition.seed = read_field<uint64_t>(value, "partition.seed");
            } else {
                field_error("partition." + key, "unknown field");
            }
        }
    }
    c.validate();
    return c;
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["name"] = name;
    j["code"] = code;
    if (is_surface(code)) {
        j["distances"] = distances;
    }
    std::vector<std::string> mode_names;
    for (auto m : modes) {
        mode_names.emplace_back(mode_name(m));
    }
    j["modes"] = mode_names;
    j["sweep"] = sweep == SweepParameter::kP ? "p" : "p_ghz";
    j["values"] = values;
    j["p"] = p;
    j["p_ghz"] = p_ghz;
    j["p_bell"] = p_bells;
    j["rounds"] = rounds ? json(*rounds) : json(nullptr);
    j["basis"] = std::string(1, basis_name(basis));
    j["max_shots"] = max_shots;
    j["max_failures"] = max_failures;
    j["seed"] = seed;
    j["batch_size"] = batch_size;
    j["workers"] = workers;
    j["sampler"] = sampler == SamplerKind::kDem ? "dem" : "frame";
    j["bridge_overhead"] = bridge_overhead;
    j["ghz_channel"] = ghz_channel == GhzChannel::kPerQubit ? "per_qubit" : "uniform";
    const char *kind = decoder.kind == DecoderKind::kAuto ? "auto" : decoder.kind == DecoderKind::kMatching ? "mwpm" : "bposd";
    j["decoder"] = {
        {"type", kind},
        {"bp_method", decoder.bposd.method == BpMethod::kMinSum ? "min_sum" : "product_sum"},
        {"max_iterations", decoder.bposd.max_iterations},
        {"scaling", decoder.bposd.scaling},
        {"osd_order", decoder.bposd.osd_order},
        {"detectors", decoder.basis_detectors_only ? "basis" : "all"},
    };
    j["partition"] = {{"tol", partition.balance_tol}, {"restarts", partition.restarts}, {"seed", partition.seed}};
    return j.dump(2);
}

uint64_t count_bell_pairs(const Circuit &circuit) {
    uint64_t pairs = 0;
    for (const auto &inst : circuit.instructions()) {
        if (inst.op == Op::DEPOLARIZE2 && inst.tag == "bell") {
            pairs += inst.targets.size() / 2;
        }
    }
    return pairs;
}

namespace {

struct PointSpec {
    int distance;
    size_t rounds;
    ExperimentMode mode;
    double p;
    double p_ghz;
    double p_bell;
};

// Decoder for one worker. Matching decoders are shared read-only; BP-OSD keeps per-worker state.
struct WorkerDecoder {
    const MatchingDecoder *matching = nullptr;
    std::unique_ptr<BpOsdDecoder> bposd;

    uint64_t decode(std::span<const uint32_t> fired) {
        return matching ? matching->decode_detailed(fired).observables : bposd->decode(fired);
    }
};

uint64_t observable_word(const BitTable &obs, size_t row) {
    return obs.cols() == 0 ? 0 : obs.row(row)[0];
}

void run_point(const ExperimentConfig &config, const Circuit &circuit, uint64_t point_seed, ExperimentPoint &out) {
    DetectorErrorModel dem = extract_dem(circuit);
    if (dem.num_observables > 64) {
        throw std::invalid_argument("more than 64 observables are not supported");
    }
    bool use_matching = config.decoder.kind == DecoderKind::kMatching ||
                        (config.decoder.kind == DecoderKind::kAuto && is_surface(config.code));
    if (dem.faults.empty() && config.sampler == SamplerKind::kDem) {
        // Nothing can fire: every batch is empty.
        out.shots = config.max_shots;
        out.failures = 0;
        return;
    }

    std::optional<MatchingDecoder> matching;
    std::vector<bool> keep;
    DemMatrices mats;
    if (use_matching) {
        matching.emplace(MatchingDecoder::for_basis(dem, config.basis));
    } else {
        if (config.decoder.basis_detectors_only) {
            keep = basis_detectors(dem, config.basis);
            mats = dem_matrices(restrict_dem(dem, keep));
        } else {
            mats = dem_matrices(dem);
        }
    }
    size_t workers = config.workers;
    std::vector<WorkerDecoder> decoders(workers);
    for (auto &w : decoders) {
        if (use_matching) {
            w.matching = &*matching;
        } else {
            w.bposd = std::make_unique<BpOsdDecoder>(mats.check, mats.priors, mats.logical, config.decoder.bposd);
        }
    }

    auto run_batch = [&](WorkerDecoder &dec, uint64_t batch, uint64_t size) {
        uint64_t seed = mix_keys({point_seed, batch});
        FrameSample s = config.sampler == SamplerKind::kDem ? dem_sample(dem, size, seed) : frame_sample(circuit, size, seed, 1);
        uint64_t failures = 0;
        for (size_t r = 0; r < size; r++) {
            auto fired = s.detectors.row_support(r);
            uint64_t pred = keep.empty() ? dec.decode(fired) : dec.decode(restrict_fired(fired, keep));
            failures += pred != observable_word(s.observables, r);
        }
        return failures;
    };

    uint64_t shots = 0, failures = 0, next_batch = 0;
    while (true) {
        std::vector<uint64_t> sizes;
        uint64_t planned = shots;
        while (sizes.size() < workers && planned < config.max_shots) {
            uint64_t size = std::min(config.batch_size, config.max_shots - planned);
            sizes.push_back(size);
            planned += size;
        }
        std::vector<uint64_t> results(sizes.size());
        if (sizes.size() == 1) {
            results[0] = run_batch(decoders[0], next_batch, sizes[0]);
        } else {
            std::vector<std::thread> threads;
            for (size_t i = 0; i < sizes.size(); i++) {
                threads.emplace_back([&, i] { results[i] = run_batch(decoders[i], next_batch + i, sizes[i]); });
            }
            for (auto &t : threads) {
                t.join();
            }
        }
        bool stop = false;
        for (size_t i = 0; i < sizes.size() && !stop; i++) {
            shots += sizes[i];
            failures += results[i];
            stop = failures >= config.max_failures || shots >= config.max_shots;
        }
        next_batch += sizes.size();
        if (stop) {
            break;
        }
    }
    out.shots = shots;
    out.failures = failures;
}

}  // namespace

std::vector<ExperimentPoint> run_experiment(const ExperimentConfig &config,
                                            const std::function<void(const ExperimentPoint &)> &on_point) {
    config.validate();
    std::optional<CssCode> bb;
    std::optional<Partition> partition;
    std::vector<int> distances = config.distances;
    if (!is_surface(config.code)) {
        bb = build_bb_preset(config.code);
        distances = {static_cast<int>(bb_preset_distance(config.code).value_or(0))};
    }

    std::vector<ExperimentPoint> points;
    uint64_t index = 0;
    for (int d : distances) {
        for (auto mode : config.modes) {
            std::vector<double> bells = mode == ExperimentMode::kPartitioned ? config.p_bells : std::vector<double>{0.0};
            for (double pb : bells) {
                for (double v : config.values) {
                    PointSpec spec;
                    spec.distance = d;
                    spec.rounds = config.rounds.value_or(static_cast<size_t>(std::max(d, 1)));
                    spec.mode = mode;
                    spec.p = config.sweep == SweepParameter::kP ? v : config.p;
                    spec.p_ghz = config.sweep == SweepParameter::kPGhz ? v : config.p_ghz;
                    spec.p_bell = pb;

                    ExperimentPoint pt;
                    pt.code = is_surface(config.code) ? "surface_d" + std::to_string(d) : bb->name;
                    pt.mode = mode_name(mode);
                    pt.distance = d;
                    pt.rounds = spec.rounds;
                    pt.p = spec.p;
                    pt.p_bell = spec.p_bell;
                    pt.p_ghz = spec.p_ghz;
                    pt.seed = config.seed;
                    uint64_t point_seed = mix_keys({config.seed, index++});
                    auto t0 = std::chrono::steady_clock::now();
                    try {
                        NoiseModel noise = NoiseModel::uniform(spec.p, spec.p_ghz, spec.p_bell);
                        noise.bridge_overhead = config.bridge_overhead;
                        noise.ghz_channel = config.ghz_channel;
                        Circuit circuit;
                        if (bb) {
                            if (mode == ExperimentMode::kPartitioned && !partition) {
                                partition = bipartition(build_combined_tanner(*bb), config.partition);
                            }
                            circuit = build_bb_circuit(*bb, spec.rounds, noise,
                                                       mode == ExperimentMode::kPartitioned ? &*partition : nullptr,
                                                       config.basis);
                        } else {
                            circuit = build_surface_circuit(d, spec.rounds, noise, mode == ExperimentMode::kNetworked,
                                                            config.basis);
                        }
                        pt.bell_per_shot = count_bell_pairs(circuit);
                        run_point(config, circuit, point_seed, pt);
                        auto rate = pt.shots ? double(pt.failures) / double(pt.shots) : 0.0;
                        pt.p_l = rate;
                        std::tie(pt.ci_lo, pt.ci_hi) = wilson_interval(pt.failures, pt.shots);
                    } catch (const std::exception &e) {
                        pt.error = e.what();
                    }
                    pt.wall_seconds =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    if (on_point) {
                        on_point(pt);
                    }
                    points.push_back(std::move(pt));
                }
            }
        }
    }
    return points;
}

void write_points_csv(std::ostream &out, const std::vector<ExperimentPoint> &points) {
    out << "code,mode,p,p_bell,p_ghz,shots,failures,p_l,ci_lo,ci_hi,bell_per_shot,seed\n";
    for (const auto &pt : points) {
        if (!pt.error.empty()) {
            continue;
        }
        out << pt.code << ',' << pt.mode << ',' << format_double(pt.p) << ',' << format_double(pt.p_bell) << ','
            << format_double(pt.p_ghz) << ',' << pt.shots << ',' << pt.failures << ',' << format_double(pt.p_l) << ','
            << format_double(pt.ci_lo) << ',' << format_double(pt.ci_hi) << ',' << pt.bell_per_shot << ',' << pt.seed
            << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string &s, size_t row, const std::string &column) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("row " + std::to_string(row) + ": column " + column + " is not a number: '" + s + "'");
    }
    return v;
}

uint64_t parse_uint(const std::string &s, size_t row, const std::string &column) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("row " + std::to_string(row) + ": column " + column +
                                    " is not a non-negative integer: '" + s + "'");
    }
    return v;
}

int distance_from_code(const std::string &code) {
    auto pos = code.find("_d");
    if (code.rfind("surface", 0) == 0 && pos != std::string::npos) {
        return std::atoi(code.c_str() + pos + 2);
    }
    auto d = bb_preset_distance(code);
    return d ? static_cast<int>(*d) : 0;
}

}  // namespace

std::vector<ExperimentPoint> read_points_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("points CSV is empty");
    }
    auto header = split_csv_line(line);
    std::map<std::string, size_t> col;
    for (size_t i = 0; i < header.size(); i++) {
        col[header[i]] = i;
    }
    for (const char *name : {"code", "mode", "p", "p_bell", "p_ghz", "shots", "failures", "p_l", "ci_lo", "ci_hi",
                             "bell_per_shot", "seed"}) {
        if (!col.count(name)) {
            throw std::invalid_argument(std::string("points CSV is missing column ") + name);
        }
    }
    std::vector<ExperimentPoint> points;
    size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        row++;
        auto f = split_csv_line(line);
        if (f.size() != header.size()) {
            throw std::invalid_argument("row " + std::to_string(row) + " has " + std::to_string(f.size()) +
                                        " fields, expected " + std::to_string(header.size()));
        }
        ExperimentPoint pt;
        pt.code = f[col["code"]];
        pt.mode = f[col["mode"]];
        pt.distance = distance_from_code(pt.code);
        pt.p = parse_double(f[col["p"]], row, "p");
        pt.p_bell = parse_double(f[col["p_bell"]], row, "p_bell");
        pt.p_ghz = parse_double(f[col["p_ghz"]], row, "p_ghz");
        pt.shots = parse_uint(f[col["shots"]], row, "shots");
        pt.failures = parse_uint(f[col["failures"]], row, "failures");
        pt.p_l = parse_double(f[col["p_l"]], row, "p_l");
        pt.ci_lo = parse_double(f[col["ci_lo"]], row, "ci_lo");
        pt.ci_hi = parse_double(f[col["ci_hi"]], row, "ci_hi");
        pt.bell_per_shot = parse_uint(f[col["bell_per_shot"]], row, "bell_per_shot");
        pt.seed = parse_uint(f[col["seed"]], row, "seed");
        if (pt.failures > pt.shots) {
            throw std::invalid_argument("row " + std::to_string(row) + ": failures exceed shots");
        }
        points.push_back(std::move(pt));
    }
    return points;
}

std::string run_metadata_json(const ExperimentConfig &config, const std::vector<ExperimentPoint> &points) {
    json j;
    j["tool"] = "netqec";
    j["config"] = json::parse(config.to_json());
    json rows = json::array();
    for (const auto &pt : points) {
        json r = {{"code", pt.code},   {"mode", pt.mode},     {"distance", pt.distance},
                  {"rounds", pt.rounds}, {"p", pt.p},         {"p_bell", pt.p_bell},
                  {"p_ghz", pt.p_ghz},   {"shots", pt.shots}, {"failures", pt.failures}};
        if (!pt.error.empty()) {
            r["error"] = pt.error;
        }
        rows.push_back(r);
    }
    j["points"] = rows;
    return j.dump(2) + "\n";
}

double FitResult::evaluate(double p) const {
    return std::pow(p, alpha) * std::exp(c0 + c1 * p + c2 * p * p);
}

FitResult fit_ansatz(const std::vector<std::pair<double, double>> &points, int alpha) {
    if (alpha < 1) {
        throw std::invalid_argument("alpha must be at least 1");
    }
    if (points.size() < 2) {
        throw std::invalid_argument("the fit needs at least two points, got " + std::to_string(points.size()));
    }
    for (size_t i = 0; i < points.size(); i++) {
        auto [p, pl] = points[i];
        if (!(p > 0)) {
            throw std::invalid_argument("point " + std::to_string(i) + ": p must be positive");
        }
        if (!(pl > 0)) {
            throw std::invalid_argument("point " + std::to_string(i) + " (p=" + format_double(p) +
                                        "): p_L must be positive, got " + format_double(pl));
        }
    }
    size_t n = points.size();
    int terms = n == 2 ? 2 : 3;
    // Columns 1, p/s, (p/s)^2 keep the system well conditioned.
    double s = 0;
    for (auto [p, pl] : points) {
        s = std::max(s, p);
    }
    Eigen::MatrixXd a(n, terms);
    Eigen::VectorXd y(n);
    for (size_t i = 0; i < n; i++) {
        double x = points[i].first / s;
        a(i, 0) = 1;
        a(i, 1) = x;
        if (terms == 3) {
            a(i, 2) = x * x;
        }
        y(i) = std::log(points[i].second) - alpha * std::log(points[i].first);
    }
    Eigen::VectorXd b = a.colPivHouseholderQr().solve(y);
    FitResult r;
    r.alpha = alpha;
    r.n_pts = n;
    r.c0 = b(0);
    r.c1 = b(1) / s;
    r.c2 = terms == 3 ? b(2) / (s * s) : 0.0;
    Eigen::VectorXd res = a * b - y;
    r.residual = std::sqrt(res.squaredNorm() / static_cast<double>(n));
    return r;
}

int ansatz_alpha(std::string_view code) {
    std::string c(code);
    if (c.rfind("surface", 0) == 0) {
        int d = distance_from_code(c);
        if (d < 1) {
            throw std::invalid_argument("cannot read a distance from code name '" + c + "'");
        }
        return (d + 1) / 2;
    }
    auto d = bb_preset_distance(c);
    if (!d) {
        throw std::invalid_argument("no ansatz exponent known for code '" + c + "'");
    }
    // Exponents for the BB presets by distance.
    switch (*d) {
        case 6:
            return 3;
        case 10:
            return 4;
        case 12:
            return 5;
        default:
            throw std::invalid_argument("no ansatz exponent known for code '" + c + "'");
    }
}

std::string fit_curves_json(const std::vector<ExperimentPoint> &points, std::optional<int> alpha) {
    for (size_t i = 0; i < points.size(); i++) {
        const auto &pt = points[i];
        if (!(pt.p_l > 0)) {
            throw std::invalid_argument("row " + std::to_string(i + 1) + " (code=" + pt.code + ", mode=" + pt.mode +
                                        ", p=" + format_double(pt.p) + ", p_bell=" + format_double(pt.p_bell) +
                                        ") has p_l = " + format_double(pt.p_l) + "; the fit needs p_l > 0");
        }
    }
    std::vector<std::tuple<std::string, std::string, double>> order;
    std::map<std::tuple<std::string, std::string, double>, std::vector<std::pair<double, double>>> curves;
    for (const auto &pt : points) {
        auto key = std::make_tuple(pt.code, pt.mode, pt.p_bell);
        if (!curves.count(key)) {
            order.push_back(key);
        }
        curves[key].emplace_back(pt.p, pt.p_l);
    }
    json out = json::array();
    for (const auto &key : order) {
        const auto &pts = curves[key];
        if (pts.size() < 2) {
            continue;
        }
        const auto &[code, mode, pb] = key;
        auto r = fit_ansatz(pts, alpha ? *alpha : ansatz_alpha(code));
        out.push_back({{"code", code},    {"curve", mode}, {"p_bell", pb},   {"alpha", r.alpha},
                       {"n_pts", r.n_pts}, {"c0", r.c0},   {"c1", r.c1},     {"c2", r.c2},
                       {"residual", r.residual}});
    }
    return out.dump(2) + "\n";
}

std::string report_csv(const std::vector<ExperimentPoint> &points) {
    std::ostringstream out;
    out << "curve,code,mode,p_bell,p,p_ghz,p_l,ci_lo,ci_hi,bell_per_shot\n";
    std::set<double> ps;
    for (const auto &pt : points) {
        if (!pt.error.empty()) {
            continue;
        }
        std::string curve = pt.code + "/" + pt.mode;
        if (pt.mode == "partitioned") {
            curve += "/p_bell=" + format_double(pt.p_bell);
        }
        out << curve << ',' << pt.code << ',' << pt.mode << ',' << format_double(pt.p_bell) << ','
            << format_double(pt.p) << ',' << format_double(pt.p_ghz) << ',' << format_double(pt.p_l) << ','
            << format_double(pt.ci_lo) << ','
            << format_double(pt.ci_hi) << ',' << pt.bell_per_shot << '\n';
        ps.insert(pt.p);
    }
    for (double p : ps) {
        if (p > 0) {
            out << "uncoded,,,," << format_double(p) << ",," << format_double(p) << ',' << format_double(p) << ','
                << format_double(p) << ",0\n";
        }
    }
    return out.str();
}

std::vector<double> curve_crossings(const std::vector<std::pair<double, double>> &a,
                                    const std::vector<std::pair<double, double>> &b) {
    std::map<double, double> ma(a.begin(), a.end()), mb(b.begin(), b.end());
    std::vector<std::array<double, 3>> common;
    for (auto [x, ya] : ma) {
        auto it = mb.find(x);
        if (it != mb.end()) {
            common.push_back({x, ya, it->second});
        }
    }
    std::vector<double> out;
    for (size_t i = 0; i < common.size(); i++) {
        auto [x0, a0, b0] = common[i];
        if (a0 == b0) {
            out.push_back(x0);
            continue;
        }
        if (i + 1 == common.size()) {
            break;
        }
        auto [x1, a1, b1] = common[i + 1];
        if ((a0 < b0) == (a1 < b1) || a1 == b1) {
            continue;
        }
        double f0, f1;
        if (a0 > 0 && b0 > 0 && a1 > 0 && b1 > 0) {
            f0 = std::log(a0) - std::log(b0);
            f1 = std::log(a1) - std::log(b1);
        } else {
            f0 = a0 - b0;
            f1 = a1 - b1;
        }
        out.push_back(x0 + (x1 - x0) * f0 / (f0 - f1));
    }
    return out;
}

}  // namespace netqec
