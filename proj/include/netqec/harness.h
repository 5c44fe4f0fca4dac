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


#ifndef NETQEC_HARNESS_H
#define NETQEC_HARNESS_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netqec/builders.h"
#include "netqec/decode.h"
#include "netqec/partition.h"

namespace netqec {

enum class ExperimentMode { kMonolithic, kNetworked, kPartitioned };
const char *mode_name(ExperimentMode mode);
ExperimentMode parse_mode(std::string_view text);

/// Which noise parameter the sweep values set; the other keeps its fixed config value.
enum class SweepParameter { kP, kPGhz };
enum class SamplerKind { kDem, kFrame };
enum class DecoderKind { kAuto, kMatching, kBpOsd };

struct DecoderConfig {
    /// kAuto picks matching for surface codes and BP-OSD for BB codes.
    DecoderKind kind = DecoderKind::kAuto;
    BpOsdConfig bposd;
    /// BP-OSD sees only the detectors of the memory basis. Matching always does.
    bool basis_detectors_only = true;
};

struct ExperimentConfig {
    std::string name;
    /// "surface" or a BB preset name ("72", "bb90", ...).
    std::string code = "surface";
    /// Surface-code distances; ignored for BB presets.
    std::vector<int> distances = {3};
    std::vector<ExperimentMode> modes = {ExperimentMode::kMonolithic};
    SweepParameter sweep = SweepParameter::kP;
    std::vector<double> values;
    double p = 0;
    double p_ghz = 0.002;
    /// Bell-pair error rates, one curve each; partitioned mode only.
    std::vector<double> p_bells = {0.0125};
    /// Syndrome rounds; the code distance when unset.
    std::optional<size_t> rounds;
    PauliBasis basis = PauliBasis::Z;
    uint64_t max_shots = 1000000;
    uint64_t max_failures = 1000;
    uint64_t seed = 0;
    uint64_t batch_size = 1 << 14;
    SamplerKind sampler = SamplerKind::kDem;
    DecoderConfig decoder;
    size_t workers = 4;
    bool bridge_overhead = true;
    GhzChannel ghz_channel = GhzChannel::kPerQubit;
    BipartitionOptions partition;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    static ExperimentConfig from_json(std::string_view text);
    std::string to_json() const;
};

struct ExperimentPoint {
    std::string code;
    std::string mode;
    int distance = 0;
    size_t rounds = 0;
    double p = 0;
    double p_bell = 0;
    double p_ghz = 0;
    uint64_t shots = 0;
    uint64_t failures = 0;
    double p_l = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    uint64_t bell_per_shot = 0;
    uint64_t seed = 0;
    double wall_seconds = 0;
    /// Non-empty when the point could not be run; the sweep continues.
    std::string error;
};

/// Bell pairs consumed per shot: targets of DEPOLARIZE2[bell] instructions, two per pair.
uint64_t count_bell_pairs(const Circuit &circuit);

/// Runs every (distance, mode, p_bell, value) combination in order. Each point samples
/// batches of `batch_size` shots and stops at the first batch boundary where the failure or
/// shot budget is reached. Results do not depend on `workers`.
std::vector<ExperimentPoint> run_experiment(const ExperimentConfig &config,
                                            const std::function<void(const ExperimentPoint &)> &on_point = {});

/// Columns: code, mode, p, p_bell, p_ghz, shots, failures, p_l, ci_lo, ci_hi, bell_per_shot, seed.
void write_points_csv(std::ostream &out, const std::vector<ExperimentPoint> &points);
std::vector<ExperimentPoint> read_points_csv(std::istream &in);
/// Reproducibility record for a run: the config and per-point rounds, distances and errors.
std::string run_metadata_json(const ExperimentConfig &config, const std::vector<ExperimentPoint> &points);

struct FitResult {
    int alpha = 1;
    size_t n_pts = 0;
    double c0 = 0;
    double c1 = 0;
    double c2 = 0;
    /// Root-mean-square residual of ln(p_L) over the fitted points.
    double residual = 0;

    double evaluate(double p) const;
};

/// Least squares of ln(p_L) - alpha ln(p) against c0 + c1 p + c2 p^2; c2 = 0 for two points.
FitResult fit_ansatz(const std::vector<std::pair<double, double>> &points, int alpha);
/// Exponent used per BB preset (3, 4, 5 for 72, 90, 144).
int ansatz_alpha(std::string_view code);

/// One fit per (code, mode, p_bell) curve with at least two points, as a JSON array of
/// {code, curve, p_bell, alpha, n_pts, c0, c1, c2, residual}. Throws naming the first row
/// with p_l <= 0.
std::string fit_curves_json(const std::vector<ExperimentPoint> &points, std::optional<int> alpha = {});

/// Plot data: one row per point labelled by curve, plus the uncoded reference p_L = p at every
/// swept p > 0. Columns: curve, code, mode, p_bell, p, p_ghz, p_l, ci_lo, ci_hi, bell_per_shot.
std::string report_csv(const std::vector<ExperimentPoint> &points);

/// Abscissae where two curves sampled at the same x values cross, interpolating ln(p_L)
/// linearly between neighbouring samples.
std::vector<double> curve_crossings(const std::vector<std::pair<double, double>> &a,
                                    const std::vector<std::pair<double, double>> &b);

}  // namespace netqec

#endif
