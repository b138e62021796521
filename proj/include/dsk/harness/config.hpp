#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsk/anm.hpp"
#include "dsk/dualpoly.hpp"
#include "dsk/grid.hpp"
#include "dsk/nnm.hpp"
#include "dsk/serialization.hpp"

namespace dsk::harness {

enum class Algorithm { NnMusic, MdMusic, NnmMusic, NnmEsprit, MnMusic, DenoiseMusic, Anm };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// Fields a sweep axis may vary.
enum class SweepField { M, N, K, Samples, MissingFraction, DeltaF, DeltaFTimesM, Phi11, Sigma };

std::string to_string(SweepField f);
SweepField sweep_field_from_string(const std::string& name);

struct SweepAxis {
    SweepField field;
    std::vector<double> values;
};

/// Evaluation grid for the damping-frequency plane; f spacing is
/// 1/(f_oversample * M).
struct GridSpec {
    double r_min = 0.75;
    double r_max = 1.0;
    double dr = 0.002;
    Index f_oversample = 8;

    [[nodiscard]] RFGrid build(Index M) const;
};

/// One experiment, loaded from JSON. Missing keys keep these defaults.
struct ExperimentConfig {
    std::string id;
    std::string description;
    Index M = 50;
    Index N = 50;
    Index K = 3;

    /// Explicit parameters (used when `draw_r`/`draw_f` are empty).
    std::vector<double> r;
    std::vector<double> f;
    /// When set, f_k = f_0 + k * delta_f (mod 1) replaces f[1..K-1].
    std::optional<double> delta_f;
    /// Random draw sets: f without replacement, r with replacement.
    std::vector<double> draw_r;
    std::vector<double> draw_f;

    /// "gaussian" (CN(0,1)) or "ones".
    std::string amplitudes = "gaussian";
    /// "gaussian" (normalized CN(0,1) columns) or "fourier".
    std::string modes = "gaussian";
    double phi11 = 1.0;

    /// Observed entries: `samples` when set, else round((1-missing)*M*N).
    std::optional<std::size_t> samples;
    double missing_fraction = 0.0;

    double sigma = 0.0;
    double lambda = 0.0;

    std::size_t trials = 1;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    GridSpec grid;
    std::vector<Algorithm> algorithms;
    SolverOptions solver;
    AnmOptions anm;
    PeakOptions peaks;

    /// At most two axes; the cartesian product is run.
    std::vector<SweepAxis> sweep;

    [[nodiscard]] std::size_t observed_count() const;
    /// Throws ParameterError on inconsistent fields.
    void validate() const;
};

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// Copy of `base` with one sweep value applied.
ExperimentConfig apply_sweep(const ExperimentConfig& base, SweepField field, double value);

} // namespace dsk::harness
