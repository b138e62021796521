#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dsk/harness/config.hpp"
#include "dsk/harness/metrics.hpp"

namespace dsk::harness {

/// Seed streams of one trial. Each stage draws from its own stream so adding
/// or removing an algorithm never shifts another stage's draws.
enum class Stage : std::uint64_t { Params = 1, Modes = 2, Amplitudes = 3, Mask = 4, Noise = 5 };

std::uint64_t trial_seed(std::uint64_t master, std::size_t point, std::size_t trial);
std::uint64_t stage_seed(std::uint64_t trial_seed, Stage stage);

/// Ground truth and observations of one trial.
struct TrialData {
    SpectralParams truth;
    ComplexMatrix X;
    ComplexMatrix observed;
    SampleMask mask;
};

/// Draws the trial data for one (already swept) configuration.
TrialData make_trial_data(const ExperimentConfig& cfg, std::uint64_t seed);

struct AlgorithmOutcome {
    Algorithm algorithm = Algorithm::NnMusic;
    bool param_success = false;
    bool freq_success = false;
    std::optional<bool> data_success;
    double rel_err = std::numeric_limits<double>::quiet_NaN();
    double max_r_error = std::numeric_limits<double>::infinity();
    double max_f_error = std::numeric_limits<double>::infinity();
    std::vector<Peak> peaks;
    std::string failure;
    std::optional<SolveReport> report;
    double seconds = 0.0;
};

struct TrialResult {
    std::size_t point = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    SpectralParams truth;
    double mu0 = std::numeric_limits<double>::quiet_NaN();
    std::vector<AlgorithmOutcome> outcomes;
};

/// Runs every configured algorithm on one trial. Algorithm errors are
/// recorded in the outcome, never thrown.
TrialResult run_trial(const ExperimentConfig& cfg, std::size_t point, std::size_t trial);

struct AlgorithmSummary {
    Algorithm algorithm = Algorithm::NnMusic;
    std::size_t trials = 0;
    std::size_t param_successes = 0;
    std::size_t freq_successes = 0;
    std::size_t data_trials = 0;
    std::size_t data_successes = 0;
    std::size_t failures = 0;
    std::size_t nonconverged = 0;
    double mean_rel_err = std::numeric_limits<double>::quiet_NaN();
    double median_rel_err = std::numeric_limits<double>::quiet_NaN();
    double mean_iterations = 0.0;

    [[nodiscard]] double p_param() const;
    [[nodiscard]] double p_freq() const;
    [[nodiscard]] double p_data() const;
};

struct PointSummary {
    std::vector<std::pair<SweepField, double>> coords;
    double mean_mu0 = std::numeric_limits<double>::quiet_NaN();
    std::vector<AlgorithmSummary> algorithms;

    [[nodiscard]] const AlgorithmSummary& get(Algorithm a) const;
};

struct ScenarioResult {
    ExperimentConfig config;
    std::vector<PointSummary> points;
    /// Ordered by (point, trial).
    std::vector<TrialResult> trials;
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every sweep point and trial on a bounded worker pool; results are
/// merged by index so the output does not depend on scheduling.
ScenarioResult run_scenario(const ExperimentConfig& cfg, const Progress& progress = {});

/// Success-probability surfaces over two sweep axes for one algorithm.
struct PhaseGrids {
    SweepAxis rows;
    SweepAxis cols;
    RealMatrix param;
    RealMatrix data;
    RealMatrix diff;
};

/// Requires exactly two sweep axes.
PhaseGrids phase_grids(const ScenarioResult& result, Algorithm algorithm);
PhaseGrids run_phase_transition(const ExperimentConfig& cfg, Algorithm algorithm,
                                const Progress& progress = {});

struct CoherenceRow {
    double value = 0.0;
    double mu0 = 0.0;
    double p_data = 0.0;
    double p_param = 0.0;
};

/// One row per value of the single sweep axis.
std::vector<CoherenceRow> coherence_table(const ScenarioResult& result, Algorithm algorithm);
std::vector<CoherenceRow> run_coherence_study(const ExperimentConfig& cfg, Algorithm algorithm,
                                              const Progress& progress = {});

/// Deterministic summary (no timings).
Json summary_to_json(const ScenarioResult& result);

/// Writes summary.json, trials.csv and timing.csv, plus curve.csv for one
/// sweep axis or phase_<alg>_{param,data,diff}.csv for two.
void write_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

} // namespace dsk::harness
