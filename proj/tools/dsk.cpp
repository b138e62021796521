// Command-line driver: runs scenarios and exports dual-polynomial surfaces.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "dsk/estimators.hpp"
#include "dsk/harness/experiments.hpp"
#include "dsk/serialization.hpp"

#ifndef DSK_SCENARIO_DIR
#define DSK_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using namespace dsk;
using namespace dsk::harness;

namespace {

// A bare name resolves to <scenario dir>/<name>.json.
fs::path resolve_scenario(const std::string& arg) {
    fs::path p(arg);
    if (fs::exists(p)) return p;
    fs::path named = fs::path(DSK_SCENARIO_DIR) / (arg + ".json");
    if (fs::exists(named)) return named;
    throw ParameterError("no scenario file or name '" + arg + "'");
}

int cmd_list() {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(DSK_SCENARIO_DIR))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const auto cfg = load_config(f.string());
        std::cout << f.stem().string() << "  " << cfg.description << '\n';
    }
    return 0;
}

struct RunArgs {
    std::string scenario;
    std::string out;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool quiet = false;
};

int cmd_run(const RunArgs& a) {
    const fs::path path = resolve_scenario(a.scenario);
    ExperimentConfig cfg = load_config(path.string());
    if (a.trials) cfg.trials = *a.trials;
    if (a.seed) cfg.seed = *a.seed;
    if (a.threads) cfg.threads = *a.threads;
    cfg.validate();
    const fs::path out = a.out.empty() ? fs::path("results") / path.stem() : fs::path(a.out);

    Progress progress;
    if (!a.quiet) {
        progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 10 == 0) std::cerr << "\r" << done << "/" << total << std::flush;
            if (done == total) std::cerr << '\n';
        };
    }
    const ScenarioResult result = run_scenario(cfg, progress);
    write_outputs(result, out);

    for (const auto& p : result.points) {
        for (const auto& [field, v] : p.coords) std::cout << to_string(field) << '=' << format_double(v) << ' ';
        for (const auto& s : p.algorithms) {
            std::cout << to_string(s.algorithm) << ": p_param=" << format_double(s.p_param())
                      << " p_freq=" << format_double(s.p_freq());
            if (s.data_trials) std::cout << " p_data=" << format_double(s.p_data());
            std::cout << "  ";
        }
        std::cout << '\n';
    }
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

struct GridArgs {
    std::string scenario;
    std::string algorithm = "nn_music";
    std::size_t point = 0;
    std::size_t trial = 0;
    std::string out;
};

// Evaluates the chosen algorithm's dual polynomial for one trial of a
// scenario and writes it as r,f,qnorm.
int cmd_grid(const GridArgs& a) {
    const ExperimentConfig base = load_config(resolve_scenario(a.scenario).string());
    ExperimentConfig cfg = base;
    if (!base.sweep.empty()) {
        std::size_t idx = a.point;
        std::size_t stride = 1;
        for (const auto& ax : base.sweep) stride *= ax.values.size();
        if (idx >= stride) throw ParameterError("point index out of range");
        for (const auto& ax : base.sweep) {
            stride /= ax.values.size();
            cfg = apply_sweep(cfg, ax.field, ax.values[idx / stride]);
            idx %= stride;
        }
    }
    const TrialData d = make_trial_data(cfg, trial_seed(cfg.seed, a.point, a.trial));
    const RFGrid grid = cfg.grid.build(cfg.M);
    const Algorithm alg = algorithm_from_string(a.algorithm);

    std::ofstream file;
    if (!a.out.empty()) file.open(a.out);
    std::ostream& os = a.out.empty() ? std::cout : file;

    switch (alg) {
    case Algorithm::NnMusic: write_grid_csv(os, grid, eval_dual_poly(full_data_dual(d.observed, cfg.K), grid), "qnorm"); break;
    case Algorithm::MdMusic:
    case Algorithm::NnmMusic:
    case Algorithm::NnmEsprit: {
        const auto s = nnm_complete(d.observed, d.mask, cfg.solver);
        write_grid_csv(os, grid, eval_dual_poly(s.certificate, grid), "qnorm");
        break;
    }
    case Algorithm::DenoiseMusic:
        write_grid_csv(os, grid, eval_dual_poly(nnm_denoise(d.observed, cfg.lambda).certificate, grid), "qnorm");
        break;
    case Algorithm::MnMusic: throw ParameterError("mn_music has no dual polynomial");
    case Algorithm::Anm: {
        const auto s = anm_solve(d.observed, d.mask, cfg.anm);
        const auto& f = grid.f_values();
        const RealVector q = anm_dual_poly(s.certificate, f);
        os << "f,qnorm\n";
        for (std::size_t i = 0; i < f.size(); ++i)
            os << format_double(f[i]) << ',' << format_double(q(static_cast<Index>(i))) << '\n';
        break;
    }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damped spectral estimation via dual certificates"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write summary.json, trials.csv and plot CSVs");
    run_cmd->add_option("scenario", run.scenario, "Scenario JSON file or name")->required();
    run_cmd->add_option("--out", run.out, "Output directory (default results/<name>)");
    run_cmd->add_option("--trials", run.trials, "Override the trial count");
    run_cmd->add_option("--seed", run.seed, "Override the master seed");
    run_cmd->add_option("--threads", run.threads, "Worker threads (default: all cores)");
    run_cmd->add_flag("--quiet", run.quiet, "No progress output");

    GridArgs grid;
    auto* grid_cmd = app.add_subcommand("grid", "Export a dual-polynomial surface as CSV");
    grid_cmd->add_option("scenario", grid.scenario, "Scenario JSON file or name")->required();
    grid_cmd->add_option("--algorithm", grid.algorithm, "nn_music, md_music, denoise_music or anm");
    grid_cmd->add_option("--point", grid.point, "Sweep point index");
    grid_cmd->add_option("--trial", grid.trial, "Trial index");
    grid_cmd->add_option("--out", grid.out, "Output CSV (default stdout)");

    auto* list_cmd = app.add_subcommand("list-scenarios", "List bundled scenarios");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd) return cmd_run(run);
        if (*grid_cmd) return cmd_grid(grid);
        if (*list_cmd) return cmd_list();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
