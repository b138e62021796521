#include "dsk/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "dsk/estimators.hpp"
#include "dsk/random.hpp"
#include "dsk/signal_model.hpp"

namespace dsk::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double wrap01(double f) {
    f -= std::floor(f);
    return f >= 1.0 ? 0.0 : f;
}

bool uses_completion(Algorithm a) {
    return a == Algorithm::MdMusic || a == Algorithm::NnmMusic || a == Algorithm::NnmEsprit;
}

std::vector<ExperimentConfig> point_configs(const ExperimentConfig& cfg,
                                            std::vector<std::vector<std::pair<SweepField, double>>>& coords) {
    std::vector<ExperimentConfig> out;
    coords.clear();
    if (cfg.sweep.empty()) {
        out.push_back(cfg);
        coords.emplace_back();
    } else if (cfg.sweep.size() == 1) {
        const auto& ax = cfg.sweep[0];
        for (double v : ax.values) {
            out.push_back(apply_sweep(cfg, ax.field, v));
            coords.push_back({{ax.field, v}});
        }
    } else {
        const auto& a0 = cfg.sweep[0];
        const auto& a1 = cfg.sweep[1];
        for (double v0 : a0.values) {
            for (double v1 : a1.values) {
                out.push_back(apply_sweep(apply_sweep(cfg, a0.field, v0), a1.field, v1));
                coords.push_back({{a0.field, v0}, {a1.field, v1}});
            }
        }
    }
    for (const auto& c : out) c.validate();
    return out;
}

std::string join_values(const std::vector<Peak>& peaks, bool use_r) {
    std::string s;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        if (i) s += ';';
        s += format_double(use_r ? peaks[i].r : peaks[i].f);
    }
    return s;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

void write_matrix_csv(const std::filesystem::path& path, const PhaseGrids& g, const RealMatrix& m) {
    std::ofstream os(path);
    os << to_string(g.rows.field) << '\\' << to_string(g.cols.field);
    for (double v : g.cols.values) os << ',' << format_double(v);
    os << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        os << format_double(g.rows.values[static_cast<std::size_t>(i)]);
        for (Index j = 0; j < m.cols(); ++j) os << ',' << format_double(m(i, j));
        os << '\n';
    }
}

} // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t point, std::size_t trial) {
    return derive_seed(master, point, trial);
}

std::uint64_t stage_seed(std::uint64_t seed, Stage stage) {
    return derive_seed(seed, static_cast<std::uint64_t>(stage));
}

TrialData make_trial_data(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto K = static_cast<std::size_t>(cfg.K);
    std::vector<double> r, f;
    if (!cfg.draw_f.empty()) {
        Rng rng(stage_seed(seed, Stage::Params));
        std::vector<std::size_t> perm(cfg.draw_f.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::uniform_int_distribution<std::size_t> pick(0, cfg.draw_r.size() - 1);
        for (std::size_t k = 0; k < K; ++k) {
            f.push_back(cfg.draw_f[perm[k]]);
            r.push_back(cfg.draw_r[pick(rng)]);
        }
    } else {
        r = cfg.r;
        f = cfg.f;
        if (cfg.delta_f) {
            f.resize(K);
            for (std::size_t k = 1; k < K; ++k) f[k] = wrap01(f[0] + static_cast<double>(k) * *cfg.delta_f);
        }
    }
    std::vector<cplx> c(K, cplx{1.0, 0.0});
    if (cfg.amplitudes == "gaussian") {
        Rng rng(stage_seed(seed, Stage::Amplitudes));
        c = gaussian_amplitudes(K, rng);
    }
    TrialData d{SpectralParams::from_lists(r, f, c), {}, {}, SampleMask::full(cfg.M, cfg.N)};
    ModeMatrix phi = [&] {
        if (cfg.modes == "fourier") return fourier_modes(cfg.N, cfg.K, cfg.phi11);
        Rng rng(stage_seed(seed, Stage::Modes));
        return gaussian_modes(cfg.N, cfg.K, rng);
    }();
    d.X = synth_data_matrix(d.truth, phi, cfg.M);
    const std::size_t count = cfg.observed_count();
    if (count != static_cast<std::size_t>(cfg.M * cfg.N)) {
        d.mask = sample_mask(cfg.M, cfg.N, count, stage_seed(seed, Stage::Mask));
    }
    const ComplexMatrix Y = cfg.sigma > 0.0 ? add_noise(d.X, cfg.sigma, stage_seed(seed, Stage::Noise)) : d.X;
    d.observed = d.mask.project(Y);
    return d;
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t point, std::size_t trial) {
    TrialResult res;
    res.point = point;
    res.trial = trial;
    res.seed = trial_seed(cfg.seed, point, trial);
    const TrialData d = make_trial_data(cfg, res.seed);
    res.truth = d.truth;
    try {
        res.mu0 = coherence_diagnostics(d.X, cfg.K).mu0;
    } catch (const Error&) {
    }
    const RFGrid grid = cfg.grid.build(cfg.M);
    std::optional<CompletionResult> completion;

    for (Algorithm a : cfg.algorithms) {
        AlgorithmOutcome o;
        o.algorithm = a;
        const auto t0 = Clock::now();
        try {
            if (uses_completion(a) && !completion) completion = nnm_complete(d.observed, d.mask, cfg.solver);
            Estimate e;
            std::optional<ComplexMatrix> xhat;
            switch (a) {
            case Algorithm::NnMusic: e = nn_music(d.observed, cfg.K, grid, cfg.peaks); break;
            case Algorithm::MdMusic:
                e = md_music(*completion, d.observed, d.mask, grid, [&] {
                    PeakOptions p = cfg.peaks;
                    p.expected_K = static_cast<std::size_t>(cfg.K);
                    return p;
                }());
                break;
            case Algorithm::NnmMusic: e = nnm_music(completion->Xhat, cfg.K, grid); break;
            case Algorithm::NnmEsprit: e = nnm_esprit(completion->Xhat, cfg.K); break;
            case Algorithm::MnMusic: e = mn_music_estimate(d.observed, d.mask, cfg.K, grid); break;
            case Algorithm::DenoiseMusic: {
                e = denoise_music(d.observed, cfg.lambda, cfg.K, grid);
                xhat = svt(d.observed, cfg.lambda);
                break;
            }
            case Algorithm::Anm: {
                const AnmResult s = anm_solve(d.observed, d.mask, cfg.anm);
                e = anm_frequencies(s, cfg.K, cfg.grid.f_oversample);
                xhat = s.Xhat;
                o.report = s.report;
                break;
            }
            }
            if (uses_completion(a)) {
                xhat = completion->Xhat;
                o.report = completion->report;
            }
            if (xhat) {
                o.rel_err = rel_err(*xhat, d.X);
                o.data_success = o.rel_err <= kDataTolerance;
            }
            o.peaks = e.peaks.peaks;
            o.failure = e.failure;
            if (e.params.size() == d.truth.size()) {
                const MatchResult m = success_params(e.params, d.truth);
                const MatchResult mf = success_params(e.params, d.truth, kParamTolerance, true);
                o.max_r_error = m.max_r_error;
                o.max_f_error = mf.max_f_error;
                o.param_success = e.ok() && m.success;
                o.freq_success = e.ok() && mf.success;
            }
        } catch (const std::exception& ex) {
            o.failure = ex.what();
        }
        o.seconds = seconds_since(t0);
        res.outcomes.push_back(std::move(o));
    }
    return res;
}

double AlgorithmSummary::p_param() const {
    return trials ? static_cast<double>(param_successes) / static_cast<double>(trials) : 0.0;
}
double AlgorithmSummary::p_freq() const {
    return trials ? static_cast<double>(freq_successes) / static_cast<double>(trials) : 0.0;
}
double AlgorithmSummary::p_data() const {
    return data_trials ? static_cast<double>(data_successes) / static_cast<double>(data_trials)
                       : std::numeric_limits<double>::quiet_NaN();
}

const AlgorithmSummary& PointSummary::get(Algorithm a) const {
    for (const auto& s : algorithms)
        if (s.algorithm == a) return s;
    throw ParameterError("algorithm " + to_string(a) + " was not run");
}

ScenarioResult run_scenario(const ExperimentConfig& cfg, const Progress& progress) {
    cfg.validate();
    std::vector<std::vector<std::pair<SweepField, double>>> coords;
    const auto configs = point_configs(cfg, coords);

    ScenarioResult out;
    out.config = cfg;
    const std::size_t total = configs.size() * cfg.trials;
    out.trials.resize(total);

    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            const std::size_t item = next.fetch_add(1);
            if (item >= total) return;
            const std::size_t p = item / cfg.trials, t = item % cfg.trials;
            out.trials[item] = run_trial(configs[p], p, t);
            if (progress) {
                std::lock_guard lock(mu);
                progress(++done, total);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    for (std::size_t p = 0; p < configs.size(); ++p) {
        PointSummary ps;
        ps.coords = coords[p];
        double mu_sum = 0.0;
        std::size_t mu_n = 0;
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
            AlgorithmSummary s;
            s.algorithm = cfg.algorithms[a];
            std::vector<double> errs;
            double iters = 0.0;
            std::size_t with_report = 0;
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                const auto& o = out.trials[p * cfg.trials + t].outcomes[a];
                ++s.trials;
                s.param_successes += o.param_success;
                s.freq_successes += o.freq_success;
                if (o.data_success) {
                    ++s.data_trials;
                    s.data_successes += *o.data_success;
                }
                if (!std::isnan(o.rel_err)) errs.push_back(o.rel_err);
                if (!o.failure.empty()) ++s.failures;
                if (o.report) {
                    ++with_report;
                    iters += static_cast<double>(o.report->iterations);
                    if (!o.report->converged) ++s.nonconverged;
                }
            }
            if (!errs.empty()) {
                s.mean_rel_err = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
                std::sort(errs.begin(), errs.end());
                const std::size_t n = errs.size();
                s.median_rel_err = n % 2 ? errs[n / 2] : 0.5 * (errs[n / 2 - 1] + errs[n / 2]);
            }
            if (with_report) s.mean_iterations = iters / static_cast<double>(with_report);
            ps.algorithms.push_back(s);
        }
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const double mu = out.trials[p * cfg.trials + t].mu0;
            if (!std::isnan(mu)) {
                mu_sum += mu;
                ++mu_n;
            }
        }
        if (mu_n) ps.mean_mu0 = mu_sum / static_cast<double>(mu_n);
        out.points.push_back(std::move(ps));
    }
    return out;
}

PhaseGrids phase_grids(const ScenarioResult& result, Algorithm algorithm) {
    const auto& sweep = result.config.sweep;
    if (sweep.size() != 2) throw ParameterError("phase grids need exactly two sweep axes");
    PhaseGrids g{sweep[0], sweep[1], {}, {}, {}};
    const auto R = static_cast<Index>(g.rows.values.size());
    const auto C = static_cast<Index>(g.cols.values.size());
    g.param.resize(R, C);
    g.data.resize(R, C);
    for (Index i = 0; i < R; ++i) {
        for (Index j = 0; j < C; ++j) {
            const auto& s = result.points[static_cast<std::size_t>(i * C + j)].get(algorithm);
            g.param(i, j) = s.p_param();
            g.data(i, j) = s.p_data();
        }
    }
    g.diff = g.param - g.data;
    return g;
}

PhaseGrids run_phase_transition(const ExperimentConfig& cfg, Algorithm algorithm, const Progress& progress) {
    return phase_grids(run_scenario(cfg, progress), algorithm);
}

std::vector<CoherenceRow> coherence_table(const ScenarioResult& result, Algorithm algorithm) {
    if (result.config.sweep.size() != 1) throw ParameterError("coherence table needs one sweep axis");
    std::vector<CoherenceRow> rows;
    for (const auto& p : result.points) {
        const auto& s = p.get(algorithm);
        rows.push_back({p.coords.at(0).second, p.mean_mu0, s.p_data(), s.p_param()});
    }
    return rows;
}

std::vector<CoherenceRow> run_coherence_study(const ExperimentConfig& cfg, Algorithm algorithm,
                                              const Progress& progress) {
    return coherence_table(run_scenario(cfg, progress), algorithm);
}

Json summary_to_json(const ScenarioResult& result) {
    Json points = Json::array();
    for (const auto& p : result.points) {
        Json coords = Json::object();
        for (const auto& [field, v] : p.coords) coords[to_string(field)] = v;
        Json algs = Json::object();
        for (const auto& s : p.algorithms) {
            const Interval pci = wilson_interval(s.param_successes, s.trials);
            const Interval fci = wilson_interval(s.freq_successes, s.trials);
            Json a{{"trials", s.trials},
                   {"p_param", s.p_param()},
                   {"p_param_ci", {pci.lo, pci.hi}},
                   {"p_freq", s.p_freq()},
                   {"p_freq_ci", {fci.lo, fci.hi}}};
            if (s.data_trials) {
                const Interval dci = wilson_interval(s.data_successes, s.data_trials);
                a["p_data"] = s.p_data();
                a["p_data_ci"] = {dci.lo, dci.hi};
                a["mean_rel_err"] = s.mean_rel_err;
                a["median_rel_err"] = s.median_rel_err;
            }
            a["failures"] = s.failures;
            a["nonconverged"] = s.nonconverged;
            a["mean_iterations"] = s.mean_iterations;
            algs[to_string(s.algorithm)] = std::move(a);
        }
        Json pj{{"coords", coords}};
        if (!std::isnan(p.mean_mu0)) pj["mean_mu0"] = p.mean_mu0;
        pj["algorithms"] = std::move(algs);
        points.push_back(std::move(pj));
    }
    return Json{{"scenario", config_to_json(result.config)}, {"points", std::move(points)}};
}

void write_outputs(const ScenarioResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& cfg = result.config;
    {
        std::ofstream os(dir / "summary.json");
        os << summary_to_json(result).dump(2) << '\n';
    }
    {
        std::ofstream os(dir / "trials.csv");
        os << "point";
        for (const auto& ax : cfg.sweep) os << ',' << to_string(ax.field);
        os << ",trial,seed,algorithm,param_success,freq_success,data_success,rel_err,max_r_error,"
              "max_f_error,n_peaks,r_hat,f_hat,iterations,converged,duality_gap,w_norm,mu0,failure\n";
        for (const auto& t : result.trials) {
            for (const auto& o : t.outcomes) {
                os << t.point;
                for (const auto& [field, v] : result.points[t.point].coords) os << ',' << format_double(v);
                os << ',' << t.trial << ',' << t.seed << ',' << to_string(o.algorithm) << ','
                   << o.param_success << ',' << o.freq_success << ','
                   << (o.data_success ? (*o.data_success ? "1" : "0") : "") << ','
                   << format_double(o.rel_err) << ',' << format_double(o.max_r_error) << ','
                   << format_double(o.max_f_error) << ',' << o.peaks.size() << ','
                   << join_values(o.peaks, true) << ',' << join_values(o.peaks, false) << ',';
                if (o.report) {
                    os << o.report->iterations << ',' << o.report->converged << ','
                       << format_double(o.report->duality_gap) << ',' << format_double(o.report->w_norm);
                } else {
                    os << ",,,";
                }
                os << ',' << format_double(t.mu0) << ',' << csv_field(o.failure) << '\n';
            }
        }
    }
    {
        std::ofstream os(dir / "timing.csv");
        os << "point,trial,algorithm,seconds\n";
        for (const auto& t : result.trials)
            for (const auto& o : t.outcomes)
                os << t.point << ',' << t.trial << ',' << to_string(o.algorithm) << ','
                   << format_double(o.seconds) << '\n';
    }
    if (cfg.sweep.size() == 1) {
        std::ofstream os(dir / "curve.csv");
        os << to_string(cfg.sweep[0].field)
           << ",algorithm,trials,p_param,p_param_lo,p_param_hi,p_freq,p_data,p_data_lo,p_data_hi,"
              "mean_mu0,mean_rel_err\n";
        for (const auto& p : result.points) {
            for (const auto& s : p.algorithms) {
                const Interval pci = wilson_interval(s.param_successes, s.trials);
                const Interval dci = wilson_interval(s.data_successes, s.data_trials);
                os << format_double(p.coords[0].second) << ',' << to_string(s.algorithm) << ','
                   << s.trials << ',' << format_double(s.p_param()) << ',' << format_double(pci.lo)
                   << ',' << format_double(pci.hi) << ',' << format_double(s.p_freq()) << ',';
                if (s.data_trials) {
                    os << format_double(s.p_data()) << ',' << format_double(dci.lo) << ','
                       << format_double(dci.hi);
                } else {
                    os << ",,";
                }
                os << ',' << format_double(p.mean_mu0) << ',' << format_double(s.mean_rel_err) << '\n';
            }
        }
    } else if (cfg.sweep.size() == 2) {
        for (Algorithm a : cfg.algorithms) {
            const PhaseGrids g = phase_grids(result, a);
            const std::string stem = "phase_" + to_string(a);
            write_matrix_csv(dir / (stem + "_param.csv"), g, g.param);
            if (result.points.front().get(a).data_trials) {
                write_matrix_csv(dir / (stem + "_data.csv"), g, g.data);
                write_matrix_csv(dir / (stem + "_diff.csv"), g, g.diff);
            }
        }
    }
}

} // namespace dsk::harness
