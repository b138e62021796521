#include "dsk/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace dsk::harness {

namespace {

constexpr std::pair<Algorithm, const char*> kAlgorithms[] = {
    {Algorithm::NnMusic, "nn_music"},     {Algorithm::MdMusic, "md_music"},
    {Algorithm::NnmMusic, "nnm_music"},   {Algorithm::NnmEsprit, "nnm_esprit"},
    {Algorithm::MnMusic, "mn_music"},     {Algorithm::DenoiseMusic, "denoise_music"},
    {Algorithm::Anm, "anm"},
};

constexpr std::pair<SweepField, const char*> kFields[] = {
    {SweepField::M, "M"},
    {SweepField::N, "N"},
    {SweepField::K, "K"},
    {SweepField::Samples, "samples"},
    {SweepField::MissingFraction, "missing_fraction"},
    {SweepField::DeltaF, "delta_f"},
    {SweepField::DeltaFTimesM, "delta_f_times_M"},
    {SweepField::Phi11, "phi11"},
    {SweepField::Sigma, "sigma"},
};

// Accepts a list of numbers or a "start:step:end" string.
std::vector<double> number_list(const Json& j) {
    if (j.is_string()) return parse_range(j.get<std::string>());
    return j.get<std::vector<double>>();
}

Index as_index(double v, const char* what) {
    if (!(v >= 0.0) || v != std::floor(v)) throw ParameterError(std::string(what) + " must be a nonnegative integer");
    return static_cast<Index>(v);
}

const std::set<std::string> kKnownKeys = {
    "id",      "description", "M",       "N",       "K",         "r",       "f",
    "delta_f", "delta_f_times_M", "draw", "amplitudes", "modes", "phi11", "samples",
    "missing_fraction", "sigma", "lambda", "trials", "seed", "threads", "grid", "algorithms",
    "solver",  "anm",         "peaks",   "sweep"};

} // namespace

std::string to_string(Algorithm a) {
    for (const auto& [alg, name] : kAlgorithms)
        if (alg == a) return name;
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
    for (const auto& [alg, n] : kAlgorithms)
        if (name == n) return alg;
    throw ParameterError("unknown algorithm '" + name + "'");
}

std::string to_string(SweepField f) {
    for (const auto& [field, name] : kFields)
        if (field == f) return name;
    return "unknown";
}

SweepField sweep_field_from_string(const std::string& name) {
    for (const auto& [field, n] : kFields)
        if (name == n) return field;
    throw ParameterError("unknown sweep field '" + name + "'");
}

RFGrid GridSpec::build(Index M) const { return RFGrid::uniform(r_min, r_max, dr, f_oversample * M); }

std::size_t ExperimentConfig::observed_count() const {
    if (samples) return *samples;
    const double total = static_cast<double>(M * N);
    return static_cast<std::size_t>(std::llround((1.0 - missing_fraction) * total));
}

void ExperimentConfig::validate() const {
    if (M < 1 || N < 1 || K < 1) throw ParameterError("M, N, K must be positive");
    if (trials < 1) throw ParameterError("trial count must be at least 1");
    if (algorithms.empty()) throw ParameterError("no algorithms listed");
    if (!(missing_fraction >= 0.0 && missing_fraction < 1.0)) {
        throw ParameterError("missing_fraction must lie in [0,1)");
    }
    if (samples && *samples > static_cast<std::size_t>(M * N)) throw ParameterError("samples exceed M*N");
    const bool draw = !draw_r.empty() || !draw_f.empty();
    if (draw) {
        if (draw_r.empty() || draw_f.empty()) throw ParameterError("draw needs both R and F sets");
        if (draw_f.size() < static_cast<std::size_t>(K)) throw ParameterError("F set smaller than K");
    } else {
        if (r.size() != static_cast<std::size_t>(K)) throw ParameterError("r list length differs from K");
        if (!delta_f && f.size() != static_cast<std::size_t>(K)) {
            throw ParameterError("f list length differs from K");
        }
        if (delta_f && f.empty()) throw ParameterError("delta_f needs f[0]");
    }
    if (amplitudes != "gaussian" && amplitudes != "ones") throw ParameterError("amplitudes must be gaussian or ones");
    if (modes != "gaussian" && modes != "fourier") throw ParameterError("modes must be gaussian or fourier");
    if (!(sigma >= 0.0)) throw ParameterError("sigma must be nonnegative");
    const bool denoise = std::find(algorithms.begin(), algorithms.end(), Algorithm::DenoiseMusic) != algorithms.end();
    if (denoise && !(lambda > 0.0)) throw ParameterError("denoise_music needs lambda > 0");
    if (sweep.size() > 2) throw ParameterError("at most two sweep axes");
    for (const auto& ax : sweep)
        if (ax.values.empty()) throw ParameterError("empty sweep axis");
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.count(key)) throw ParameterError("unknown config key '" + key + "'");
    }
    ExperimentConfig c;
    c.id = j.value("id", std::string{});
    c.description = j.value("description", std::string{});
    c.M = j.value("M", c.M);
    c.N = j.value("N", c.N);
    c.K = j.value("K", c.K);
    if (j.contains("r")) c.r = number_list(j["r"]);
    if (j.contains("f")) c.f = number_list(j["f"]);
    if (j.contains("delta_f")) c.delta_f = j["delta_f"].get<double>();
    if (j.contains("delta_f_times_M")) c.delta_f = j["delta_f_times_M"].get<double>() / static_cast<double>(c.M);
    if (j.contains("draw")) {
        const auto& d = j["draw"];
        c.draw_r = number_list(d.at("R"));
        c.draw_f = number_list(d.at("F"));
    }
    c.amplitudes = j.value("amplitudes", c.amplitudes);
    c.modes = j.value("modes", c.modes);
    c.phi11 = j.value("phi11", c.phi11);
    if (j.contains("samples")) c.samples = j["samples"].get<std::size_t>();
    c.missing_fraction = j.value("missing_fraction", c.missing_fraction);
    c.sigma = j.value("sigma", c.sigma);
    c.lambda = j.value("lambda", c.lambda);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        c.grid.r_min = g.value("r_min", c.grid.r_min);
        c.grid.r_max = g.value("r_max", c.grid.r_max);
        c.grid.dr = g.value("dr", c.grid.dr);
        c.grid.f_oversample = g.value("f_oversample", c.grid.f_oversample);
    }
    if (j.contains("algorithms")) {
        for (const auto& a : j["algorithms"]) c.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    }
    if (j.contains("solver")) update_from_json(c.solver, j["solver"]);
    if (j.contains("anm")) update_from_json(c.anm, j["anm"]);
    if (j.contains("peaks")) {
        const auto& p = j["peaks"];
        c.peaks.candidate_floor = p.value("candidate_floor", c.peaks.candidate_floor);
        c.peaks.accept_threshold = p.value("accept_threshold", c.peaks.accept_threshold);
        c.peaks.refine_tol = p.value("refine_tol", c.peaks.refine_tol);
        c.peaks.merge_distance = p.value("merge_distance", c.peaks.merge_distance);
    }
    if (j.contains("sweep")) {
        for (const auto& ax : j["sweep"]) {
            c.sweep.push_back({sweep_field_from_string(ax.at("field").get<std::string>()),
                               number_list(ax.at("values"))});
        }
    }
    c.validate();
    return c;
}

Json config_to_json(const ExperimentConfig& c) {
    Json j{{"id", c.id}, {"description", c.description}, {"M", c.M}, {"N", c.N}, {"K", c.K}};
    if (!c.draw_r.empty()) {
        j["draw"] = {{"R", c.draw_r}, {"F", c.draw_f}};
    } else {
        j["r"] = c.r;
        j["f"] = c.f;
    }
    if (c.delta_f) j["delta_f"] = *c.delta_f;
    j["amplitudes"] = c.amplitudes;
    j["modes"] = c.modes;
    j["phi11"] = c.phi11;
    if (c.samples) j["samples"] = *c.samples;
    j["missing_fraction"] = c.missing_fraction;
    j["sigma"] = c.sigma;
    j["lambda"] = c.lambda;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["grid"] = {{"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}, {"dr", c.grid.dr},
                 {"f_oversample", c.grid.f_oversample}};
    Json algs = Json::array();
    for (auto a : c.algorithms) algs.push_back(to_string(a));
    j["algorithms"] = algs;
    j["solver"] = options_to_json(c.solver);
    j["anm"] = options_to_json(c.anm);
    j["peaks"] = {{"candidate_floor", c.peaks.candidate_floor},
                  {"accept_threshold", c.peaks.accept_threshold},
                  {"refine_tol", c.peaks.refine_tol},
                  {"merge_distance", c.peaks.merge_distance}};
    Json sw = Json::array();
    for (const auto& ax : c.sweep) sw.push_back({{"field", to_string(ax.field)}, {"values", ax.values}});
    j["sweep"] = sw;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParameterError("malformed config '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig apply_sweep(const ExperimentConfig& base, SweepField field, double value) {
    ExperimentConfig c = base;
    switch (field) {
    case SweepField::M: c.M = as_index(value, "M"); break;
    case SweepField::N: c.N = as_index(value, "N"); break;
    case SweepField::K: c.K = as_index(value, "K"); break;
    case SweepField::Samples: c.samples = static_cast<std::size_t>(as_index(value, "samples")); break;
    case SweepField::MissingFraction:
        c.missing_fraction = value;
        c.samples.reset();
        break;
    case SweepField::DeltaF: c.delta_f = value; break;
    case SweepField::DeltaFTimesM: c.delta_f = value / static_cast<double>(c.M); break;
    case SweepField::Phi11: c.phi11 = value; break;
    case SweepField::Sigma: c.sigma = value; break;
    }
    c.sweep.clear();
    return c;
}

} // namespace dsk::harness
