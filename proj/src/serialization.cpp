#include "dsk/serialization.hpp"

#include <charconv>
#include <ostream>

namespace dsk {

namespace {

template <class Opts, class Fn>
void apply_keys(const Json& j, Opts& opts, Fn&& assign) {
    if (!j.is_object()) throw ParameterError("solver options must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!assign(opts, key, value)) throw ParameterError("unknown solver option '" + key + "'");
    }
}

} // namespace

Json matrix_to_json(const ComplexMatrix& X) {
    Json re = Json::array(), im = Json::array();
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) {
            re.push_back(X(i, j).real());
            im.push_back(X(i, j).imag());
        }
    }
    return Json{{"rows", X.rows()}, {"cols", X.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimensions");
    if (re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size()) {
        throw DimensionError("matrix entry count differs from rows*cols");
    }
    ComplexMatrix X(rows, cols);
    std::size_t k = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index jj = 0; jj < cols; ++jj, ++k) X(i, jj) = {re[k].get<double>(), im[k].get<double>()};
    require_finite(X, "matrix");
    return X;
}

Json mask_to_json(const SampleMask& mask) {
    Json idx = Json::array();
    for (const auto& [i, j] : mask.indices()) idx.push_back({i, j});
    return Json{{"m", mask.rows()}, {"n", mask.cols()}, {"indices", std::move(idx)}};
}

SampleMask mask_from_json(const Json& j) {
    std::vector<std::pair<Index, Index>> idx;
    for (const auto& p : j.at("indices")) idx.emplace_back(p.at(0).get<Index>(), p.at(1).get<Index>());
    return SampleMask(j.at("m").get<Index>(), j.at("n").get<Index>(), std::move(idx));
}

Json report_to_json(const SolveReport& r) {
    return Json{{"iterations", r.iterations},
                {"primal_residual", r.primal_residual},
                {"dual_residual", r.dual_residual},
                {"objective", r.objective},
                {"converged", r.converged},
                {"duality_gap", r.duality_gap},
                {"q_norm", r.q_norm},
                {"w_norm", r.w_norm},
                {"rank", r.rank},
                {"rho", r.rho}};
}

Json peaks_to_json(const PeakSet& peaks) {
    Json out = Json::array();
    for (const auto& p : peaks.peaks) out.push_back({{"r", p.r}, {"f", p.f}, {"value", p.value}});
    return out;
}

void update_from_json(SolverOptions& opts, const Json& j) {
    apply_keys(j, opts, [](SolverOptions& o, const std::string& k, const Json& v) {
        if (k == "max_iter") o.max_iter = v.get<std::size_t>();
        else if (k == "tol_primal") o.tol_primal = v.get<double>();
        else if (k == "tol_change") o.tol_change = v.get<double>();
        else if (k == "rho0") o.rho0 = v.get<double>();
        else if (k == "gap_tol") o.gap_tol = v.get<double>();
        else if (k == "relaxation") o.relaxation = v.get<double>();
        else if (k == "balance_ratio") o.balance_ratio = v.get<double>();
        else if (k == "balance_factor") o.balance_factor = v.get<double>();
        else if (k == "balance_every") o.balance_every = v.get<std::size_t>();
        else return false;
        return true;
    });
}

void update_from_json(AnmOptions& opts, const Json& j) {
    apply_keys(j, opts, [](AnmOptions& o, const std::string& k, const Json& v) {
        if (k == "max_iter") o.max_iter = v.get<std::size_t>();
        else if (k == "tol_primal") o.tol_primal = v.get<double>();
        else if (k == "tol_change") o.tol_change = v.get<double>();
        else if (k == "rho0") o.rho0 = v.get<double>();
        else if (k == "gap_tol") o.gap_tol = v.get<double>();
        else if (k == "balance_ratio") o.balance_ratio = v.get<double>();
        else if (k == "balance_factor") o.balance_factor = v.get<double>();
        else if (k == "balance_every") o.balance_every = v.get<std::size_t>();
        else return false;
        return true;
    });
}

Json options_to_json(const SolverOptions& o) {
    return Json{{"max_iter", o.max_iter},           {"tol_primal", o.tol_primal},
                {"tol_change", o.tol_change},       {"rho0", o.rho0},
                {"gap_tol", o.gap_tol},             {"relaxation", o.relaxation},
                {"balance_ratio", o.balance_ratio}, {"balance_factor", o.balance_factor},
                {"balance_every", o.balance_every}};
}

Json options_to_json(const AnmOptions& o) {
    return Json{{"max_iter", o.max_iter},         {"tol_primal", o.tol_primal},
                {"tol_change", o.tol_change},     {"rho0", o.rho0},
                {"gap_tol", o.gap_tol},           {"balance_ratio", o.balance_ratio},
                {"balance_factor", o.balance_factor}, {"balance_every", o.balance_every}};
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_grid_csv(std::ostream& os, const RFGrid& grid, const RealMatrix& values,
                    const std::string& value_name) {
    if (values.rows() != static_cast<Index>(grid.r_size()) ||
        values.cols() != static_cast<Index>(grid.f_size())) {
        throw DimensionError("value matrix does not match the grid");
    }
    os << "r,f," << value_name << '\n';
    for (std::size_t i = 0; i < grid.r_size(); ++i) {
        for (std::size_t j = 0; j < grid.f_size(); ++j) {
            os << format_double(grid.r_values()[i]) << ',' << format_double(grid.f_values()[j]) << ','
               << format_double(values(static_cast<Index>(i), static_cast<Index>(j))) << '\n';
        }
    }
}

} // namespace dsk
