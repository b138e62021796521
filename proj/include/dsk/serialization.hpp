#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "dsk/anm.hpp"
#include "dsk/core.hpp"
#include "dsk/dualpoly.hpp"
#include "dsk/grid.hpp"
#include "dsk/nnm.hpp"

namespace dsk {

using Json = nlohmann::ordered_json;

/// {rows, cols, re: [...], im: [...]} with entries in row-major order.
Json matrix_to_json(const ComplexMatrix& X);
ComplexMatrix matrix_from_json(const Json& j);

/// {m, n, indices: [[i, j], ...]}.
Json mask_to_json(const SampleMask& mask);
SampleMask mask_from_json(const Json& j);

Json report_to_json(const SolveReport& report);

/// [{r, f, value}, ...].
Json peaks_to_json(const PeakSet& peaks);

/// Reads the keys present in `j` over the defaults already in `opts`;
/// unknown keys raise ParameterError.
void update_from_json(SolverOptions& opts, const Json& j);
void update_from_json(AnmOptions& opts, const Json& j);
Json options_to_json(const SolverOptions& opts);
Json options_to_json(const AnmOptions& opts);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

/// CSV with header `r,f,<value_name>`, one row per grid point, r-major.
void write_grid_csv(std::ostream& os, const RFGrid& grid, const RealMatrix& values,
                    const std::string& value_name = "value");

} // namespace dsk
