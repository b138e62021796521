#pragma once

#include "dsk/core.hpp"
#include "dsk/grid.hpp"

namespace dsk {

/// ||B^H a(r,f)||_2^2 for every grid point, as a |r| x |f| matrix.
///
/// With G = B B^H the quadratic form a^H G a is, for fixed r, a trigonometric
/// polynomial in f whose coefficients are the r-weighted diagonal sums of G,
/// so each grid point costs O(M) after an O(M^2) setup per damping row.
RealMatrix atom_energy_on_grid(const ComplexMatrix& B, const RFGrid& grid);

/// ||B^H a(r,f)||_2^2 at a single point (direct evaluation).
double atom_energy(const ComplexMatrix& B, double r, double f);

} // namespace dsk
