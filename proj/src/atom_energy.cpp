#include "dsk/atom_energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dsk/signal_model.hpp"

namespace dsk {

RealMatrix atom_energy_on_grid(const ComplexMatrix& B, const RFGrid& grid) {
    const Index M = B.rows();
    if (M < 1) throw DimensionError("basis has no rows");
    const ComplexMatrix G = B * B.adjoint();
    const auto& rs = grid.r_values();
    const auto& fs = grid.f_values();
    const auto F = static_cast<Index>(fs.size());

    // phase(j, d) = exp(-j 2 pi f_j d), d = 0..M-1
    ComplexMatrix phase(F, M);
    for (Index j = 0; j < F; ++j) {
        const double w = -2.0 * std::numbers::pi * fs[static_cast<std::size_t>(j)];
        for (Index d = 0; d < M; ++d) {
            const double ang = w * static_cast<double>(d);
            phase(j, d) = cplx(std::cos(ang), std::sin(ang));
        }
    }

    RealMatrix out(static_cast<Index>(rs.size()), F);
    ComplexVector h(M);
    RealVector rpow(2 * M);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double r = rs[i];
        for (Index p = 0; p < 2 * M; ++p) rpow(p) = std::pow(r, static_cast<double>(p));
        // h(d) = sum_{m - m' = d} r^{m+m'} G(m, m')
        for (Index d = 0; d < M; ++d) {
            cplx acc{0.0, 0.0};
            for (Index mp = 0; mp + d < M; ++mp) acc += rpow(2 * mp + d) * G(mp + d, mp);
            h(d) = acc;
        }
        const double scale = 1.0 / make_unnormalized_atom(r, 0.0, M).squaredNorm();
        const double h0 = h(0).real();
        h(0) = 0.0;
        const RealVector vals = ((phase * h).real().array() * 2.0 + h0) * scale;
        out.row(static_cast<Index>(i)) = vals.transpose().cwiseMax(0.0);
    }
    return out;
}

double atom_energy(const ComplexMatrix& B, double r, double f) {
    return (B.adjoint() * make_atom(r, f, B.rows())).squaredNorm();
}

} // namespace dsk
