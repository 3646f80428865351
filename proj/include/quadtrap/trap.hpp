#pragma once

#include <span>
#include <vector>

#include "quadtrap/field.hpp"

namespace quadtrap {

/// Quadrupole characterization at a field zero.
///
/// Eigenvalues are sorted strong axis first (largest magnitude), then
/// the remaining two by descending value. Axis signs follow the
/// first-nonzero-component-positive rule. `ratio` is eigenvalues
/// normalized so the two weak entries average to 1 (an ideal quadrupole
/// reads -2, 1, 1).
struct TrapReport {
    Vec3 zero;                          // [m]
    std::array<double, 3> eigenvalues;  // [T/m]
    std::array<Vec3, 3> axes;           // unit vectors
    std::array<double, 3> ratio;
};

/// One grid axis: `count` points from lo to hi inclusive
/// (count == 1 means the single coordinate lo; hi must equal lo).
struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
};

struct GridSpec {
    GridAxis x, y, z;

    std::size_t point_count() const {
        return std::size_t(x.count) * std::size_t(y.count) * std::size_t(z.count);
    }
    static double coordinate(const GridAxis& a, int i) {
        if (a.count == 1) return a.lo;
        return a.lo + (a.hi - a.lo) * double(i) / double(a.count - 1);
    }
    /// Row-major, x fastest.
    Vec3 point(std::size_t flat) const {
        int ix = int(flat % std::size_t(x.count));
        int iy = int((flat / std::size_t(x.count)) % std::size_t(y.count));
        int iz = int(flat / (std::size_t(x.count) * std::size_t(y.count)));
        return {coordinate(x, ix), coordinate(y, iy), coordinate(z, iz)};
    }
};

struct FieldMap {
    GridSpec grid;
    std::vector<FieldSample> samples;  // grid order, x fastest
};

/// Newton iteration on B(p) = 0 using the field Jacobian, with step
/// halving (up to 10 per iteration) when |B| does not decrease.
/// Converges when |B| < 1e-13 * characteristic_field(a); at most 50
/// iterations, otherwise NoConvergenceError with the final residual.
Vec3 find_zero(const ConductorAssembly& a, const Vec3& guess);

/// Locates the zero and eigendecomposes the symmetrized Jacobian there.
TrapReport trap_report(const ConductorAssembly& a, const Vec3& guess);

/// Samples the field on every grid point, deterministic x-fastest order.
FieldMap field_map(const ConductorAssembly& a, const GridSpec& grid);

struct GradientCurrentRow {
    double current;   // [A]
    double gradient;  // strong-axis gradient magnitude [T/m]
};

struct GradientCurrentTable {
    std::vector<GradientCurrentRow> rows;
    double slope = 0.0;               // least-squares gradient/current [T/m/A]
    double linearity_residual = 0.0;  // max |g - slope*I| / max |g|
};

/// Strong-axis gradient at the trap zero for each drive current.
GradientCurrentTable gradient_vs_current(const ConductorAssembly& a,
                                         std::span<const double> currents,
                                         const Vec3& guess = {});

}  // namespace quadtrap
