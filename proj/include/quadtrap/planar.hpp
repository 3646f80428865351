#pragma once

#include <span>
#include <vector>

#include "quadtrap/device.hpp"
#include "quadtrap/errors.hpp"

namespace quadtrap {

/// Two concentric in-plane loops generating an out-of-plane quadrupole
/// zero. Dimensionless: radii in units of the reference radius R,
/// currents in units of the reference current I, z0 in units of R.
struct PlanarConfig {
    double r1, r2;  // r1 < r2
    double i1, i2;  // i1 * i2 < 0
    double z0;      // zero position above the plane
};

/// Result of the constrained 2D-vs-3D comparison at equal power.
struct PlanarOptimum {
    PlanarConfig config;
    double gradient_2d;     // [T/m] at the reference scale
    double gradient_3d;     // [T/m] anti-Helmholtz reference
    double gradient_ratio;  // gradient_3d / gradient_2d, > 1
    double power_ratio;     // planar power needed to match the 3D gradient
};

/// One point of the zero-curvature feasible curve, equal-power
/// normalized.
struct FeasiblePoint {
    double r1, r2, i1, i2;
    double gradient;  // dimensionless |dB_z/dz| at z0
};

struct CurrentSolve {
    double ratio;               // i2 / i1 fixed by the zero-field condition
    double curvature_residual;  // B_z''(z0) per unit i1, dimensionless
};

/// Fixes i2/i1 from B_z(z0) = 0 and reports the on-axis curvature
/// residual for that ratio. Zero residual marks the feasible curve.
CurrentSolve planar_current_solve(double r1, double r2, double z0);

struct PlanarSearchOptions {
    double r1_min = 0.2;
    double r1_max = 4.0;
    double r2_max = 8.0;
    double coarse_step = 0.005;  // r1 scan resolution
};

/// Maximizes the planar gradient at z0 over the zero-curvature feasible
/// curve under the equal-power constraint r1 i1^2 + r2 i2^2 = 2.
/// Outer scan over r1 with golden-section refinement to 1e-6; inner
/// bisection for r2 to 1e-10. `sweep`, when non-null, receives the
/// coarse feasible curve for plotting.
PlanarOptimum optimize_planar(double z0, double reference_radius = 1.0,
                              double reference_current = 1.0,
                              const PlanarSearchOptions& opts = {},
                              std::vector<FeasiblePoint>* sweep = nullptr);

/// Closed-form anti-Helmholtz axial gradient 48 mu0 I / (25 sqrt(5) R^2)
/// for loop distance d = R.
double anti_helmholtz_gradient(double radius_m, double current_a);

struct ScalingRow {
    double scale;
    double current;     // [A] required to hold the target gradient
    double resistance;  // [Ohm]
    double power;       // [W]
};

struct ScalingTable {
    std::vector<ScalingRow> rows;
    double current_exponent;  // fitted d ln I / d ln s (expected 2)
    double power_exponent;    // fitted d ln P / d ln s (expected 3)
};

/// Miniaturization study: for each scale the current required to hold
/// `target_gradient` in an anti-Helmholtz pair of radius
/// scale * reference_radius, the scaled conductor resistance
/// (length ~ s, cross section ~ s^2) and the Ohmic power.
ScalingTable scaling_study(std::span<const double> scales,
                           double target_gradient_t_per_m,
                           const ConductorPath& reference_path,
                           double reference_radius = 1.0);

}  // namespace quadtrap
