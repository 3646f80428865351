#pragma once

#include <array>

#include "quadtrap/geometry.hpp"

namespace quadtrap {

struct FieldSample {
    Vec3 point;  // [m]
    Vec3 b;      // [T]
};

/// Dense 3x3 matrix, row major.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }

    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
    Mat3 transposed() const {
        Mat3 t;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) t.m[r][c] = m[c][r];
        return t;
    }
    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& row : m)
            for (double v : row) s += v * v;
        return std::sqrt(s);
    }
    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

/// Spatial derivative dB_i/dx_j of the field at a point. Trace-free by
/// div B = 0 and symmetric in vacuum (curl B = 0), both up to numerical
/// tolerance ~1e-8 * |m|.
struct GradientTensor {
    Mat3 m;      // [T/m]
    Vec3 point;  // [m]
};

struct EllipticKE {
    double k;  // complete elliptic integral of the first kind K(m)
    double e;  // complete elliptic integral of the second kind E(m)
};

/// Complete elliptic integrals K(m), E(m) with parameter m = k^2,
/// by arithmetic-geometric mean iteration. Requires 0 <= m < 1.
EllipticKE elliptic_ke(double m);

/// Axial field component of a loop at signed distance z from its plane,
/// measured along the loop axis: mu0 I R^2 / (2 (R^2 + z^2)^(3/2)).
double loop_field_on_axis(const CircularLoop& loop, double z);

/// Exact off-axis field of a circular filament (elliptic integrals in
/// the loop's local frame). Throws SingularityError within 1e-9 m of
/// the filament.
Vec3 loop_field(const CircularLoop& loop, const Vec3& p);

/// Analytic field of a finite straight filament. Throws
/// SingularityError within 1e-9 m of the conductor.
Vec3 segment_field(const StraightSegment& seg, const Vec3& p);

/// Superposition over all elements, in element order. A singularity is
/// reported with the index of the offending element.
Vec3 assembly_field(const ConductorAssembly& a, const Vec3& p);

/// Jacobian dB_i/dx_j by Richardson-extrapolated central differences.
/// Step: h = max(1e-6 m, 1e-4 * characteristic_size(a)).
GradientTensor field_jacobian(const ConductorAssembly& a, const Vec3& p);

/// Second directional derivative of the axis-component of B along
/// `axis` (unit vector), via a 5-point stencil.
double axial_second_derivative(const ConductorAssembly& a, const Vec3& p,
                               const Vec3& axis);

/// Largest element extent: loop diameter or segment length. Used to set
/// finite-difference steps.
double characteristic_size(const ConductorAssembly& a);

/// Sum of per-element characteristic field magnitudes (mu0 |I| / 2R for
/// loops, mu0 |I| / (pi L) for segments). Sets the absolute scale for
/// "the field vanishes" tests in zero finding.
double characteristic_field(const ConductorAssembly& a);

}  // namespace quadtrap
