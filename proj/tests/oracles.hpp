// Test-only reference computations, kept independent of the library's
// analytic field formulas: everything here goes through adaptive
// quadrature of the defining integrals.
#pragma once

#include <functional>

#include "quadtrap/geometry.hpp"

namespace oracles {

/// Adaptive Simpson integration to an absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol);

/// Biot-Savart line integral around the loop, by quadrature.
quadtrap::Vec3 loop_field_quadrature(const quadtrap::CircularLoop& loop,
                                     const quadtrap::Vec3& p);

/// Biot-Savart line integral along the segment, by quadrature.
quadtrap::Vec3 segment_field_quadrature(const quadtrap::StraightSegment& seg,
                                        const quadtrap::Vec3& p);

/// Complete elliptic integrals from their defining integrals.
double elliptic_k_quadrature(double m);
double elliptic_e_quadrature(double m);

}  // namespace oracles
