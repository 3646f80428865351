#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "quadtrap/errors.hpp"

namespace quadtrap {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const {
        double n = norm();
        if (n == 0.0) throw InvalidArgumentError("cannot normalize zero vector");
        return *this / n;
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Physical constants, SI. Fixed at compile time.
namespace constants {
inline constexpr double pi = 3.14159265358979323846;
/// Vacuum permeability [T m / A].
inline constexpr double mu0 = 4.0e-7 * pi;
/// Boltzmann constant [J / K].
inline constexpr double k_boltzmann = 1.380649e-23;
/// Mass of a rubidium-87 atom [kg].
inline constexpr double mass_rb87 = 1.44316e-25;
/// Natural linewidth of the Rb-87 D2 cooling transition [Hz].
inline constexpr double natural_linewidth_hz = 6.065e6;
}  // namespace constants

/// Circular filament loop. Current is signed by the right-hand rule
/// about `axis`; all lengths in metres, current in amperes.
struct CircularLoop {
    Vec3 center;
    Vec3 axis{0.0, 0.0, 1.0};  // unit vector
    double radius = 0.0;
    double current = 0.0;
};

/// Finite straight filament; current flows start -> end.
struct StraightSegment {
    Vec3 start;
    Vec3 end;
    double current = 0.0;
};

using Element = std::variant<CircularLoop, StraightSegment>;

/// Immutable collection of current-carrying primitives acting as one
/// field source. `drive_current` is the nominal supply current in
/// amperes; rescaling the drive scales every element current
/// proportionally (see with_drive_current).
class ConductorAssembly {
public:
    ConductorAssembly(std::vector<Element> elements, std::string label,
                      double drive_current = 1.0)
        : elements_(std::move(elements)),
          label_(std::move(label)),
          drive_current_(drive_current) {
        if (elements_.empty())
            throw InvalidArgumentError("assembly must contain at least one element");
        if (!(drive_current_ != 0.0) || !std::isfinite(drive_current_))
            throw InvalidArgumentError("drive current must be finite and nonzero");
    }

    const std::vector<Element>& elements() const { return elements_; }
    const std::string& label() const { return label_; }
    double drive_current() const { return drive_current_; }
    std::size_t size() const { return elements_.size(); }

private:
    std::vector<Element> elements_;
    std::string label_;
    double drive_current_;
};

/// One invariant violation found by validate_assembly.
struct Violation {
    std::size_t element;  // index into the assembly
    std::string rule;
};

/// Checks every element invariant; never throws. Empty result means valid.
std::vector<Violation> validate_assembly(const ConductorAssembly& a);

/// Multiplies every position and length by s; currents unchanged.
ConductorAssembly scale_assembly(const ConductorAssembly& a, double s);

/// Returns a copy with all element currents scaled so the drive current
/// becomes `current` (ratio current / a.drive_current()).
ConductorAssembly with_drive_current(const ConductorAssembly& a, double current);

/// Two coaxial loops on the z axis at z = +-R/2, currents +I (top) and
/// -I (bottom). The field vanishes at the origin.
ConductorAssembly build_anti_helmholtz(double radius_m, double current_a);

/// Parameterized model of the printed cylinder trap: four straight
/// conductors with alternating currents on the corners of a square,
/// plus two counter-propagating loops in parallel planes orthogonal to
/// them. Defaults give ~0.667 G/cm per ampere on the strong axis with a
/// near-ideal -2:1:1 eigenvalue ratio, and a linear trapping region of
/// roughly (5 mm)^3 around the central field zero.
struct CylinderTrapParams {
    double wire_separation = 16.85e-3;  // side of the conductor square [m]
    double loop_radius = 17.0e-3;       // [m]
    double plane_separation = 24.0e-3;  // loop plane spacing = conductor length [m]
    double current = 15.0;              // drive current [A]
};

ConductorAssembly build_cylinder_trap(const CylinderTrapParams& p = {});

}  // namespace quadtrap
