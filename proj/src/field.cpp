#include "quadtrap/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quadtrap {

namespace {

constexpr double kSingularityGuard = 1e-9;  // [m] minimum distance to a filament

// Shared by loop_field_on_axis and the on-axis reduction of loop_field
// so the two agree bit for bit.
inline double loop_axis_bz(double radius, double current, double z) {
    double w = radius * radius + z * z;
    return constants::mu0 * current * radius * radius / (2.0 * w * std::sqrt(w));
}

// Deterministic orthonormal triad (e1, e2, u) from a unit axis u; the
// auxiliary vector is the coordinate axis of u's smallest component.
struct Frame {
    Vec3 e1, e2, u;
};

Frame frame_from_axis(const Vec3& axis) {
    Vec3 u = axis.normalized();
    double ax = std::abs(u.x), ay = std::abs(u.y), az = std::abs(u.z);
    Vec3 aux{1.0, 0.0, 0.0};
    if (ay < ax && ay <= az)
        aux = {0.0, 1.0, 0.0};
    else if (az < ax && az < ay)
        aux = {0.0, 0.0, 1.0};
    Vec3 e1 = aux.cross(u).normalized();
    Vec3 e2 = u.cross(e1);
    return {e1, e2, u};
}

Vec3 element_field(const Element& el, const Vec3& p) {
    if (const auto* loop = std::get_if<CircularLoop>(&el)) return loop_field(*loop, p);
    return segment_field(std::get<StraightSegment>(el), p);
}

}  // namespace

EllipticKE elliptic_ke(double m) {
    if (!(m >= 0.0)) throw DomainError("elliptic parameter m must be >= 0");
    if (m >= 1.0) throw DomainError("elliptic parameter m must be < 1 (K diverges)");

    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    double c_sq_sum = 0.5 * m;  // 2^(n-1) c_n^2 running sum, n = 0 term
    double pow2 = 0.5;
    for (int iter = 0; iter < 64; ++iter) {
        double c = 0.5 * (a - b);
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        pow2 *= 2.0;
        c_sq_sum += pow2 * c * c;
        a = an;
        b = bn;
        if (a - b <= 1e-15 * a) break;
    }
    double k = constants::pi / (2.0 * a);
    return {k, k * (1.0 - c_sq_sum)};
}

double loop_field_on_axis(const CircularLoop& loop, double z) {
    return loop_axis_bz(loop.radius, loop.current, z);
}

Vec3 loop_field(const CircularLoop& loop, const Vec3& p) {
    const double radius = loop.radius;
    Frame f = frame_from_axis(loop.axis);
    Vec3 d = p - loop.center;
    double z = d.dot(f.u);
    Vec3 rho_vec = d - z * f.u;
    double rho = rho_vec.norm();

    double wire_dist_sq = (rho - radius) * (rho - radius) + z * z;
    if (wire_dist_sq < kSingularityGuard * kSingularityGuard)
        throw SingularityError("field point on the loop filament");

    // Near the axis the elliptic form loses digits to cancellation in
    // B_rho; switch to the paraxial expansion of the on-axis field.
    if (rho <= 1e-4 * radius) {
        double w = radius * radius + z * z;
        double c = constants::mu0 * loop.current * radius * radius / 2.0;
        double w52 = w * w * std::sqrt(w);
        double b0 = c / (w * std::sqrt(w));
        double b0p = c * (-3.0 * z) / w52;
        double b0pp = c * 3.0 * (4.0 * z * z - radius * radius) / (w52 * w);
        double b0ppp = c * 15.0 * z * (3.0 * radius * radius - 4.0 * z * z) / (w52 * w * w);
        double bz = b0 - 0.25 * rho * rho * b0pp;
        if (rho == 0.0) return loop_axis_bz(radius, loop.current, z) * f.u;
        double brho = -0.5 * rho * b0p + rho * rho * rho / 16.0 * b0ppp;
        return brho / rho * rho_vec + bz * f.u;
    }

    double den1 = (radius + rho) * (radius + rho) + z * z;
    double den2 = (radius - rho) * (radius - rho) + z * z;
    double m = 4.0 * radius * rho / den1;
    EllipticKE ke = elliptic_ke(m);
    double pref = constants::mu0 * loop.current / (2.0 * constants::pi * std::sqrt(den1));
    double r_sq = radius * radius;
    double bz = pref * ((r_sq - rho * rho - z * z) / den2 * ke.e + ke.k);
    double brho = pref * (z / rho) * ((r_sq + rho * rho + z * z) / den2 * ke.e - ke.k);
    return brho / rho * rho_vec + bz * f.u;
}

Vec3 segment_field(const StraightSegment& seg, const Vec3& p) {
    Vec3 line = seg.end - seg.start;
    double len_sq = line.dot(line);
    if (len_sq == 0.0) throw InvalidArgumentError("degenerate segment");

    // Distance check against the finite segment (clamped projection).
    Vec3 to_p = p - seg.start;
    double t = std::clamp(to_p.dot(line) / len_sq, 0.0, 1.0);
    Vec3 closest = seg.start + t * line;
    if ((p - closest).norm() < kSingularityGuard)
        throw SingularityError("field point on the segment conductor");

    // Hanson-Hirshman form: stable everywhere off the conductor.
    Vec3 ri = p - seg.start;
    Vec3 rf = p - seg.end;
    double ni = ri.norm();
    double nf = rf.norm();
    double denom = ni * nf * (ni * nf + ri.dot(rf));
    Vec3 cr = ri.cross(rf);
    return constants::mu0 * seg.current / (4.0 * constants::pi) * (ni + nf) / denom * cr;
}

Vec3 assembly_field(const ConductorAssembly& a, const Vec3& p) {
    Vec3 total{};
    const auto& elements = a.elements();
    for (std::size_t i = 0; i < elements.size(); ++i) {
        try {
            total += element_field(elements[i], p);
        } catch (const SingularityError& e) {
            throw SingularityError("element " + std::to_string(i) + ": " + e.what());
        }
    }
    return total;
}

double characteristic_size(const ConductorAssembly& a) {
    double size = 0.0;
    for (const auto& el : a.elements()) {
        if (const auto* loop = std::get_if<CircularLoop>(&el))
            size = std::max(size, 2.0 * loop->radius);
        else
            size = std::max(size, (std::get<StraightSegment>(el).end -
                                   std::get<StraightSegment>(el).start)
                                      .norm());
    }
    return size;
}

double characteristic_field(const ConductorAssembly& a) {
    double scale = 0.0;
    for (const auto& el : a.elements()) {
        if (const auto* loop = std::get_if<CircularLoop>(&el)) {
            if (loop->radius > 0.0)
                scale += constants::mu0 * std::abs(loop->current) / (2.0 * loop->radius);
        } else {
            const auto& seg = std::get<StraightSegment>(el);
            double len = (seg.end - seg.start).norm();
            if (len > 0.0)
                scale += constants::mu0 * std::abs(seg.current) / (constants::pi * len);
        }
    }
    return scale;
}

GradientTensor field_jacobian(const ConductorAssembly& a, const Vec3& p) {
    double h = std::max(1e-6, 1e-4 * characteristic_size(a));
    const Vec3 units[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    Mat3 m;
    for (int j = 0; j < 3; ++j) {
        auto central = [&](double step) {
            Vec3 bp = assembly_field(a, p + step * units[j]);
            Vec3 bm = assembly_field(a, p - step * units[j]);
            return (bp - bm) / (2.0 * step);
        };
        Vec3 coarse = central(h);
        Vec3 fine = central(h / 2.0);
        Vec3 col = (4.0 * fine - coarse) / 3.0;  // one Richardson level
        m(0, j) = col.x;
        m(1, j) = col.y;
        m(2, j) = col.z;
    }
    return {m, p};
}

double axial_second_derivative(const ConductorAssembly& a, const Vec3& p,
                               const Vec3& axis) {
    if (std::abs(axis.norm() - 1.0) > 1e-9)
        throw InvalidArgumentError("axis must be a unit vector");
    double h = std::max(1e-6, 1e-4 * characteristic_size(a));
    auto f = [&](double t) { return assembly_field(a, p + t * axis).dot(axis); };
    return (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) /
           (12.0 * h * h);
}

}  // namespace quadtrap
