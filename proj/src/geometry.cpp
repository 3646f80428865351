#include "quadtrap/geometry.hpp"

#include <cmath>

namespace quadtrap {

namespace {

constexpr double kAxisUnitTolerance = 1e-12;

void validate_loop(const CircularLoop& loop, std::size_t index,
                   std::vector<Violation>& out) {
    if (!loop.center.finite() || !loop.axis.finite() ||
        !std::isfinite(loop.radius) || !std::isfinite(loop.current))
        out.push_back({index, "loop fields must be finite"});
    if (!(loop.radius > 0.0)) out.push_back({index, "radius > 0"});
    if (std::abs(loop.axis.norm() - 1.0) > kAxisUnitTolerance)
        out.push_back({index, "|axis| = 1"});
}

void validate_segment(const StraightSegment& seg, std::size_t index,
                      std::vector<Violation>& out) {
    if (!seg.start.finite() || !seg.end.finite() || !std::isfinite(seg.current))
        out.push_back({index, "segment fields must be finite"});
    if ((seg.end - seg.start).norm() == 0.0)
        out.push_back({index, "degenerate segment"});
}

}  // namespace

std::vector<Violation> validate_assembly(const ConductorAssembly& a) {
    std::vector<Violation> violations;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, CircularLoop>)
                    validate_loop(el, i, violations);
                else
                    validate_segment(el, i, violations);
            },
            a.elements()[i]);
    }
    return violations;
}

ConductorAssembly scale_assembly(const ConductorAssembly& a, double s) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw InvalidArgumentError("scale factor must be positive");
    std::vector<Element> scaled;
    scaled.reserve(a.size());
    for (const auto& el : a.elements()) {
        if (const auto* loop = std::get_if<CircularLoop>(&el)) {
            scaled.push_back(CircularLoop{loop->center * s, loop->axis,
                                          loop->radius * s, loop->current});
        } else {
            const auto& seg = std::get<StraightSegment>(el);
            scaled.push_back(StraightSegment{seg.start * s, seg.end * s, seg.current});
        }
    }
    return {std::move(scaled), a.label(), a.drive_current()};
}

ConductorAssembly with_drive_current(const ConductorAssembly& a, double current) {
    if (!std::isfinite(current) || current == 0.0)
        throw InvalidArgumentError("drive current must be finite and nonzero");
    double factor = current / a.drive_current();
    std::vector<Element> scaled;
    scaled.reserve(a.size());
    for (const auto& el : a.elements()) {
        if (const auto* loop = std::get_if<CircularLoop>(&el)) {
            CircularLoop l = *loop;
            l.current *= factor;
            scaled.push_back(l);
        } else {
            StraightSegment s = std::get<StraightSegment>(el);
            s.current *= factor;
            scaled.push_back(s);
        }
    }
    return {std::move(scaled), a.label(), current};
}

ConductorAssembly build_anti_helmholtz(double radius_m, double current_a) {
    if (!(radius_m > 0.0) || !std::isfinite(radius_m))
        throw InvalidArgumentError("anti-Helmholtz radius must be positive");
    if (!std::isfinite(current_a))
        throw InvalidArgumentError("current must be finite");
    const Vec3 zhat{0.0, 0.0, 1.0};
    std::vector<Element> elements{
        CircularLoop{{0.0, 0.0, radius_m / 2.0}, zhat, radius_m, current_a},
        CircularLoop{{0.0, 0.0, -radius_m / 2.0}, zhat, radius_m, -current_a},
    };
    return {std::move(elements), "anti-helmholtz",
            current_a != 0.0 ? current_a : 1.0};
}

ConductorAssembly build_cylinder_trap(const CylinderTrapParams& p) {
    if (!(p.wire_separation > 0.0) || !(p.loop_radius > 0.0) ||
        !(p.plane_separation > 0.0))
        throw InvalidArgumentError("cylinder trap lengths must be positive");
    if (!std::isfinite(p.current))
        throw InvalidArgumentError("current must be finite");

    const double d = p.wire_separation / 2.0;
    const double half = p.plane_separation / 2.0;
    const double i = p.current;
    const Vec3 zhat{0.0, 0.0, 1.0};

    // Four straight conductors along z on the corners of a square,
    // alternating sign around the square; then the counter-propagating
    // loop pair in the planes z = +-half.
    std::vector<Element> elements{
        StraightSegment{{d, d, -half}, {d, d, half}, i},
        StraightSegment{{-d, d, -half}, {-d, d, half}, -i},
        StraightSegment{{-d, -d, -half}, {-d, -d, half}, i},
        StraightSegment{{d, -d, -half}, {d, -d, half}, -i},
        CircularLoop{{0.0, 0.0, half}, zhat, p.loop_radius, i},
        CircularLoop{{0.0, 0.0, -half}, zhat, p.loop_radius, -i},
    };
    return {std::move(elements), "cylinder-trap", i != 0.0 ? i : 1.0};
}

}  // namespace quadtrap
