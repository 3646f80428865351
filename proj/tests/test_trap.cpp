#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "quadtrap/planar.hpp"
#include "quadtrap/trap.hpp"

using namespace quadtrap;

namespace {

const Vec3 kZ{0.0, 0.0, 1.0};

Vec3 rotate(const Mat3& r, const Vec3& v) { return r * v; }

Mat3 rotation_zx(double about_z, double about_x) {
    double cz = std::cos(about_z), sz = std::sin(about_z);
    double cx = std::cos(about_x), sx = std::sin(about_x);
    Mat3 rz, rx, out;
    rz.m = {{{cz, -sz, 0}, {sz, cz, 0}, {0, 0, 1}}};
    rx.m = {{{1, 0, 0}, {0, cx, -sx}, {0, sx, cx}}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            out(i, j) = 0.0;
            for (int k = 0; k < 3; ++k) out(i, j) += rz(i, k) * rx(k, j);
        }
    return out;
}

ConductorAssembly rotated(const ConductorAssembly& a, const Mat3& r) {
    std::vector<Element> elements;
    for (const auto& el : a.elements()) {
        if (const auto* loop = std::get_if<CircularLoop>(&el)) {
            elements.push_back(CircularLoop{rotate(r, loop->center),
                                            rotate(r, loop->axis), loop->radius,
                                            loop->current});
        } else {
            const auto& seg = std::get<StraightSegment>(el);
            elements.push_back(StraightSegment{rotate(r, seg.start),
                                               rotate(r, seg.end), seg.current});
        }
    }
    return {std::move(elements), a.label(), a.drive_current()};
}

ConductorAssembly planar_pair_from_optimum(const PlanarOptimum& opt) {
    return {{CircularLoop{{0, 0, 0}, kZ, opt.config.r1, opt.config.i1},
             CircularLoop{{0, 0, 0}, kZ, opt.config.r2, opt.config.i2}},
            "planar-optimum"};
}

}  // namespace

TEST_CASE("find_zero converges to the anti-Helmholtz center") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    Vec3 zero = find_zero(a, {0.1, -0.05, 0.2});
    CHECK(zero.norm() < 1e-10);
}

TEST_CASE("find_zero is guess independent inside the basin") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    const Vec3 guesses[] = {{0.15, 0.1, -0.05}, {-0.2, 0.0, 0.0},
                            {0.05, -0.18, 0.08}, {0.0, 0.0, 0.19}};
    Vec3 reference = find_zero(a, {0.02, 0.03, -0.04});
    for (const Vec3& g : guesses) {
        Vec3 z = find_zero(a, g);
        CHECK((z - reference).norm() < 1e-10);
    }
}

TEST_CASE("find_zero locates the planar optimum zero at z = R/2") {
    PlanarOptimum opt = optimize_planar(0.5);
    auto pair = planar_pair_from_optimum(opt);
    Vec3 zero = find_zero(pair, {0.0, 0.0, 0.4});
    CHECK(std::abs(zero.z - 0.5) < 1e-6);
    CHECK(std::hypot(zero.x, zero.y) < 1e-8);
}

TEST_CASE("find_zero recovers the cylinder trap center from a 1 mm offset") {
    auto a = build_cylinder_trap();
    Vec3 zero = find_zero(a, {1e-3, 0.5e-3, -1e-3});
    CHECK(zero.norm() < 1e-10 * 1e3);  // well below a nanometre
}

TEST_CASE("find_zero rejects a zero-current assembly") {
    ConductorAssembly dead({CircularLoop{{0, 0, 0}, kZ, 1.0, 0.0},
                            CircularLoop{{0, 0, 0.5}, kZ, 1.0, 0.0}},
                           "dead");
    CHECK_THROWS_AS(find_zero(dead, {0.1, 0.0, 0.0}), DegenerateError);
}

TEST_CASE("trap_report of the ideal anti-Helmholtz pair") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    TrapReport r = trap_report(a, {0.05, -0.02, 0.1});

    CHECK(r.ratio[0] == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(r.ratio[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.ratio[2] == doctest::Approx(1.0).epsilon(1e-6));

    // strong axis is the coil axis
    CHECK(std::abs(r.axes[0].dot(kZ)) == doctest::Approx(1.0).epsilon(1e-9));
    // eigenvalues sum to zero (trace free)
    double sum = r.eigenvalues[0] + r.eigenvalues[1] + r.eigenvalues[2];
    CHECK(std::abs(sum) < 1e-8 * std::abs(r.eigenvalues[0]));
    // strong axis first
    CHECK(std::abs(r.eigenvalues[0]) >= std::abs(r.eigenvalues[1]));
    CHECK(r.eigenvalues[1] >= r.eigenvalues[2]);
}

TEST_CASE("trap_report of the cylinder trap: -2:1:1 within 5 percent") {
    auto a = build_cylinder_trap();
    TrapReport r = trap_report(a, {0, 0, 0});
    CHECK(r.ratio[0] == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(r.ratio[1] == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.ratio[2] == doctest::Approx(1.0).epsilon(0.05));
    // defaults are tuned to the 15 A -> 10 G/cm operating point
    CHECK(std::abs(r.eigenvalues[0]) == doctest::Approx(0.10).epsilon(0.01));
}

TEST_CASE("trap_report rejects an assembly with zero currents") {
    ConductorAssembly dead({CircularLoop{{0, 0, 0.5}, kZ, 1.0, 0.0},
                            CircularLoop{{0, 0, -0.5}, kZ, 1.0, 0.0}},
                           "dead");
    CHECK_THROWS_AS(trap_report(dead, {0, 0, 0}), DegenerateError);
}

TEST_CASE("trap_report axes have a deterministic sign convention") {
    auto a = build_cylinder_trap();
    TrapReport r = trap_report(a, {0, 0, 0});
    for (const Vec3& axis : r.axes) {
        double first = std::abs(axis.x) > 1e-12   ? axis.x
                       : std::abs(axis.y) > 1e-12 ? axis.y
                                                  : axis.z;
        CHECK(first > 0.0);
    }
}

TEST_CASE("rigid rotation rotates axes and preserves eigenvalues") {
    auto a = build_cylinder_trap();
    TrapReport base = trap_report(a, {0, 0, 0});

    Mat3 r = rotation_zx(0.5, 0.3);
    auto b = rotated(a, r);
    TrapReport moved = trap_report(b, {0, 0, 0});

    for (int i = 0; i < 3; ++i) {
        CHECK(moved.eigenvalues[i] ==
              doctest::Approx(base.eigenvalues[i]).epsilon(1e-10));
        Vec3 expected = rotate(r, base.axes[i]);
        CHECK(std::abs(expected.dot(moved.axes[i])) ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("field_map: single point at the anti-Helmholtz zero") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    GridSpec grid{{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
    FieldMap map = field_map(a, grid);
    REQUIRE(map.samples.size() == 1);
    CHECK(map.samples[0].b.norm() < 1e-18);
}

TEST_CASE("field_map line through the zero is linear to 1 percent") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    GridSpec grid{{0, 0, 1}, {0, 0, 1}, {-0.1, 0.1, 101}};
    FieldMap map = field_map(a, grid);
    REQUIRE(map.samples.size() == 101);

    double slope = field_jacobian(a, {0, 0, 0}).m(2, 2);
    for (const auto& s : map.samples) {
        if (std::abs(s.point.z) < 1e-12) continue;
        CHECK(s.b.z == doctest::Approx(slope * s.point.z).epsilon(0.01));
    }

    // least-squares slope against the Jacobian entry, within 0.1%
    double szz = 0.0, szb = 0.0;
    for (const auto& s : map.samples) {
        szz += s.point.z * s.point.z;
        szb += s.point.z * s.b.z;
    }
    CHECK(szb / szz == doctest::Approx(slope).epsilon(1e-3));
}

TEST_CASE("field_map ordering is x-fastest row major") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    GridSpec grid{{-0.1, 0.1, 3}, {-0.1, 0.1, 2}, {0.05, 0.05, 1}};
    FieldMap map = field_map(a, grid);
    REQUIRE(map.samples.size() == 6);
    CHECK(map.samples[0].point.x == -0.1);
    CHECK(map.samples[1].point.x == 0.0);
    CHECK(map.samples[2].point.x == 0.1);
    CHECK(map.samples[0].point.y == -0.1);
    CHECK(map.samples[3].point.y == 0.1);
}

TEST_CASE("field_map names the singular grid index") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    // second point lands exactly on the top loop at (1, 0, 0.5)
    GridSpec grid{{0.5, 1.0, 2}, {0, 0, 1}, {0.5, 0.5, 1}};
    try {
        field_map(a, grid);
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(std::string(e.what()).find("grid index 1") != std::string::npos);
    }
}

TEST_CASE("gradient_vs_current is exactly linear for 1:2:4") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    const double currents[] = {1.0, 2.0, 4.0};
    GradientCurrentTable t = gradient_vs_current(a, currents);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[1].gradient == 2.0 * t.rows[0].gradient);
    CHECK(t.rows[2].gradient == 4.0 * t.rows[0].gradient);
    CHECK(t.linearity_residual < 1e-12);
}

TEST_CASE("cylinder trap delivers 10 G/cm at 15 A and 33.3 G/cm at 50 A") {
    auto a = build_cylinder_trap();
    const double currents[] = {15.0, 50.0};
    GradientCurrentTable t = gradient_vs_current(a, currents);
    // 1 G/cm = 1e-2 T/m
    CHECK(t.rows[0].gradient * 1e2 == doctest::Approx(10.0).epsilon(0.01));
    CHECK(t.rows[1].gradient * 1e2 == doctest::Approx(33.33).epsilon(0.01));
    CHECK(t.linearity_residual < 1e-9);
}

TEST_CASE("gradient_vs_current rejects non-positive currents") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    const double bad[] = {1.0, -2.0};
    CHECK_THROWS_AS(gradient_vs_current(a, bad), InvalidArgumentError);
    CHECK_THROWS_AS(gradient_vs_current(a, std::span<const double>{}),
                    InvalidArgumentError);
}
