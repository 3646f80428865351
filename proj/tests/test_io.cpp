#include <doctest.h>

#include <cmath>
#include <sstream>

#include "quadtrap/field.hpp"
#include "quadtrap/io.hpp"

using namespace quadtrap;

TEST_CASE("assembly JSON round trip") {
    auto a = build_cylinder_trap();
    auto doc = assembly_to_json(a);
    auto b = assembly_from_json(doc);
    CHECK(b.label() == a.label());
    CHECK(b.drive_current() == a.drive_current());
    REQUIRE(b.size() == a.size());
    Vec3 p{1e-3, 2e-3, -1e-3};
    CHECK((assembly_field(a, p) - assembly_field(b, p)).norm() == 0.0);
}

TEST_CASE("parse_assembly reads the documented schema") {
    const char* text = R"({
        "label": "pair",
        "drive_scale": 2.0,
        "elements": [
            {"type": "loop", "center": [0, 0, 0.5], "axis": [0, 0, 1],
             "radius": 1.0, "current": 2.0},
            {"type": "segment", "start": [0, 0, -1], "end": [0, 0, 1],
             "current": -2.0}
        ]
    })";
    auto a = parse_assembly(text);
    CHECK(a.label() == "pair");
    CHECK(a.drive_current() == 2.0);
    REQUIRE(a.size() == 2);
    CHECK(std::get<CircularLoop>(a.elements()[0]).radius == 1.0);
    CHECK(std::get<StraightSegment>(a.elements()[1]).current == -2.0);
}

TEST_CASE("parse_assembly normalizes the loop axis") {
    const char* text = R"({"elements": [{"type": "loop", "center": [0,0,0],
        "axis": [0, 0, 4], "radius": 1.0, "current": 1.0}]})";
    auto a = parse_assembly(text);
    CHECK(std::get<CircularLoop>(a.elements()[0]).axis.z == 1.0);
}

TEST_CASE("parse_assembly reports line and column on bad JSON") {
    try {
        parse_assembly("{\n  \"label\": \"x\",\n  oops\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column >= 3);
    }
}

TEST_CASE("parse_assembly rejects schema violations") {
    CHECK_THROWS_AS(parse_assembly(R"({"elements": []})"), InvalidDataError);
    CHECK_THROWS_AS(parse_assembly(R"({"label": 3, "elements": []})"),
                    InvalidDataError);
    CHECK_THROWS_AS(
        parse_assembly(R"({"elements": [{"type": "blob", "current": 1}]})"),
        InvalidDataError);
    CHECK_THROWS_AS(
        parse_assembly(
            R"({"elements": [{"type": "loop", "center": [0,0], "axis": [0,0,1],
                "radius": 1, "current": 1}]})"),
        InvalidDataError);
    // invariant violations surface as invalid data naming the element
    try {
        parse_assembly(
            R"({"elements": [{"type": "loop", "center": [0,0,0], "axis": [0,0,1],
                "radius": -1, "current": 1}]})");
        FAIL("expected InvalidDataError");
    } catch (const InvalidDataError& e) {
        CHECK(std::string(e.what()).find("element 0") != std::string::npos);
        CHECK(std::string(e.what()).find("radius > 0") != std::string::npos);
    }
}

TEST_CASE("grid spec parsing") {
    GridSpec g = parse_grid_spec("x=-5:5:101,y=0,z=1.5");
    CHECK(g.x.lo == -5.0);
    CHECK(g.x.hi == 5.0);
    CHECK(g.x.count == 101);
    CHECK(g.y.count == 1);
    CHECK(g.y.lo == 0.0);
    CHECK(g.z.lo == 1.5);
    CHECK(g.point_count() == 101);

    // axes in any order
    GridSpec h = parse_grid_spec("z=0:1:3,x=2,y=-1:1:2");
    CHECK(h.z.count == 3);
    CHECK(h.x.lo == 2.0);
    CHECK(h.point_count() == 6);
}

TEST_CASE("grid spec errors") {
    CHECK_THROWS_AS(parse_grid_spec("x=0,y=0"), InvalidArgumentError);
    CHECK_THROWS_AS(parse_grid_spec("x=0,y=0,q=0"), InvalidArgumentError);
    CHECK_THROWS_AS(parse_grid_spec("x=0,x=1,y=0"), InvalidArgumentError);
    CHECK_THROWS_AS(parse_grid_spec("x=0:1,y=0,z=0"), InvalidArgumentError);
    CHECK_THROWS_AS(parse_grid_spec("x=0:1:1,y=0,z=0"), InvalidArgumentError);
    CHECK_THROWS_AS(parse_grid_spec("x=0:1:2.5,y=0,z=0"), InvalidArgumentError);
    CHECK_THROWS_AS(parse_grid_spec("x=a:1:5,y=0,z=0"), InvalidDataError);
}

TEST_CASE("format_double round trips") {
    const double values[] = {0.0,   1.0,      -2.5,       1.0 / 3.0,
                             1e-13, 6.25e-18, 1.0790115426878556e-6};
    for (double v : values) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.144) == "0.144");
    CHECK(format_double(10.0) == "10");
}

TEST_CASE("tof CSV reading") {
    std::istringstream in("t_s,sigma_m\n0,0.001\n0.004,0.0012\n0.008,0.0015\n");
    auto samples = read_tof_csv(in);
    REQUIRE(samples.size() == 3);
    CHECK(samples[1].t == 0.004);
    CHECK(samples[2].sigma == 0.0015);
}

TEST_CASE("tof CSV header and row errors") {
    std::istringstream bad_header("time,sig\n0,0.001\n");
    CHECK_THROWS_AS(read_tof_csv(bad_header), InvalidDataError);

    std::istringstream bad_row("t_s,sigma_m\n0,0.001\n0.004\n");
    try {
        read_tof_csv(bad_row);
        FAIL("expected InvalidDataError");
    } catch (const InvalidDataError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    std::istringstream bad_number("t_s,sigma_m\n0,zero\n");
    CHECK_THROWS_AS(read_tof_csv(bad_number), InvalidDataError);
}

TEST_CASE("profile CSV reading") {
    std::istringstream in("x,value\n-1,0.2\n0,1.0\n1,0.2\n");
    auto profile = read_profile_csv(in);
    REQUIRE(profile.size() == 3);
    CHECK(profile[1].second == 1.0);
}

TEST_CASE("field map CSV uses the selected units") {
    auto a = build_anti_helmholtz(1.0, 1.0);
    GridSpec grid{{0, 0, 1}, {0, 0, 1}, {0.1, 0.1, 1}};
    FieldMap map = field_map(a, grid);

    std::ostringstream gauss_mm;
    write_field_map_csv(gauss_mm, map, {true, true});
    std::string line = gauss_mm.str();
    CHECK(line.find("x,y,z,Bx,By,Bz,Bmag\n") == 0);
    CHECK(line.find("0,0,100,") != std::string::npos);  // z = 0.1 m = 100 mm

    std::ostringstream tesla_m;
    write_field_map_csv(tesla_m, map, {false, false});
    CHECK(tesla_m.str().find("0,0,0.1,") != std::string::npos);
}
