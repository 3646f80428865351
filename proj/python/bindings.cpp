#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "quadtrap/device.hpp"
#include "quadtrap/io.hpp"
#include "quadtrap/planar.hpp"
#include "quadtrap/trap.hpp"

namespace py = pybind11;
using namespace quadtrap;

namespace {

py::list mat3_to_list(const Mat3& m) {
    py::list rows;
    for (int r = 0; r < 3; ++r) {
        py::list row;
        for (int c = 0; c < 3; ++c) row.append(m(r, c));
        rows.append(row);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Magnetostatic quadrupole trap design toolkit";

    py::register_exception<Error>(m, "Error");

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"),
             py::arg("z"))
        .def_readonly("x", &Vec3::x)
        .def_readonly("y", &Vec3::y)
        .def_readonly("z", &Vec3::z)
        .def("norm", &Vec3::norm)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + format_double(v.x) + ", " + format_double(v.y) + ", " +
                   format_double(v.z) + ")";
        });

    py::class_<CircularLoop>(m, "CircularLoop")
        .def(py::init([](const Vec3& center, const Vec3& axis, double radius,
                         double current) {
                 return CircularLoop{center, axis, radius, current};
             }),
             py::arg("center"), py::arg("axis"), py::arg("radius"),
             py::arg("current"))
        .def_readonly("center", &CircularLoop::center)
        .def_readonly("axis", &CircularLoop::axis)
        .def_readonly("radius", &CircularLoop::radius)
        .def_readonly("current", &CircularLoop::current);

    py::class_<StraightSegment>(m, "StraightSegment")
        .def(py::init([](const Vec3& start, const Vec3& end, double current) {
                 return StraightSegment{start, end, current};
             }),
             py::arg("start"), py::arg("end"), py::arg("current"))
        .def_readonly("start", &StraightSegment::start)
        .def_readonly("end", &StraightSegment::end)
        .def_readonly("current", &StraightSegment::current);

    py::class_<ConductorAssembly>(m, "ConductorAssembly")
        .def_property_readonly("label", &ConductorAssembly::label)
        .def_property_readonly("drive_current", &ConductorAssembly::drive_current)
        .def("__len__", &ConductorAssembly::size);

    py::class_<CylinderTrapParams>(m, "CylinderTrapParams")
        .def(py::init([](double wire_separation, double loop_radius,
                         double plane_separation, double current) {
                 return CylinderTrapParams{wire_separation, loop_radius,
                                           plane_separation, current};
             }),
             py::arg("wire_separation") = CylinderTrapParams{}.wire_separation,
             py::arg("loop_radius") = CylinderTrapParams{}.loop_radius,
             py::arg("plane_separation") = CylinderTrapParams{}.plane_separation,
             py::arg("current") = CylinderTrapParams{}.current)
        .def_readonly("wire_separation", &CylinderTrapParams::wire_separation)
        .def_readonly("loop_radius", &CylinderTrapParams::loop_radius)
        .def_readonly("plane_separation", &CylinderTrapParams::plane_separation)
        .def_readonly("current", &CylinderTrapParams::current);

    m.def("build_anti_helmholtz", &build_anti_helmholtz, py::arg("radius"),
          py::arg("current"));
    m.def("build_cylinder_trap", &build_cylinder_trap,
          py::arg("params") = CylinderTrapParams{});
    m.def("scale_assembly", &scale_assembly, py::arg("assembly"), py::arg("scale"));
    m.def("with_drive_current", &with_drive_current, py::arg("assembly"),
          py::arg("current"));
    m.def("validate_assembly", [](const ConductorAssembly& a) {
        py::list out;
        for (const auto& v : validate_assembly(a))
            out.append(py::make_tuple(v.element, v.rule));
        return out;
    });

    m.def("elliptic_ke", [](double mm_) {
        EllipticKE ke = elliptic_ke(mm_);
        return py::make_tuple(ke.k, ke.e);
    }, py::arg("m"));
    m.def("loop_field_on_axis", &loop_field_on_axis, py::arg("loop"), py::arg("z"));
    m.def("loop_field", &loop_field, py::arg("loop"), py::arg("point"));
    m.def("segment_field", &segment_field, py::arg("segment"), py::arg("point"));
    m.def("assembly_field", &assembly_field, py::arg("assembly"), py::arg("point"));
    m.def("field_jacobian", [](const ConductorAssembly& a, const Vec3& p) {
        return mat3_to_list(field_jacobian(a, p).m);
    }, py::arg("assembly"), py::arg("point"));
    m.def("axial_second_derivative", &axial_second_derivative, py::arg("assembly"),
          py::arg("point"), py::arg("axis"));

    py::class_<TrapReport>(m, "TrapReport")
        .def_readonly("zero", &TrapReport::zero)
        .def_property_readonly("eigenvalues", [](const TrapReport& r) {
            return py::make_tuple(r.eigenvalues[0], r.eigenvalues[1],
                                  r.eigenvalues[2]);
        })
        .def_property_readonly("axes", [](const TrapReport& r) {
            return py::make_tuple(r.axes[0], r.axes[1], r.axes[2]);
        })
        .def_property_readonly("ratio", [](const TrapReport& r) {
            return py::make_tuple(r.ratio[0], r.ratio[1], r.ratio[2]);
        });

    m.def("find_zero", &find_zero, py::arg("assembly"), py::arg("guess"));
    m.def("trap_report", &trap_report, py::arg("assembly"), py::arg("guess"));
    m.def("gradient_vs_current", [](const ConductorAssembly& a,
                                    const std::vector<double>& currents,
                                    const Vec3& guess) {
        GradientCurrentTable t = gradient_vs_current(a, currents, guess);
        py::list rows;
        for (const auto& row : t.rows)
            rows.append(py::make_tuple(row.current, row.gradient));
        return py::make_tuple(rows, t.slope, t.linearity_residual);
    }, py::arg("assembly"), py::arg("currents"), py::arg("guess") = Vec3{});

    py::class_<PlanarOptimum>(m, "PlanarOptimum")
        .def_property_readonly("r1", [](const PlanarOptimum& o) { return o.config.r1; })
        .def_property_readonly("r2", [](const PlanarOptimum& o) { return o.config.r2; })
        .def_property_readonly("i1", [](const PlanarOptimum& o) { return o.config.i1; })
        .def_property_readonly("i2", [](const PlanarOptimum& o) { return o.config.i2; })
        .def_property_readonly("z0", [](const PlanarOptimum& o) { return o.config.z0; })
        .def_readonly("gradient_2d", &PlanarOptimum::gradient_2d)
        .def_readonly("gradient_3d", &PlanarOptimum::gradient_3d)
        .def_readonly("gradient_ratio", &PlanarOptimum::gradient_ratio)
        .def_readonly("power_ratio", &PlanarOptimum::power_ratio);

    m.def("planar_current_solve", [](double r1, double r2, double z0) {
        CurrentSolve s = planar_current_solve(r1, r2, z0);
        return py::make_tuple(s.ratio, s.curvature_residual);
    }, py::arg("r1"), py::arg("r2"), py::arg("z0"));
    m.def("optimize_planar",
          [](double z0, double reference_radius, double reference_current) {
              return optimize_planar(z0, reference_radius, reference_current);
          },
          py::arg("z0"), py::arg("reference_radius") = 1.0,
          py::arg("reference_current") = 1.0);
    m.def("anti_helmholtz_gradient", &anti_helmholtz_gradient, py::arg("radius"),
          py::arg("current"));

    py::class_<ConductorPath>(m, "ConductorPath")
        .def(py::init([](double length, double cross_section, double resistivity) {
                 return ConductorPath{length, cross_section, resistivity};
             }),
             py::arg("length"), py::arg("cross_section"),
             py::arg("resistivity") = ConductorPath{}.resistivity)
        .def_readonly("length", &ConductorPath::length)
        .def_readonly("cross_section", &ConductorPath::cross_section)
        .def_readonly("resistivity", &ConductorPath::resistivity);

    m.def("scaling_study", [](const std::vector<double>& scales, double target,
                              const ConductorPath& path, double reference_radius) {
        ScalingTable t = scaling_study(scales, target, path, reference_radius);
        py::list rows;
        for (const auto& r : t.rows)
            rows.append(py::make_tuple(r.scale, r.current, r.resistance, r.power));
        return py::make_tuple(rows, t.current_exponent, t.power_exponent);
    }, py::arg("scales"), py::arg("target_gradient"), py::arg("path"),
       py::arg("reference_radius") = 1.0);

    py::class_<DeviceCalibration>(m, "DeviceCalibration")
        .def(py::init<>())
        .def_readwrite("resistance", &DeviceCalibration::resistance)
        .def_readwrite("gradient_per_ampere", &DeviceCalibration::gradient_per_ampere);

    py::class_<AtomNumberModel>(m, "AtomNumberModel")
        .def(py::init<>())
        .def_readwrite("n_ref", &AtomNumberModel::n_ref)
        .def_readwrite("d_ref", &AtomNumberModel::d_ref)
        .def_readwrite("exponent", &AtomNumberModel::exponent)
        .def_readwrite("plateau_lo", &AtomNumberModel::plateau_lo)
        .def_readwrite("plateau_hi", &AtomNumberModel::plateau_hi)
        .def_readwrite("rolloff", &AtomNumberModel::rolloff);

    m.def("resistance", &resistance, py::arg("path"));
    m.def("power", &power, py::arg("resistance"), py::arg("current"));
    m.def("current_to_gradient", &current_to_gradient, py::arg("current"),
          py::arg("calibration") = DeviceCalibration{});
    m.def("detuning_for_current", [](double current, const DeviceCalibration& cal) {
        Detuning d = detuning_for_current(current, cal);
        return py::make_tuple(d.mhz, d.clamped);
    }, py::arg("current"), py::arg("calibration") = DeviceCalibration{});
    m.def("atom_number_estimate", &atom_number_estimate, py::arg("beam_diameter"),
          py::arg("gradient"), py::arg("model") = AtomNumberModel{});
    m.def("expansion_sigma", &expansion_sigma, py::arg("temperature"),
          py::arg("sigma0"), py::arg("t"));

    py::class_<TofFit>(m, "TofFit")
        .def_readonly("temperature", &TofFit::temperature)
        .def_readonly("sigma0", &TofFit::sigma0)
        .def_readonly("residual", &TofFit::residual)
        .def_readonly("clamped", &TofFit::clamped);

    m.def("tof_fit", [](const std::vector<std::pair<double, double>>& samples) {
        std::vector<TofSample> converted;
        converted.reserve(samples.size());
        for (auto [t, sigma] : samples) converted.push_back({t, sigma});
        return tof_fit(converted);
    }, py::arg("samples"), "samples: list of (t_s, sigma_m) pairs");

    py::class_<GaussianFit>(m, "GaussianFit")
        .def_readonly("amplitude", &GaussianFit::amplitude)
        .def_readonly("center", &GaussianFit::center)
        .def_readonly("sigma", &GaussianFit::sigma)
        .def_readonly("offset", &GaussianFit::offset)
        .def_readonly("residual", &GaussianFit::residual)
        .def_readonly("iterations", &GaussianFit::iterations);

    m.def("fit_gaussian_1d",
          [](const std::vector<std::pair<double, double>>& profile) {
              return fit_gaussian_1d(profile);
          },
          py::arg("profile"), "profile: list of (x, value) pairs");

    m.def("parse_assembly", [](const std::string& text) {
        return parse_assembly(text);
    }, py::arg("text"), "Parse an assembly JSON document");
    m.def("assembly_to_json", [](const ConductorAssembly& a) {
        return assembly_to_json(a).dump(2);
    }, py::arg("assembly"));

    auto constants_mod = m.def_submodule("constants", "physical constants, SI");
    constants_mod.attr("mu0") = constants::mu0;
    constants_mod.attr("k_boltzmann") = constants::k_boltzmann;
    constants_mod.attr("mass_rb87") = constants::mass_rb87;
    constants_mod.attr("natural_linewidth_hz") = constants::natural_linewidth_hz;
}
