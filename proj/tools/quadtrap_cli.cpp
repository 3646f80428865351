// quadtrap command line front end.
//
// Exit codes: 0 success, 2 input error, 3 singularity, 4 non-convergence,
// 5 infeasible.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadtrap/device.hpp"
#include "quadtrap/io.hpp"
#include "quadtrap/planar.hpp"
#include "quadtrap/trap.hpp"

namespace {

using quadtrap::format_double;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSingularity = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitInfeasible = 5;

// All commands assemble their full output first, then write it in one
// go, so a failing run never leaves partial output behind.
void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw quadtrap::InvalidArgumentError("cannot write " + out_path);
    out << content;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

double parse_cli_number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw quadtrap::InvalidArgumentError(what + ": cannot parse number '" +
                                             text + "'");
    }
}

// Length with optional unit suffix; bare numbers use the default unit.
double parse_length(const std::string& text, bool default_mm,
                    const std::string& what) {
    std::string t = text;
    double factor = default_mm ? 1e-3 : 1.0;
    if (t.size() > 2 && t.substr(t.size() - 2) == "mm") {
        factor = 1e-3;
        t = t.substr(0, t.size() - 2);
    } else if (t.size() > 1 && t.back() == 'm') {
        factor = 1.0;
        t = t.substr(0, t.size() - 1);
    }
    return parse_cli_number(t, what) * factor;
}

quadtrap::Vec3 parse_point(const std::string& text, double to_metres,
                           const std::string& what) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 3)
        throw quadtrap::InvalidArgumentError(what + " must be x,y,z");
    return {parse_cli_number(parts[0], what) * to_metres,
            parse_cli_number(parts[1], what) * to_metres,
            parse_cli_number(parts[2], what) * to_metres};
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_cli_number(item, what));
    if (values.empty()) throw quadtrap::InvalidArgumentError(what + " is empty");
    return values;
}

struct UnitFlags {
    std::string field = "gauss";
    std::string length = "mm";

    quadtrap::UnitOptions options() const {
        if (field != "gauss" && field != "tesla")
            throw quadtrap::InvalidArgumentError("--field-units must be gauss or tesla");
        if (length != "mm" && length != "m")
            throw quadtrap::InvalidArgumentError("--length-units must be mm or m");
        return {field == "gauss", length == "mm"};
    }
};

void add_unit_flags(CLI::App* cmd, UnitFlags& units) {
    cmd->add_option("--field-units", units.field, "gauss or tesla (default gauss)");
    cmd->add_option("--length-units", units.length, "mm or m (default mm)");
}

ordered_json json_vec(const quadtrap::Vec3& v, double factor = 1.0) {
    return ordered_json::array({v.x * factor, v.y * factor, v.z * factor});
}

// ---------------------------------------------------------------------------
// field-map

struct FieldMapArgs {
    std::string config, grid, out;
    UnitFlags units;
};

void run_field_map(const FieldMapArgs& args) {
    auto units = args.units.options();
    double to_metres = units.mm ? 1e-3 : 1.0;

    auto assembly = quadtrap::load_assembly(args.config);
    quadtrap::GridSpec grid = quadtrap::parse_grid_spec(args.grid);
    for (quadtrap::GridAxis* axis : {&grid.x, &grid.y, &grid.z}) {
        axis->lo *= to_metres;
        axis->hi *= to_metres;
    }

    quadtrap::FieldMap map = quadtrap::field_map(assembly, grid);
    std::ostringstream csv;
    quadtrap::write_field_map_csv(csv, map, units);
    emit(args.out, csv.str());
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
    std::string config, guess = "0,0,0", out;
    double current = 0.0;
    bool current_set = false;
    double resistance = 640e-6;
    double gradient_per_ampere = 10.0 / 15.0;
    UnitFlags units;
};

void run_report(const ReportArgs& args) {
    auto units = args.units.options();
    double to_metres = units.mm ? 1e-3 : 1.0;
    double length_factor = units.mm ? 1e3 : 1.0;
    // Gradients follow the field unit: G/cm in gauss mode, T/m otherwise.
    double gradient_factor = units.gauss ? 1e2 : 1.0;

    auto assembly = quadtrap::load_assembly(args.config);
    double drive = args.current_set ? args.current : assembly.drive_current();
    if (args.current_set)
        assembly = quadtrap::with_drive_current(assembly, args.current);

    quadtrap::Vec3 guess = parse_point(args.guess, to_metres, "--guess");
    quadtrap::TrapReport report = quadtrap::trap_report(assembly, guess);
    quadtrap::GradientTensor tensor = quadtrap::field_jacobian(assembly, report.zero);

    quadtrap::DeviceCalibration cal;
    cal.resistance = args.resistance;
    cal.gradient_per_ampere = args.gradient_per_ampere;

    ordered_json doc;
    doc["label"] = assembly.label();
    doc["units"] = {{"length", units.mm ? "mm" : "m"},
                    {"gradient", units.gauss ? "G/cm" : "T/m"}};
    doc["zero"] = json_vec(report.zero, length_factor);
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < 3; ++r)
        rows.push_back(ordered_json::array({tensor.m(r, 0) * gradient_factor,
                                            tensor.m(r, 1) * gradient_factor,
                                            tensor.m(r, 2) * gradient_factor}));
    doc["gradient_tensor"] = rows;
    doc["eigenvalues"] = {report.eigenvalues[0] * gradient_factor,
                          report.eigenvalues[1] * gradient_factor,
                          report.eigenvalues[2] * gradient_factor};
    doc["axes"] = {json_vec(report.axes[0]), json_vec(report.axes[1]),
                   json_vec(report.axes[2])};
    doc["ratio"] = {report.ratio[0], report.ratio[1], report.ratio[2]};
    doc["drive_current_A"] = drive;
    doc["power_W"] = quadtrap::power(cal.resistance, drive);
    doc["calibrated_gradient_G_per_cm"] =
        quadtrap::current_to_gradient(std::abs(drive), cal);
    emit(args.out, dump(doc));
}

// ---------------------------------------------------------------------------
// optimize-planar

struct OptimizePlanarArgs {
    double z0 = 0.5;
    double radius = 1.0;
    double current = 1.0;
    quadtrap::PlanarSearchOptions opts;
    std::string out;
};

void run_optimize_planar(const OptimizePlanarArgs& args) {
    std::vector<quadtrap::FeasiblePoint> sweep;
    quadtrap::PlanarOptimum opt = quadtrap::optimize_planar(
        args.z0, args.radius, args.current, args.opts, &sweep);

    ordered_json doc;
    doc["z0"] = opt.config.z0;
    doc["r1"] = opt.config.r1;
    doc["r2"] = opt.config.r2;
    doc["i1"] = opt.config.i1;
    doc["i2"] = opt.config.i2;
    doc["gradient_2d_T_per_m"] = opt.gradient_2d;
    doc["gradient_3d_T_per_m"] = opt.gradient_3d;
    doc["gradient_ratio"] = opt.gradient_ratio;
    doc["power_ratio"] = opt.power_ratio;
    ordered_json curve = ordered_json::array();
    for (const auto& fp : sweep) {
        curve.push_back({{"r1", fp.r1},
                         {"r2", fp.r2},
                         {"i1", fp.i1},
                         {"i2", fp.i2},
                         {"gradient", fp.gradient}});
    }
    doc["feasible_curve"] = curve;
    emit(args.out, dump(doc));
}

// ---------------------------------------------------------------------------
// scaling

struct ScalingArgs {
    std::string scales;
    double target_gradient_g_per_cm = 10.0;
    double radius = 1.0;
    double length = 0.0;  // default 4 pi radius, set at run time
    double cross_section = 1e-5;
    double resistivity = 5e-8;
    std::string out, exponents_out;
};

void run_scaling(const ScalingArgs& args) {
    std::vector<double> scales = parse_number_list(args.scales, "--scales");
    quadtrap::ConductorPath path{
        args.length > 0.0 ? args.length : 4.0 * quadtrap::constants::pi * args.radius,
        args.cross_section, args.resistivity};
    quadtrap::ScalingTable table = quadtrap::scaling_study(
        scales, args.target_gradient_g_per_cm * 1e-2, path, args.radius);

    std::ostringstream csv;
    csv << "scale,current_A,resistance_ohm,power_W\n";
    for (const auto& row : table.rows)
        csv << format_double(row.scale) << ',' << format_double(row.current) << ','
            << format_double(row.resistance) << ',' << format_double(row.power)
            << '\n';

    ordered_json exponents;
    exponents["current_exponent"] = table.current_exponent;
    exponents["power_exponent"] = table.power_exponent;

    if (args.exponents_out.empty() && args.out.empty()) {
        emit("", csv.str() + dump(exponents));
    } else {
        emit(args.out, csv.str());
        emit(args.exponents_out, dump(exponents));
    }
}

// ---------------------------------------------------------------------------
// atoms

struct AtomsArgs {
    std::string diameter;
    double gradient_g_per_cm = 10.0;
    quadtrap::AtomNumberModel model;
    std::string d_ref;
    std::string out;
    UnitFlags units;
};

void run_atoms(const AtomsArgs& args) {
    auto units = args.units.options();
    double diameter = parse_length(args.diameter, units.mm, "--diameter");
    quadtrap::AtomNumberModel model = args.model;
    if (!args.d_ref.empty())
        model.d_ref = parse_length(args.d_ref, units.mm, "--d-ref");

    ordered_json doc;
    doc["diameter_m"] = diameter;
    doc["gradient_G_per_cm"] = args.gradient_g_per_cm;
    doc["atoms"] = quadtrap::atom_number_estimate(diameter, args.gradient_g_per_cm,
                                                  model);
    emit(args.out, dump(doc));
}

// ---------------------------------------------------------------------------
// tof-fit

struct TofArgs {
    std::string csv, out;
};

void run_tof_fit(const TofArgs& args) {
    auto samples = quadtrap::read_tof_csv(std::filesystem::path(args.csv));
    quadtrap::TofFit fit = quadtrap::tof_fit(samples);

    ordered_json doc;
    doc["samples"] = samples.size();
    doc["temperature_K"] = fit.temperature;
    doc["temperature_uK"] = fit.temperature * 1e6;
    doc["sigma0_m"] = fit.sigma0;
    doc["sigma0_mm"] = fit.sigma0 * 1e3;
    doc["residual"] = fit.residual;
    doc["clamped"] = fit.clamped;
    emit(args.out, dump(doc));
}

// ---------------------------------------------------------------------------
// power

struct PowerArgs {
    double current = 0.0;
    double resistance = 640e-6;
    std::string out;
};

void run_power(const PowerArgs& args) {
    ordered_json doc;
    doc["resistance_ohm"] = args.resistance;
    doc["current_A"] = args.current;
    doc["power_W"] = quadtrap::power(args.resistance, args.current);
    emit(args.out, dump(doc));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magnetostatic quadrupole trap design toolkit"};
    app.require_subcommand(1);

    FieldMapArgs field_map_args;
    auto* cmd_field_map =
        app.add_subcommand("field-map", "Sample the field of an assembly on a grid");
    cmd_field_map->add_option("--config", field_map_args.config,
                              "assembly JSON document")->required();
    cmd_field_map->add_option("--grid", field_map_args.grid,
                              "grid spec, e.g. x=-5:5:101,y=0,z=0 (length units)")
        ->required();
    cmd_field_map->add_option("--out", field_map_args.out, "output CSV (default stdout)");
    add_unit_flags(cmd_field_map, field_map_args.units);

    ReportArgs report_args;
    auto* cmd_report =
        app.add_subcommand("report", "Locate the trap zero and characterize it");
    cmd_report->add_option("--config", report_args.config, "assembly JSON document")
        ->required();
    cmd_report->add_option("--guess", report_args.guess,
                           "zero search start x,y,z (length units)");
    auto* current_opt =
        cmd_report->add_option("--current", report_args.current,
                               "drive current [A] (default: file drive_scale)");
    cmd_report->add_option("--resistance", report_args.resistance,
                           "device resistance [Ohm]");
    cmd_report->add_option("--gradient-per-ampere", report_args.gradient_per_ampere,
                           "calibration [G/cm/A]");
    cmd_report->add_option("--out", report_args.out, "output JSON (default stdout)");
    add_unit_flags(cmd_report, report_args.units);

    OptimizePlanarArgs planar_args;
    auto* cmd_planar = app.add_subcommand(
        "optimize-planar", "Equal-power planar vs anti-Helmholtz comparison");
    cmd_planar->add_option("--z0", planar_args.z0, "zero height in units of R")
        ->required();
    cmd_planar->add_option("--radius", planar_args.radius, "reference radius [m]");
    cmd_planar->add_option("--current", planar_args.current, "reference current [A]");
    cmd_planar->add_option("--r1-min", planar_args.opts.r1_min, "inner radius scan start");
    cmd_planar->add_option("--r1-max", planar_args.opts.r1_max, "inner radius scan stop");
    cmd_planar->add_option("--r2-max", planar_args.opts.r2_max, "outer radius bound");
    cmd_planar->add_option("--coarse-step", planar_args.opts.coarse_step,
                           "r1 scan resolution");
    cmd_planar->add_option("--out", planar_args.out, "output JSON (default stdout)");

    ScalingArgs scaling_args;
    auto* cmd_scaling =
        app.add_subcommand("scaling", "Miniaturization scaling study");
    cmd_scaling->add_option("--scales", scaling_args.scales,
                            "comma separated scale factors")->required();
    cmd_scaling->add_option("--target-gradient", scaling_args.target_gradient_g_per_cm,
                            "gradient to hold [G/cm]");
    cmd_scaling->add_option("--radius", scaling_args.radius,
                            "reference anti-Helmholtz radius [m]");
    cmd_scaling->add_option("--length", scaling_args.length,
                            "reference conductor length [m] (default 4 pi R)");
    cmd_scaling->add_option("--cross-section", scaling_args.cross_section,
                            "conductor cross section [m^2]");
    cmd_scaling->add_option("--resistivity", scaling_args.resistivity,
                            "conductor resistivity [Ohm m]");
    cmd_scaling->add_option("--out", scaling_args.out, "table CSV (default stdout)");
    cmd_scaling->add_option("--exponents-out", scaling_args.exponents_out,
                            "fitted exponents JSON (default stdout)");

    AtomsArgs atoms_args;
    auto* cmd_atoms =
        app.add_subcommand("atoms", "Atom number estimate for beam diameter and gradient");
    cmd_atoms->add_option("--diameter", atoms_args.diameter,
                          "beam diameter, e.g. 15mm or 0.015m")->required();
    cmd_atoms->add_option("--gradient", atoms_args.gradient_g_per_cm,
                          "strong-axis gradient [G/cm]");
    cmd_atoms->add_option("--n-ref", atoms_args.model.n_ref, "reference atom number");
    cmd_atoms->add_option("--d-ref", atoms_args.d_ref, "reference diameter");
    cmd_atoms->add_option("--exponent", atoms_args.model.exponent,
                          "beam diameter power law exponent");
    cmd_atoms->add_option("--plateau-lo", atoms_args.model.plateau_lo,
                          "plateau lower edge [G/cm]");
    cmd_atoms->add_option("--plateau-hi", atoms_args.model.plateau_hi,
                          "plateau upper edge [G/cm]");
    cmd_atoms->add_option("--rolloff", atoms_args.model.rolloff,
                          "reduction factor per octave outside the plateau");
    cmd_atoms->add_option("--out", atoms_args.out, "output JSON (default stdout)");
    add_unit_flags(cmd_atoms, atoms_args.units);

    TofArgs tof_args;
    auto* cmd_tof = app.add_subcommand(
        "tof-fit", "Temperature from time-of-flight expansion samples");
    cmd_tof->add_option("--csv", tof_args.csv, "CSV with header t_s,sigma_m")
        ->required();
    cmd_tof->add_option("--out", tof_args.out, "output JSON (default stdout)");

    PowerArgs power_args;
    auto* cmd_power = app.add_subcommand("power", "Ohmic power Z I^2");
    cmd_power->add_option("--current", power_args.current, "drive current [A]")
        ->required();
    cmd_power->add_option("--resistance", power_args.resistance,
                          "device resistance [Ohm]");
    cmd_power->add_option("--out", power_args.out, "output JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        report_args.current_set = current_opt->count() > 0;
        if (cmd_field_map->parsed()) run_field_map(field_map_args);
        if (cmd_report->parsed()) run_report(report_args);
        if (cmd_planar->parsed()) run_optimize_planar(planar_args);
        if (cmd_scaling->parsed()) run_scaling(scaling_args);
        if (cmd_atoms->parsed()) run_atoms(atoms_args);
        if (cmd_tof->parsed()) run_tof_fit(tof_args);
        if (cmd_power->parsed()) run_power(power_args);
        return kExitOk;
    } catch (const quadtrap::ParseError& e) {
        std::cerr << "error: parse failure at line " << e.line << ", column "
                  << e.column << ": " << e.what() << "\n";
        return kExitInput;
    } catch (const quadtrap::SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingularity;
    } catch (const quadtrap::NoConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
        return kExitNoConvergence;
    } catch (const quadtrap::FitFailureError& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
        return kExitNoConvergence;
    } catch (const quadtrap::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const quadtrap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
