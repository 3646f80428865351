#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quadtrap/device.hpp"
#include "quadtrap/trap.hpp"

namespace quadtrap {

/// Display units for CLI output. Persisted files are always SI.
struct UnitOptions {
    bool gauss = true;  // fields in gauss (1 G = 1e-4 T), else tesla
    bool mm = true;     // lengths in millimetres, else metres
};

/// Assembly document schema:
/// {
///   "label": str,
///   "elements": [
///     {"type": "loop", "center": [x,y,z], "axis": [x,y,z],
///      "radius": r, "current": i},
///     {"type": "segment", "start": [x,y,z], "end": [x,y,z], "current": i}
///   ],
///   "drive_scale": number   // optional nominal drive current [A], default 1
/// }
/// Lengths in metres regardless of display units. The loop axis is
/// normalized on load.
ConductorAssembly assembly_from_json(const nlohmann::json& doc);
nlohmann::json assembly_to_json(const ConductorAssembly& a);

/// Parses an assembly document from text; ParseError carries line and
/// column on malformed JSON, InvalidDataError on schema violations.
ConductorAssembly parse_assembly(std::string_view text);
ConductorAssembly load_assembly(const std::filesystem::path& file);

/// Grid mini-syntax: "x=a:b:n,y=c,z=d:e:m". Ranges are inclusive with n
/// points (n >= 2); a bare number is a single coordinate. All three
/// axes must appear exactly once. Numbers are in the caller's length
/// unit; this parser is unit-agnostic.
GridSpec parse_grid_spec(std::string_view spec);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// CSV with header t_s,sigma_m.
std::vector<TofSample> read_tof_csv(std::istream& in);
std::vector<TofSample> read_tof_csv(const std::filesystem::path& file);

/// CSV with header x,value.
std::vector<std::pair<double, double>> read_profile_csv(std::istream& in);
std::vector<std::pair<double, double>> read_profile_csv(const std::filesystem::path& file);

/// CSV with header x,y,z,Bx,By,Bz,Bmag in the selected display units.
void write_field_map_csv(std::ostream& out, const FieldMap& map,
                         const UnitOptions& units = {});

}  // namespace quadtrap
