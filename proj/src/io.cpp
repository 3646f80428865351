#include "quadtrap/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace quadtrap {

namespace {

using nlohmann::json;

Vec3 vec3_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3)
        throw InvalidDataError(what + " must be an array of 3 numbers");
    for (const auto& c : j)
        if (!c.is_number()) throw InvalidDataError(what + " must contain numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double number_from_json(const json& j, const std::string& what) {
    if (!j.is_number()) throw InvalidDataError(what + " must be a number");
    return j.get<double>();
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

double parse_number(std::string_view token, const std::string& what) {
    std::string s;
    s.reserve(token.size());
    for (char c : token)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw InvalidDataError(what + ": empty number");
    const char* begin = s.data();
    const char* end = begin + s.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw InvalidDataError(what + ": cannot parse number '" + s + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trimmed(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

ConductorAssembly assembly_from_json(const json& doc) {
    if (!doc.is_object()) throw InvalidDataError("assembly document must be an object");
    std::string label = "assembly";
    if (doc.contains("label")) {
        if (!doc["label"].is_string())
            throw InvalidDataError("label must be a string");
        label = doc["label"].get<std::string>();
    }
    double drive = 1.0;
    if (doc.contains("drive_scale"))
        drive = number_from_json(doc["drive_scale"], "drive_scale");

    if (!doc.contains("elements") || !doc["elements"].is_array())
        throw InvalidDataError("assembly needs an elements array");

    std::vector<Element> elements;
    elements.reserve(doc["elements"].size());
    for (std::size_t i = 0; i < doc["elements"].size(); ++i) {
        const json& el = doc["elements"][i];
        std::string ctx = "elements[" + std::to_string(i) + "]";
        if (!el.is_object() || !el.contains("type") || !el["type"].is_string())
            throw InvalidDataError(ctx + " needs a type of loop or segment");
        std::string type = el["type"].get<std::string>();
        if (type == "loop") {
            CircularLoop loop;
            loop.center = vec3_from_json(el.at("center"), ctx + ".center");
            Vec3 axis = vec3_from_json(el.at("axis"), ctx + ".axis");
            if (axis.norm() == 0.0)
                throw InvalidDataError(ctx + ".axis must be nonzero");
            loop.axis = axis.normalized();
            loop.radius = number_from_json(el.at("radius"), ctx + ".radius");
            loop.current = number_from_json(el.at("current"), ctx + ".current");
            elements.push_back(loop);
        } else if (type == "segment") {
            StraightSegment seg;
            seg.start = vec3_from_json(el.at("start"), ctx + ".start");
            seg.end = vec3_from_json(el.at("end"), ctx + ".end");
            seg.current = number_from_json(el.at("current"), ctx + ".current");
            elements.push_back(seg);
        } else {
            throw InvalidDataError(ctx + " has unknown type '" + type + "'");
        }
    }
    if (elements.empty()) throw InvalidDataError("assembly has no elements");

    ConductorAssembly assembly(std::move(elements), label, drive);
    auto violations = validate_assembly(assembly);
    if (!violations.empty()) {
        std::string msg = "invalid assembly:";
        for (const auto& v : violations)
            msg += " [element " + std::to_string(v.element) + ": " + v.rule + "]";
        throw InvalidDataError(msg);
    }
    return assembly;
}

json assembly_to_json(const ConductorAssembly& a) {
    json doc;
    doc["label"] = a.label();
    doc["drive_scale"] = a.drive_current();
    doc["elements"] = json::array();
    for (const auto& el : a.elements()) {
        json j;
        if (const auto* loop = std::get_if<CircularLoop>(&el)) {
            j["type"] = "loop";
            j["center"] = {loop->center.x, loop->center.y, loop->center.z};
            j["axis"] = {loop->axis.x, loop->axis.y, loop->axis.z};
            j["radius"] = loop->radius;
            j["current"] = loop->current;
        } else {
            const auto& seg = std::get<StraightSegment>(el);
            j["type"] = "segment";
            j["start"] = {seg.start.x, seg.start.y, seg.start.z};
            j["end"] = {seg.end.x, seg.end.y, seg.end.z};
            j["current"] = seg.current;
        }
        doc["elements"].push_back(std::move(j));
    }
    return doc;
}

ConductorAssembly parse_assembly(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(e.what(), line, column);
    }
    return assembly_from_json(doc);
}

ConductorAssembly load_assembly(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidArgumentError("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_assembly(buf.str());
}

GridSpec parse_grid_spec(std::string_view spec) {
    auto parts = split(spec, ',');
    if (parts.size() != 3)
        throw InvalidArgumentError(
            "grid spec needs exactly three comma-separated axes, e.g. "
            "x=-5:5:101,y=0,z=0");

    GridSpec grid;
    bool seen[3] = {false, false, false};
    for (auto part : parts) {
        auto eq = part.find('=');
        if (eq == std::string_view::npos)
            throw InvalidArgumentError("grid axis entry '" + std::string(part) +
                                       "' is missing '='");
        std::string name = trimmed(part.substr(0, eq));
        if (name.size() != 1 || (name[0] != 'x' && name[0] != 'y' && name[0] != 'z'))
            throw InvalidArgumentError("grid axis must be x, y or z, got '" + name +
                                       "'");
        int idx = name[0] - 'x';
        if (seen[idx])
            throw InvalidArgumentError("grid axis '" + name + "' given twice");
        seen[idx] = true;

        std::string_view value = part.substr(eq + 1);
        auto fields = split(value, ':');
        GridAxis axis;
        if (fields.size() == 1) {
            axis.lo = axis.hi = parse_number(fields[0], "grid axis " + name);
            axis.count = 1;
        } else if (fields.size() == 3) {
            axis.lo = parse_number(fields[0], "grid axis " + name + " start");
            axis.hi = parse_number(fields[1], "grid axis " + name + " stop");
            double count = parse_number(fields[2], "grid axis " + name + " count");
            if (count < 2.0 || count != std::floor(count) || count > 1e7)
                throw InvalidArgumentError("grid axis " + name +
                                           " count must be an integer >= 2");
            axis.count = int(count);
        } else {
            throw InvalidArgumentError("grid axis " + name +
                                       " must be a number or start:stop:count");
        }
        (idx == 0 ? grid.x : idx == 1 ? grid.y : grid.z) = axis;
    }
    for (int i = 0; i < 3; ++i)
        if (!seen[i])
            throw InvalidArgumentError(std::string("grid axis '") +
                                       char('x' + i) + "' is missing");
    return grid;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::vector<std::pair<double, double>> read_two_column_csv(
    std::istream& in, const std::string& expected_header) {
    std::string line;
    if (!std::getline(in, line))
        throw InvalidDataError("empty CSV, expected header " + expected_header);
    std::string header = trimmed(line);
    header.erase(std::remove_if(header.begin(), header.end(),
                                [](char c) { return std::isspace(
                                    static_cast<unsigned char>(c)); }),
                 header.end());
    if (header != expected_header)
        throw InvalidDataError("expected CSV header '" + expected_header +
                               "', got '" + header + "'");

    std::vector<std::pair<double, double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != 2)
            throw InvalidDataError("line " + std::to_string(line_no) +
                                   ": expected 2 columns");
        std::string ctx = "line " + std::to_string(line_no);
        rows.emplace_back(parse_number(cells[0], ctx), parse_number(cells[1], ctx));
    }
    return rows;
}

}  // namespace

std::vector<TofSample> read_tof_csv(std::istream& in) {
    std::vector<TofSample> samples;
    for (auto [t, sigma] : read_two_column_csv(in, "t_s,sigma_m"))
        samples.push_back({t, sigma});
    return samples;
}

std::vector<TofSample> read_tof_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidArgumentError("cannot open " + file.string());
    return read_tof_csv(in);
}

std::vector<std::pair<double, double>> read_profile_csv(std::istream& in) {
    return read_two_column_csv(in, "x,value");
}

std::vector<std::pair<double, double>> read_profile_csv(
    const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidArgumentError("cannot open " + file.string());
    return read_profile_csv(in);
}

void write_field_map_csv(std::ostream& out, const FieldMap& map,
                         const UnitOptions& units) {
    const double length_factor = units.mm ? 1e3 : 1.0;
    const double field_factor = units.gauss ? 1e4 : 1.0;
    out << "x,y,z,Bx,By,Bz,Bmag\n";
    for (const auto& s : map.samples) {
        out << format_double(s.point.x * length_factor) << ','
            << format_double(s.point.y * length_factor) << ','
            << format_double(s.point.z * length_factor) << ','
            << format_double(s.b.x * field_factor) << ','
            << format_double(s.b.y * field_factor) << ','
            << format_double(s.b.z * field_factor) << ','
            << format_double(s.b.norm() * field_factor) << '\n';
    }
}

}  // namespace quadtrap
