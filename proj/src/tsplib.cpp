#include "ideq/tsplib.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "ideq/errors.hpp"
#include "nlohmann/json.hpp"

namespace ideq::tsplib {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream stream(line);
    std::string tok;
    while (stream >> tok) out.push_back(tok);
    return out;
}

double parse_real(const std::string& tok, int line_number) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(tok, &consumed);
        if (consumed != tok.size()) throw ParseError("malformed numeric token '" + tok + "'", line_number);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed numeric token '" + tok + "'", line_number);
    }
}

long parse_int(const std::string& tok, int line_number) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("malformed integer token '" + tok + "'", line_number);
    return value;
}

std::uint64_t parse_u64(const std::string& tok, int line_number) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("malformed integer token '" + tok + "'", line_number);
    return value;
}

constexpr double kGeoEarthRadius = 6378.388;  // TSPLIB reference sphere, km

double geo_radians(double coordinate) {
    // TSPLIB convention: DDD.MM, degrees and minutes.
    const double degrees = std::trunc(coordinate);
    const double minutes = coordinate - degrees;
    return M_PI * (degrees + 5.0 * minutes / 3.0) / 180.0;
}

}  // namespace

int canonical_edge_weight(EdgeWeightType type, const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    switch (type) {
        case EdgeWeightType::euc_2d:
            return static_cast<int>(std::lround(std::sqrt(dx * dx + dy * dy)));
        case EdgeWeightType::ceil_2d:
            return static_cast<int>(std::ceil(std::sqrt(dx * dx + dy * dy)));
        case EdgeWeightType::att: {
            const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
            const double t = std::lround(r);
            return static_cast<int>(t < r ? t + 1 : t);
        }
        case EdgeWeightType::geo: {
            const double lat_a = geo_radians(a.x), lon_a = geo_radians(a.y);
            const double lat_b = geo_radians(b.x), lon_b = geo_radians(b.y);
            const double q1 = std::cos(lon_a - lon_b);
            const double q2 = std::cos(lat_a - lat_b);
            const double q3 = std::cos(lat_a + lat_b);
            return static_cast<int>(
                kGeoEarthRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
        }
    }
    throw UnsupportedFormatError("unknown edge weight type");
}

std::string to_string(EdgeWeightType type) {
    switch (type) {
        case EdgeWeightType::euc_2d: return "EUC_2D";
        case EdgeWeightType::ceil_2d: return "CEIL_2D";
        case EdgeWeightType::att: return "ATT";
        case EdgeWeightType::geo: return "GEO";
    }
    return "?";
}

ParsedFile parse_tsplib_file(std::istream& in) {
    Header header;
    bool have_name = false, have_dimension = false, have_weight_type = false;

    std::string line;
    int line_number = 0;
    bool in_coords = false;

    std::vector<Point> raw;
    std::vector<char> seen;
    int coord_rows = 0;

    while (std::getline(in, line)) {
        ++line_number;
        const std::string text = trim(line);
        if (text.empty()) continue;

        if (!in_coords) {
            const auto colon = text.find(':');
            std::string key = upper(trim(colon == std::string::npos ? text : text.substr(0, colon)));
            std::string value = colon == std::string::npos ? "" : trim(text.substr(colon + 1));

            if (key == "NODE_COORD_SECTION") {
                if (!have_dimension)
                    throw ParseError("NODE_COORD_SECTION before DIMENSION", line_number);
                if (!have_weight_type)
                    throw ParseError("NODE_COORD_SECTION before EDGE_WEIGHT_TYPE", line_number);
                raw.assign(header.dimension, Point{});
                seen.assign(header.dimension, 0);
                in_coords = true;
            } else if (key == "NAME") {
                header.name = value;
                have_name = true;
            } else if (key == "DIMENSION") {
                header.dimension = static_cast<int>(parse_int(value, line_number));
                if (header.dimension < 3)
                    throw ParseError("DIMENSION must be at least 3", line_number);
                have_dimension = true;
            } else if (key == "EDGE_WEIGHT_TYPE") {
                const std::string type = upper(value);
                if (type == "EUC_2D") header.edge_weight_type = EdgeWeightType::euc_2d;
                else if (type == "CEIL_2D") header.edge_weight_type = EdgeWeightType::ceil_2d;
                else if (type == "ATT") header.edge_weight_type = EdgeWeightType::att;
                else if (type == "GEO") header.edge_weight_type = EdgeWeightType::geo;
                else throw UnsupportedFormatError("unsupported EDGE_WEIGHT_TYPE '" + type + "'");
                have_weight_type = true;
            } else if (key == "COMMENT") {
                header.comment = value;
            }
            // Other keys (TYPE, DISPLAY_DATA_TYPE, ...) are ignored.
            continue;
        }

        if (text == "EOF") break;
        const auto toks = tokens(text);
        if (toks.size() != 3)
            throw ParseError("expected 'index x y', got '" + text + "'", line_number);
        const long index = parse_int(toks[0], line_number);
        if (index < 1 || index > header.dimension)
            throw ParseError("node index " + std::to_string(index) + " outside 1.." +
                                 std::to_string(header.dimension),
                             line_number);
        if (seen[index - 1])
            throw ParseError("duplicate node index " + std::to_string(index), line_number);
        seen[index - 1] = 1;
        raw[index - 1] = {parse_real(toks[1], line_number), parse_real(toks[2], line_number)};
        ++coord_rows;
    }

    if (!have_name) throw ParseError("missing NAME", line_number);
    if (!have_dimension) throw ParseError("missing DIMENSION", line_number);
    if (!have_weight_type) throw ParseError("missing EDGE_WEIGHT_TYPE", line_number);
    if (!in_coords) throw ParseError("missing NODE_COORD_SECTION", line_number);
    if (coord_rows != header.dimension)
        throw ParseError("DIMENSION is " + std::to_string(header.dimension) + " but " +
                             std::to_string(coord_rows) + " coordinate rows were read",
                         line_number);

    // Normalize into [0,1]^2: translate minimum to the origin, divide both
    // axes by the larger span so distance ratios are preserved.
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    for (const Point& p : raw) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max(max_x - min_x, max_y - min_y);
    const double scale = span > 0.0 ? 1.0 / span : 1.0;
    std::vector<Point> coords(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        coords[i] = {(raw[i].x - min_x) * scale, (raw[i].y - min_y) * scale};

    return {header, Instance(header.name, std::move(coords))};
}

ParsedFile parse_tsplib_file(const std::string& text) {
    std::istringstream stream(text);
    return parse_tsplib_file(stream);
}

Instance parse_tsplib(std::istream& in) { return parse_tsplib_file(in).instance; }

Instance parse_tsplib(const std::string& text) { return parse_tsplib_file(text).instance; }

Instance load_tsplib(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw Error("cannot open '" + path + "'");
    return parse_tsplib(file);
}

namespace {

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line, int line_number) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    field += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ParseError("unterminated quote", line_number);
    fields.push_back(field);
    return fields;
}

constexpr const char* kCsvHeader = "instance,n,method,length,ref_length,gap_pct,seconds,seed";

}  // namespace

void write_report_csv(const std::vector<BenchRow>& rows, std::ostream& sink) {
    std::vector<BenchRow> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [](const BenchRow& a, const BenchRow& b) {
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        if (a.method != b.method) return a.method < b.method;
        return a.seed < b.seed;
    });

    sink << kCsvHeader << "\n";
    for (const BenchRow& row : sorted) {
        sink << csv_field(row.instance_id) << ',' << row.n << ',' << csv_field(row.method) << ','
             << format_real(row.length) << ',' << format_real(row.ref_length) << ','
             << format_real(row.gap * 100.0) << ',' << format_real(row.seconds) << ',' << row.seed
             << "\n";
    }
    if (!sink) throw Error("failed writing CSV report");
}

std::vector<BenchRow> read_report_csv(std::istream& in) {
    std::string line;
    int line_number = 0;
    if (!std::getline(in, line)) throw ParseError("empty CSV", 1);
    ++line_number;
    if (trim(line) != kCsvHeader) throw ParseError("unexpected CSV header", 1);

    std::vector<BenchRow> rows;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(trim(line), line_number);
        if (fields.size() != 8) throw ParseError("expected 8 fields", line_number);
        BenchRow row;
        row.instance_id = fields[0];
        row.n = static_cast<int>(parse_int(fields[1], line_number));
        row.method = fields[2];
        row.length = parse_real(fields[3], line_number);
        row.ref_length = parse_real(fields[4], line_number);
        row.gap = parse_real(fields[5], line_number) / 100.0;
        row.seconds = parse_real(fields[6], line_number);
        row.seed = parse_u64(fields[7], line_number);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string summary_json(const std::vector<BenchRow>& rows) {
    std::map<std::string, std::vector<const BenchRow*>> by_method;
    for (const BenchRow& row : rows) by_method[row.method].push_back(&row);

    nlohmann::json out = nlohmann::json::array();
    for (const auto& [method, cells] : by_method) {
        double mean = 0.0;
        for (const BenchRow* row : cells) mean += row->gap * 100.0;
        mean /= static_cast<double>(cells.size());
        double var = 0.0;
        for (const BenchRow* row : cells) {
            const double d = row->gap * 100.0 - mean;
            var += d * d;
        }
        var /= static_cast<double>(cells.size());
        double seconds = 0.0;
        for (const BenchRow* row : cells) seconds += row->seconds;
        out.push_back({{"method", method},
                       {"mean_gap_pct", mean},
                       {"std_gap_pct", std::sqrt(var)},
                       {"mean_seconds", seconds / static_cast<double>(cells.size())},
                       {"n_instances", cells.size()}});
    }
    return out.dump(2);
}

}  // namespace ideq::tsplib
