#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ideq/instance.hpp"
#include "ideq/report.hpp"

namespace ideq::tsplib {

enum class EdgeWeightType { euc_2d, ceil_2d, att, geo };

struct Header {
    std::string name;
    int dimension = 0;
    EdgeWeightType edge_weight_type = EdgeWeightType::euc_2d;
    std::optional<std::string> comment;
};

struct ParsedFile {
    Header header;
    Instance instance;
};

/// Parses a TSPLIB .tsp file with a NODE_COORD_SECTION.
///
/// Coordinates are normalized into [0,1]^2 (minimum translated to 0, both
/// axes divided by the larger span) and node indices are remapped from
/// 1-based to 0-based. Only coordinate-based edge weight types are accepted;
/// EXPLICIT matrices raise UnsupportedFormatError.
ParsedFile parse_tsplib_file(std::istream& in);
ParsedFile parse_tsplib_file(const std::string& text);

/// Convenience wrappers returning just the Instance.
Instance parse_tsplib(std::istream& in);
Instance parse_tsplib(const std::string& text);
Instance load_tsplib(const std::string& path);

/// Canonical TSPLIB edge weight between two raw (unnormalized) coordinate
/// points: EUC_2D rounds, CEIL_2D takes the ceiling, ATT is the rounded-up
/// pseudo-Euclidean distance, GEO is the great-circle distance on the
/// TSPLIB reference sphere. The solver pipeline itself works on normalized
/// planar coordinates; these helpers exist for interoperability checks.
int canonical_edge_weight(EdgeWeightType type, const Point& a, const Point& b);

/// RFC-4180-style CSV with header
/// `instance,n,method,length,ref_length,gap_pct,seconds,seed`,
/// rows sorted by (instance id, method, seed). Real fields use %.17g so a
/// parse of the output reproduces the rows exactly.
void write_report_csv(const std::vector<BenchRow>& rows, std::ostream& sink);

/// Reader for the CSV emitted above (also used on the bundled reference
/// tables). Throws ParseError on malformed content.
std::vector<BenchRow> read_report_csv(std::istream& in);

/// Per-run JSON summary: {method, mean_gap_pct, std_gap_pct, mean_seconds,
/// n_instances}, one object per method, sorted by method name.
std::string summary_json(const std::vector<BenchRow>& rows);

std::string to_string(EdgeWeightType type);

}  // namespace ideq::tsplib
