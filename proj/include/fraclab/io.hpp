#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "fraclab/bvp.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/split.hpp"

namespace fraclab::io {

using Json = nlohmann::ordered_json;

/// Shortest text that round-trips: 17 significant digits, "nan"/"inf" for
/// non-finite values.
std::string format_double(double value);

/// Header `t,v0[,v1,...]`, one row per node.
void write_grid_csv(std::ostream& out, const GridFunction& f);
void write_grid_csv(const std::filesystem::path& path, const GridFunction& f);

/// Parses the CSV layout written by write_grid_csv. Nodes must be uniformly
/// spaced. Non-finite values are only accepted in the first or last row, and
/// clear the corresponding endpoint flag. Throws ParseError.
GridFunction read_grid_csv(std::istream& in);
GridFunction read_grid_csv(const std::filesystem::path& path);

/// Numbers, or the strings "inf"/"infinity" for p = infinity.
double read_exponent(const Json& value);
Json exponent_to_json(double p);

/// SplitFunction document:
/// { "alpha", "p", "a", "b", "c": [..],
///   "phi": {"kind": "poly", "terms": [{"coeff", "exponent"}]}
///        | {"kind": "poly", "components": [{"terms": [..]}, ..]}
///        | {"kind": "grid", "csv": "path"} }
/// Grid paths are resolved against base_dir. The right-anchored variant uses
/// "d"/"psi" (the left names are accepted as aliases) and exponents in (b - t).
SplitFunction read_split(const Json& doc, const std::filesystem::path& base_dir = {});
RightSplitFunction read_right_split(const Json& doc, const std::filesystem::path& base_dir = {});

Json to_json(const SplitFunction& q);
Json to_json(const RightSplitFunction& q);

/// Polynomial density components (one PowerSum per component) of a "poly" node.
/// A term may carry "side": "left" | "right" to override `side`.
std::vector<PowerSum> read_poly_density(const Json& node, Side side, std::size_t dim);
Json poly_density_to_json(const std::vector<PowerSum>& components, Side default_side = Side::left);

/// { "alpha", "a", "b", "p" (optional, 2), "qa": [..], "qb": [..],
///   "f": {"kind": "poly", ..} | {"kind": "grid", "csv": "path"}, "basis_degree" (optional, 4) }
BvpProblem read_bvp_problem(const Json& doc, const std::filesystem::path& base_dir = {});

/// Solution document: the recovered q in split form, coefficients, norms and defects.
Json to_json(const BvpSolution& solution);

Json read_json_file(const std::filesystem::path& path);

std::vector<double> read_vector(const Json& node, const char* what);
Json vector_to_json(const std::vector<double>& values);

}  // namespace fraclab::io
