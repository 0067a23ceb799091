#include "fraclab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab::io {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
            field.pop_back();
        }
        while (!field.empty() && field.front() == ' ') {
            field.erase(field.begin());
        }
        fields.push_back(field);
    }
    return fields;
}

double parse_double(const std::string& text, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::out_of_range&) {
        throw ParseError("line " + std::to_string(line_no) + ": value out of range '" + text + "'");
    } catch (const std::invalid_argument&) {
        throw ParseError("line " + std::to_string(line_no) + ": not a number '" + text + "'");
    }
}

const Json& require(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return doc.at(key);
}

double read_number(const Json& doc, const char* key) {
    const Json& value = require(doc, key);
    if (!value.is_number()) {
        throw ParseError(std::string("field '") + key + "' must be a number");
    }
    return value.get<double>();
}

FracParams read_params(const Json& doc) {
    const double p = doc.contains("p") ? read_exponent(doc.at("p")) : kInfinity;
    return FracParams(read_number(doc, "alpha"), p, read_number(doc, "a"), read_number(doc, "b"));
}

template <Side S>
SplitRepresentation<S> read_split_impl(const Json& doc, const std::filesystem::path& base_dir, const char* coeff_key,
                                       const char* density_key) {
    const FracParams params = read_params(doc);
    const char* ck = doc.contains(coeff_key) ? coeff_key : "c";
    const char* dk = doc.contains(density_key) ? density_key : "phi";
    std::vector<double> coeff = read_vector(require(doc, ck), ck);
    const Json& density = require(doc, dk);
    const std::string kind = require(density, "kind").get<std::string>();
    if (kind == "poly") {
        return SplitRepresentation<S>(params, coeff, read_poly_density(density, S, coeff.size()));
    }
    if (kind == "grid") {
        const std::filesystem::path csv = require(density, "csv").get<std::string>();
        GridFunction samples = read_grid_csv(csv.is_absolute() ? csv : base_dir / csv);
        return SplitRepresentation<S>(params, coeff, std::move(samples));
    }
    throw ParseError("density kind must be 'poly' or 'grid', got '" + kind + "'");
}

template <Side S>
Json to_json_impl(const SplitRepresentation<S>& q, const char* coeff_key, const char* density_key) {
    Json doc;
    doc["alpha"] = q.params.alpha();
    doc["p"] = exponent_to_json(q.params.p());
    doc["a"] = q.params.a();
    doc["b"] = q.params.b();
    doc[coeff_key] = vector_to_json(q.coeff);
    if (!q.has_polynomial_density()) {
        throw ParseError("to_json: sampled densities are written as CSV by the caller");
    }
    doc[density_key] = poly_density_to_json(q.polynomial_density(), S);
    return doc;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_grid_csv(std::ostream& out, const GridFunction& f) {
    out << "t";
    for (std::size_t k = 0; k < f.dim(); ++k) {
        out << ",v" << k;
    }
    out << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_double(f.grid().node(i));
        const bool meaningless = (i == 0 && !f.left_endpoint_finite) ||
                                 (i == f.grid().cells() && !f.right_endpoint_finite);
        for (std::size_t k = 0; k < f.dim(); ++k) {
            out << ',' << (meaningless ? std::string("nan") : format_double(f(i, k)));
        }
        out << '\n';
    }
}

void write_grid_csv(const std::filesystem::path& path, const GridFunction& f) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot open '" + path.string() + "' for writing");
    }
    write_grid_csv(out, f);
}

GridFunction read_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty CSV input");
    }
    const auto header = split_fields(line);
    if (header.size() < 2 || header[0] != "t") {
        throw ParseError("CSV header must be 't,v0[,v1,...]'");
    }
    for (std::size_t k = 1; k < header.size(); ++k) {
        if (header[k] != "v" + std::to_string(k - 1)) {
            throw ParseError("CSV header column " + std::to_string(k) + " must be 'v" + std::to_string(k - 1) + "'");
        }
    }
    const std::size_t dim = header.size() - 1;
    std::vector<double> nodes;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != dim + 1) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim + 1) + " fields");
        }
        nodes.push_back(parse_double(fields[0], line_no));
        if (!std::isfinite(nodes.back())) {
            throw ParseError("line " + std::to_string(line_no) + ": node must be finite");
        }
        for (std::size_t k = 0; k < dim; ++k) {
            values.push_back(parse_double(fields[k + 1], line_no));
        }
    }
    if (nodes.size() < 2) {
        throw ParseError("CSV needs at least two nodes");
    }
    const std::size_t cells = nodes.size() - 1;
    const Grid grid({nodes.front(), nodes.back()}, cells);
    if (!(nodes.front() < nodes.back())) {
        throw ParseError("CSV nodes must be increasing");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(nodes[i] - grid.node(i)) > 1e-9 * grid.interval().length()) {
            throw ParseError("CSV nodes are not uniformly spaced (row " + std::to_string(i + 2) + ")");
        }
    }
    GridFunction f(grid, dim, std::move(values));
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            if (std::isfinite(f(i, k))) {
                continue;
            }
            if (i == 0) {
                f.left_endpoint_finite = false;
            } else if (i == cells) {
                f.right_endpoint_finite = false;
            } else {
                throw ParseError("non-finite value at interior row " + std::to_string(i + 2));
            }
        }
    }
    return f;
}

GridFunction read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    return read_grid_csv(in);
}

double read_exponent(const Json& value) {
    if (value.is_number()) {
        return value.get<double>();
    }
    if (value.is_string()) {
        const auto text = value.get<std::string>();
        if (text == "inf" || text == "infinity" || text == "Infinity") {
            return kInfinity;
        }
    }
    throw ParseError("exponent must be a number or \"inf\"");
}

Json exponent_to_json(double p) {
    if (p == kInfinity) {
        return "inf";
    }
    return p;
}

std::vector<PowerSum> read_poly_density(const Json& node, Side side, std::size_t dim) {
    auto read_terms = [side](const Json& terms) {
        if (!terms.is_array()) {
            throw ParseError("'terms' must be an array");
        }
        std::vector<PowerTerm> out;
        for (const auto& term : terms) {
            Side term_side = side;
            if (term.contains("side")) {
                const Json& value = term.at("side");
                if (value == "left") {
                    term_side = Side::left;
                } else if (value == "right") {
                    term_side = Side::right;
                } else {
                    throw ParseError("term 'side' must be \"left\" or \"right\"");
                }
            }
            out.push_back(PowerTerm{read_number(term, "coeff"), read_number(term, "exponent"), term_side});
        }
        return PowerSum(std::move(out));
    };
    std::vector<PowerSum> components;
    if (node.contains("components")) {
        for (const auto& component : node.at("components")) {
            components.push_back(read_terms(require(component, "terms")));
        }
    } else if (dim == 1) {
        components.push_back(read_terms(require(node, "terms")));
    } else {
        throw ParseError("vector-valued polynomial density needs 'components'");
    }
    if (components.size() != dim) {
        throw ParseError("density has " + std::to_string(components.size()) + " components, expected " +
                         std::to_string(dim));
    }
    return components;
}

Json poly_density_to_json(const std::vector<PowerSum>& components, Side default_side) {
    auto terms_json = [default_side](const PowerSum& sum) {
        Json terms = Json::array();
        for (const auto& term : sum.terms()) {
            Json t;
            t["coeff"] = term.coeff;
            t["exponent"] = term.exponent;
            if (term.side != default_side) {
                t["side"] = term.side == Side::left ? "left" : "right";
            }
            terms.push_back(t);
        }
        return terms;
    };
    Json node;
    node["kind"] = "poly";
    if (components.size() == 1) {
        node["terms"] = terms_json(components[0]);
    } else {
        Json list = Json::array();
        for (const auto& sum : components) {
            Json entry;
            entry["terms"] = terms_json(sum);
            list.push_back(entry);
        }
        node["components"] = list;
    }
    return node;
}

SplitFunction read_split(const Json& doc, const std::filesystem::path& base_dir) {
    return read_split_impl<Side::left>(doc, base_dir, "c", "phi");
}

RightSplitFunction read_right_split(const Json& doc, const std::filesystem::path& base_dir) {
    return read_split_impl<Side::right>(doc, base_dir, "d", "psi");
}

Json to_json(const SplitFunction& q) { return to_json_impl(q, "c", "phi"); }
Json to_json(const RightSplitFunction& q) { return to_json_impl(q, "d", "psi"); }

BvpProblem read_bvp_problem(const Json& doc, const std::filesystem::path& base_dir) {
    const double p = doc.contains("p") ? read_exponent(doc.at("p")) : 2.0;
    const FracParams params(read_number(doc, "alpha"), p, read_number(doc, "a"), read_number(doc, "b"));
    BvpProblem problem{params, {}, read_vector(require(doc, "qa"), "qa"), read_vector(require(doc, "qb"), "qb"), 4};
    if (problem.q_a.size() != problem.q_b.size()) {
        throw ParseError("'qa' and 'qb' must have the same length");
    }
    if (doc.contains("basis_degree")) {
        const Json& degree = doc.at("basis_degree");
        if (!degree.is_number_integer()) {
            throw ParseError("'basis_degree' must be an integer");
        }
        problem.basis_degree = degree.get<int>();
    }
    const Json& f = require(doc, "f");
    const std::string kind = require(f, "kind").get<std::string>();
    if (kind == "poly") {
        problem.f = read_poly_density(f, Side::left, problem.dim());
    } else if (kind == "grid") {
        const std::filesystem::path csv = require(f, "csv").get<std::string>();
        problem.f = read_grid_csv(csv.is_absolute() ? csv : base_dir / csv);
    } else {
        throw ParseError("forcing kind must be 'poly' or 'grid', got '" + kind + "'");
    }
    return problem;
}

Json to_json(const BvpSolution& solution) {
    Json doc;
    doc["q"] = to_json(solution.q);
    Json coeffs = Json::array();
    for (const auto& component : solution.coeffs) {
        coeffs.push_back(vector_to_json(component));
    }
    doc["coeffs"] = coeffs;
    doc["energy_norm"] = solution.energy_norm;
    doc["galerkin_energy"] = solution.galerkin_energy;
    double largest = 0.0;
    for (double r : solution.weak_residuals) {
        largest = std::max(largest, r);
    }
    doc["weak_residual_max"] = largest;
    doc["weak_residuals"] = vector_to_json(solution.weak_residuals);
    doc["bc_defect_b"] = solution.bc_defect_b;
    doc["projection_tolerance"] = solution.projection_tolerance;
    return doc;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

std::vector<double> read_vector(const Json& node, const char* what) {
    if (node.is_number()) {
        return {node.get<double>()};
    }
    if (!node.is_array() || node.empty()) {
        throw ParseError(std::string("'") + what + "' must be a non-empty array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : node) {
        if (!v.is_number()) {
            throw ParseError(std::string("'") + what + "' must contain numbers only");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Json vector_to_json(const std::vector<double>& values) {
    Json out = Json::array();
    for (double v : values) {
        out.push_back(v);
    }
    return out;
}

}  // namespace fraclab::io
