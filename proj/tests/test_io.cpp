#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "fraclab/errors.hpp"
#include "fraclab/io.hpp"
#include "fraclab/operators.hpp"

using namespace fraclab;

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(std::nan("")) == "nan");
    CHECK(io::format_double(-HUGE_VAL) == "-inf");
}

TEST_CASE("grid CSV round-trip") {
    const Grid grid({-1.0, 2.0}, 7);
    GridFunction f(grid, 2);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f(i, 0) = grid.node(i) / 3.0;
        f(i, 1) = -std::exp(grid.node(i));
    }
    std::stringstream buffer;
    io::write_grid_csv(buffer, f);
    CHECK(buffer.str().rfind("t,v0,v1\n", 0) == 0);
    const auto back = io::read_grid_csv(buffer);
    CHECK(back.grid() == grid);
    CHECK(back.raw() == f.raw());
}

TEST_CASE("grid CSV: singular endpoint written as nan and read back as a flag") {
    const FracParams params(0.5, 2.0, 0.0, 1.0);
    const auto s = sample(make_split(params, 1.0, PowerSum{}), Grid(params.interval(), 4));
    std::stringstream buffer;
    io::write_grid_csv(buffer, s);
    const auto back = io::read_grid_csv(buffer);
    CHECK_FALSE(back.left_endpoint_finite);
    CHECK(back.right_endpoint_finite);
}

TEST_CASE("grid CSV: malformed input") {
    auto parse = [](const std::string& text) {
        std::stringstream in(text);
        return io::read_grid_csv(in);
    };
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("x,v0\n0,1\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse("t,v0\n0,1\n"), ParseError);
    CHECK_THROWS_AS(parse("t,v0\n0,1\n0.3,abc\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse("t,v0\n0,1\n0.2,1\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse("t,v0\n0,1\n0.5,nan\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse("t,v0\n0,1,2\n1,2\n"), ParseError);
    CHECK(parse("t,v0\r\n0,1\r\n0.5,2\r\n1,3\r\n").size() == 3);
}

TEST_CASE("split JSON round-trip with polynomial density") {
    const FracParams params(0.75, kInfinity, 0.0, 2.0);
    const double coeffs[] = {1.0, 0.0, -3.0};
    const auto q = make_split(params, 0.25, PowerSum::polynomial(coeffs));
    const auto doc = io::to_json(q);
    CHECK(doc["p"] == "inf");
    const auto back = io::read_split(io::Json::parse(doc.dump()));
    CHECK(back.params.alpha() == 0.75);
    CHECK(back.params.p() == kInfinity);
    CHECK(back.coeff == q.coeff);
    CHECK(eval_split(back, 1.3)[0] == eval_split(q, 1.3)[0]);
}

TEST_CASE("split JSON: right-anchored names and grid densities") {
    const auto dir = std::filesystem::temp_directory_path() / "fraclab_io_test";
    std::filesystem::create_directories(dir);
    const Grid grid({0.0, 1.0}, 8);
    io::write_grid_csv(dir / "psi.csv", GridFunction::sample(grid, [](double t) { return t; }));
    const auto doc = io::Json::parse(R"({"alpha":0.6,"p":2,"a":0,"b":1,"d":[0.5],
        "psi":{"kind":"grid","csv":"psi.csv"}})");
    const auto q = io::read_right_split(doc, dir);
    CHECK(q.coeff[0] == 0.5);
    CHECK(q.grid_density().grid() == grid);

    CHECK_THROWS_AS(io::read_split(io::Json::parse(R"({"alpha":0.6,"a":0,"b":1,"c":[0]})")), ParseError);
    CHECK_THROWS_AS(io::read_split(io::Json::parse(R"({"alpha":0.6,"a":0,"b":1,"c":[0],"phi":{"kind":"x"}})")),
                    ParseError);
    CHECK_THROWS_AS(io::read_split(io::Json::parse(R"({"alpha":1.6,"a":0,"b":1,"c":[0],"phi":{"kind":"poly","terms":[]}})")),
                    DomainError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("polynomial terms may override their anchor") {
    const auto node = io::Json::parse(R"({"kind":"poly","terms":[{"coeff":2,"exponent":1},
        {"coeff":-1,"exponent":0.5,"side":"right"}]})");
    const auto f = io::read_poly_density(node, Side::left, 1);
    REQUIRE(f[0].terms().size() == 2);
    CHECK(f[0].terms()[0].side == Side::left);
    CHECK(f[0].terms()[1].side == Side::right);
    const auto back = io::read_poly_density(io::poly_density_to_json(f), Side::left, 1);
    CHECK(back[0].terms()[1].side == Side::right);
    CHECK(back[0].terms()[1].coeff == -1.0);
    CHECK_THROWS_AS(io::read_poly_density(io::Json::parse(R"({"terms":[{"coeff":1,"exponent":0,"side":"up"}]})"),
                                          Side::left, 1),
                    ParseError);
}

TEST_CASE("BVP problem and solution documents") {
    const auto doc = io::Json::parse(R"({"alpha":0.7,"a":0,"b":1,"qa":[0.5],"qb":[1],
        "f":{"kind":"poly","terms":[{"coeff":1,"exponent":0}]},"basis_degree":3})");
    const auto problem = io::read_bvp_problem(doc);
    CHECK(problem.params.p() == 2.0);
    CHECK(problem.basis_degree == 3);
    CHECK(problem.q_a == std::vector<double>{0.5});
    const auto sol = solve_bvp(problem);
    const auto out = io::to_json(sol);
    CHECK(out["coeffs"][0].size() == 4);
    CHECK(out["q"]["c"][0] == 0.5);
    const auto q = io::read_split(out["q"]);
    CHECK(eval_split(q, 0.4)[0] == eval_split(sol.q, 0.4)[0]);

    CHECK_THROWS_AS(io::read_bvp_problem(io::Json::parse(R"({"alpha":0.7,"a":0,"b":1,"qa":[0],"qb":[1,2],
        "f":{"kind":"poly","terms":[]}})")),
                    ParseError);
    CHECK_THROWS_AS(io::read_bvp_problem(io::Json::parse(R"({"alpha":0.7,"a":0,"b":1,"qa":[0],"qb":[1],
        "f":{"kind":"poly","terms":[]},"basis_degree":2.5})")),
                    ParseError);
}
