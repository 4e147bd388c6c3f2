#include "helpers.hpp"

#include "hilbmod/io.hpp"
#include "hilbmod/verify.hpp"

using namespace hilbmod;
using namespace testing_support;

namespace {

io::ProblemFile random_problem(Rng& rng) {
    const ModuleShape shape = random_shape(rng);
    const cplx lambda = (rng.uniform() < 0.5) ? cplx(1.0, 0.0) : rng.complex_normal() + cplx(3.0, 0.0);
    io::ProblemFile p = io::problem_from_operator(random_operator(shape, rng), lambda);
    if (rng.uniform() < 0.7) {
        const ModuleElement f = random_element(shape, rng);
        p.f = std::vector<CMatrix>(f.blocks().begin(), f.blocks().end());
    }
    if (rng.uniform() < 0.5) p.rank_tol = rng.uniform() * 1e-9;
    if (rng.uniform() < 0.5) p.solve_tol = 1e-8 * (1 + rng.uniform());
    return p;
}

const char* kNilpotent = R"({
  "blocks": [1],
  "k": 2,
  "C": [[[[1, 0], [-1, 0]], [[0, 0], [1, 0]]]],
  "f": [[[[1, 0]], [[0, 0]]]]
})";

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("parse the nilpotent problem") {
        const io::ProblemFile p = io::parse_problem(kNilpotent);
        CHECK(p.blocks == std::vector<int>{1});
        CHECK(p.k == 2);
        CHECK(p.lambda == cplx(1.0, 0.0));
        CHECK(p.op() == op({{1, -1}, {0, 1}}));
        CHECK(p.rhs() == vec({1.0, 0.0}));
        CHECK_FALSE(p.rank_tol.has_value());
    }

    TEST_CASE("syntax errors carry line and column") {
        const std::string text = std::string(kNilpotent).substr(0, 40);
        try {
            (void)io::parse_problem(text);
            FAIL("expected a parse error");
        } catch (const io::ParseError& e) {
            CHECK(std::string(e.what()).rfind("line 4, column", 0) == 0);
        }
        try {
            (void)io::parse_problem("{\n  \"k\": 2,\n  \"blocks\": [1]x\n}");
            FAIL("expected a parse error");
        } catch (const io::ParseError& e) {
            CHECK(std::string(e.what()).rfind("line 3, column 16", 0) == 0);
        }
    }

    TEST_CASE("schema errors carry a JSON pointer") {
        const std::string bad_shape = R"({"blocks": [1], "k": 2, "C": [[[[1, 0], [0, 0]]]]})";
        try {
            (void)io::parse_problem(bad_shape);
            FAIL("expected a parse error");
        } catch (const io::ParseError& e) {
            CHECK(std::string(e.what()).find("/C/0") != std::string::npos);
        }
        const std::string bad_pair = R"({"blocks": [1], "k": 1, "C": [[[[1, 0, 0]]]]})";
        CHECK_THROWS_AS(io::parse_problem(bad_pair), io::ParseError);
        CHECK_THROWS_AS(io::parse_problem(R"({"blocks": [1], "k": 1})"), io::ParseError);
        CHECK_THROWS_AS(io::parse_problem(R"({"blocks": [0], "k": 1, "C": [[]]})"), io::ParseError);
        CHECK_THROWS_AS(io::parse_problem(R"([1, 2])"), io::ParseError);
    }

    TEST_CASE("unknown keys: strict rejects, lenient accepts") {
        const std::string extra = R"({"blocks": [1], "k": 1, "C": [[[[0.5, 0]]]], "comment": "x"})";
        try {
            (void)io::parse_problem(extra);
            FAIL("expected a parse error");
        } catch (const io::ParseError& e) {
            CHECK(std::string(e.what()).find("comment") != std::string::npos);
        }
        const io::ProblemFile p = io::parse_problem(extra, true);
        CHECK(p.op() == op({{0.5}}));
    }

    TEST_CASE("missing right-hand side") {
        const io::ProblemFile p = io::parse_problem(R"({"blocks": [1], "k": 1, "C": [[[[0.5, 0]]]]})");
        CHECK_THROWS_AS((void)p.rhs(), InvalidParameter);
    }

    TEST_CASE("analyze report for the nilpotent problem") {
        const io::ReportFile r = run_analyze(io::parse_problem(kNilpotent), 1e-6);
        CHECK(r.command == "analyze");
        CHECK(r.rank_tol == 1e-6);
        REQUIRE(r.analysis.has_value());
        CHECK(r.analysis->r == 2);
        CHECK(r.analysis->kernel_l.count == 1);
        CHECK(r.analysis->kernel_dims == std::vector<std::vector<int>>{{0, 1, 2}});
        const io::json j = io::report_to_json(r);
        CHECK(j.at("tolerance").at("rank").get<double>() == 1e-6);
        CHECK(j.at("tool") == "hilbmod");
    }

    TEST_CASE("solve report for the nilpotent problem") {
        const io::ReportFile r = run_solve(io::parse_problem(kNilpotent));
        REQUIRE(r.solve.has_value());
        CHECK(r.solve->solvable);
        REQUIRE(r.solve->particular_solution.has_value());
        CHECK(gap((*r.solve->particular_solution)[0], mat({{0}, {1}})) < 1e-14);
    }

    TEST_CASE("text rendering honours the color switch") {
        const io::ReportFile r = run_analyze(io::parse_problem(kNilpotent));
        CHECK(io::report_to_text(r, false).find('\033') == std::string::npos);
        CHECK(io::report_to_text(r, true).find('\033') != std::string::npos);
    }

    TEST_CASE("property: 100 random problem/report pairs round-trip bitwise") {
        Rng rng(808);
        for (int t = 0; t < 100; ++t) {
            const io::ProblemFile p = random_problem(rng);
            const io::ProblemFile p2 = io::parse_problem(io::problem_to_json(p).dump());
            CHECK(p2 == p);

            const io::ReportFile r = p.f ? run_solve(p) : run_analyze(p);
            const io::ReportFile r2 = io::parse_report(io::report_to_json(r).dump(2));
            CHECK(r2 == r);
            // a second pass through the serializer is a fixed point
            CHECK(io::report_to_json(r2).dump() == io::report_to_json(r).dump());
        }
    }
}
