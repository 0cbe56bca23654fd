#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wen/milp/mps.hpp"
#include "wen/milp/problem.hpp"

using namespace wen::milp;

namespace {

MilpProblem toy() {
    MilpProblem p;
    p.name = "toy";
    int x = p.add_variable("x", 0, 5);
    int a = p.add_variable("a", 0, 1, VarType::Binary);
    int b = p.add_variable("b", 0, 1, VarType::Binary);
    int y = p.add_variable("y", -kInf, kInf);
    p.set_objective_coeff(x, 1.5);
    p.set_objective_coeff(a, -2);
    p.set_objective_constant(3.25);
    p.add_constraint("r1", {{x, 1.0}, {a, 2.0}}, Sense::LessEqual, 4.0);
    p.add_constraint("r2", {{x, -1.0}, {b, 1.0}, {y, 0.5}}, Sense::Equal, 0.0);
    p.add_constraint("r3", {{y, 1.0}}, Sense::GreaterEqual, -10.0);
    return p;
}

void check_same(const MilpProblem& a, const MilpProblem& b) {
    REQUIRE(a.num_variables() == b.num_variables());
    REQUIRE(a.num_constraints() == b.num_constraints());
    for (int j = 0; j < a.num_variables(); ++j) {
        const auto& va = a.variables()[static_cast<size_t>(j)];
        const auto& vb = b.variables()[static_cast<size_t>(j)];
        CHECK(va.name == vb.name);
        CHECK(va.lower == vb.lower);
        CHECK(va.upper == vb.upper);
        CHECK(va.type == vb.type);
    }
    for (int r = 0; r < a.num_constraints(); ++r) {
        const auto& ca = a.constraints()[static_cast<size_t>(r)];
        const auto& cb = b.constraints()[static_cast<size_t>(r)];
        CHECK(ca.name == cb.name);
        CHECK(ca.sense == cb.sense);
        CHECK(ca.rhs == cb.rhs);
        REQUIRE(ca.terms.size() == cb.terms.size());
        for (size_t k = 0; k < ca.terms.size(); ++k) {
            CHECK(ca.terms[k].first == cb.terms[k].first);
            CHECK(ca.terms[k].second == cb.terms[k].second);
        }
    }
    CHECK(a.objective() == b.objective());
    CHECK(a.objective_constant() == b.objective_constant());
}

}  // namespace

TEST_CASE("mps: one constraint yields exactly one non-objective ROWS entry") {
    MilpProblem p;
    int x = p.add_variable("x", 0, 1);
    p.add_constraint("only", {{x, 1.0}}, Sense::LessEqual, 0.5);
    auto doc = export_mps(p);
    size_t rows_at = doc.text.find("ROWS");
    size_t cols_at = doc.text.find("COLUMNS");
    std::string rows = doc.text.substr(rows_at, cols_at - rows_at);
    int entries = 0;
    for (size_t pos = 0; (pos = rows.find('\n', pos)) != std::string::npos; ++pos) ++entries;
    CHECK(entries == 3);  // "ROWS", the N row, the single L row
}

TEST_CASE("mps: binary run is bracketed by a single marker pair") {
    MilpProblem p;
    p.add_variable("x", 0, 1);
    p.add_variable("a", 0, 1, VarType::Binary);
    p.add_variable("b", 0, 1, VarType::Binary);
    auto doc = export_mps(p);
    size_t org = doc.text.find("'INTORG'");
    size_t end = doc.text.find("'INTEND'");
    REQUIRE(org != std::string::npos);
    REQUIRE(end != std::string::npos);
    CHECK(doc.text.find("'INTORG'", org + 1) == std::string::npos);
    CHECK(doc.text.find("'INTEND'", end + 1) == std::string::npos);
}

TEST_CASE("mps: export/parse round-trip on a toy problem") {
    MilpProblem p = toy();
    auto doc = export_mps(p);
    MilpProblem q = parse_mps(doc.text);
    check_same(p, q);
}

TEST_CASE("mps: missing RHS section defaults right-hand sides to zero") {
    std::string text =
        "NAME t\n"
        "ROWS\n"
        " N  OBJ\n"
        " L  c1\n"
        "COLUMNS\n"
        "    x  OBJ  1  c1  1\n"
        "ENDATA\n";
    MilpProblem p = parse_mps(text);
    REQUIRE(p.num_constraints() == 1);
    CHECK(p.constraints()[0].rhs == 0.0);
}

TEST_CASE("mps: undeclared row reference is named in the error") {
    std::string text =
        "NAME t\n"
        "ROWS\n"
        " N  OBJ\n"
        "COLUMNS\n"
        "    x  ghost  1\n"
        "ENDATA\n";
    CHECK_THROWS_WITH_AS(parse_mps(text), doctest::Contains("ghost"), std::runtime_error);
}

TEST_CASE("mps: COLUMNS before ROWS is rejected") {
    std::string text =
        "NAME t\n"
        "COLUMNS\n"
        "    x  OBJ  1\n"
        "ENDATA\n";
    CHECK_THROWS_AS(parse_mps(text), std::runtime_error);
}

TEST_CASE("mps: RANGES splits a row into a two-sided pair") {
    std::string text =
        "NAME t\n"
        "ROWS\n"
        " N  OBJ\n"
        " L  c1\n"
        "COLUMNS\n"
        "    x  OBJ  1  c1  1\n"
        "RHS\n"
        "    RHS  c1  4\n"
        "RANGES\n"
        "    RNG  c1  1.5\n"
        "ENDATA\n";
    MilpProblem p = parse_mps(text);
    REQUIRE(p.num_constraints() == 2);
    CHECK(p.constraints()[0].sense == Sense::LessEqual);
    CHECK(p.constraints()[0].rhs == 4.0);
    CHECK(p.constraints()[1].sense == Sense::GreaterEqual);
    CHECK(p.constraints()[1].rhs == doctest::Approx(2.5));
}

TEST_CASE("mps: names with whitespace are sanitized and mapped") {
    MilpProblem p;
    p.add_variable("bad name", 0, 1);
    auto doc = export_mps(p);
    CHECK(doc.name_map.count("bad_name") == 1);
    CHECK(doc.name_map.at("bad_name") == "bad name");
    MilpProblem q = parse_mps(doc.text);
    CHECK(q.variables()[0].name == "bad_name");
}

TEST_CASE("mps: random round-trip property") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> U(-10, 10);
    for (int it = 0; it < 25; ++it) {
        MilpProblem p;
        int n = 2 + static_cast<int>(rng() % 6u);
        for (int j = 0; j < n; ++j) {
            bool bin = rng() % 3 == 0;
            if (bin)
                p.add_variable("v" + std::to_string(j), 0, 1, VarType::Binary);
            else {
                double lo = U(rng), hi = lo + std::abs(U(rng));
                if (rng() % 4 == 0) lo = -kInf;
                if (rng() % 4 == 0) hi = kInf;
                p.add_variable("v" + std::to_string(j), lo, hi);
            }
            if (rng() % 2) p.set_objective_coeff(j, U(rng));
        }
        int m = 1 + static_cast<int>(rng() % 5u);
        for (int r = 0; r < m; ++r) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < n; ++j)
                if (rng() % 2) terms.push_back({j, U(rng)});
            if (terms.empty()) terms.push_back({0, 1.0});
            p.add_constraint("c" + std::to_string(r), terms,
                             static_cast<Sense>(rng() % 3u), U(rng));
        }
        MilpProblem q = parse_mps(export_mps(p).text);
        check_same(p, q);
    }
}
