#include "f2ext/bruner.hpp"

#include <doctest.h>
#include <fstream>
#include <map>
#include <sstream>

using namespace f2ext;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const GradedModule& a2_module()
{
    static GradedModule m = parse_module(read_file(std::string(F2EXT_DATA_DIR) + "/A2_module.def"));
    return m;
}

}  // namespace

TEST_CASE("parse the A(2) dataset: 64 generators, top degree 23")
{
    const auto& m = a2_module();
    CHECK(m.dim() == 64);
    CHECK(m.degree(0) == 0);
    CHECK(m.top_degree() == 23);
    /* third block's first record: Sq^1(g_0) = g_1 */
    auto it = m.actions().find({0, 1});
    REQUIRE(it != m.actions().end());
    CHECK(it->second == std::vector<int>{1});
}

TEST_CASE("parse the trivial module and line-break insensitivity")
{
    auto m = parse_module("1 0");
    CHECK(m.dim() == 1);
    CHECK(m.degree(0) == 0);
    CHECK(m.actions().empty());
    auto m2 = parse_module("1\n\n0\n");
    CHECK(m == m2);
}

TEST_CASE("parse errors carry token offsets")
{
    CHECK_THROWS_AS(parse_module("2 0 1 0 1 1"), BrunerError);            /* truncated record */
    CHECK_THROWS_AS(parse_module("2 0 1 5 1 1 1"), BrunerError);          /* index >= n */
    CHECK_THROWS_AS(parse_module("2 0 1 0 2 1 1"), BrunerError);          /* degree mismatch */
    CHECK_THROWS_AS(parse_module("3 0 1"), BrunerError);                  /* truncated degrees */
    CHECK_THROWS_AS(parse_module("1 x"), BrunerError);                    /* non-integer */
    try {
        parse_module("2 0 1 0 1 1 5");
        CHECK(false);
    } catch (const BrunerError& e) {
        CHECK(e.token_index == 6);
    }
}

TEST_CASE("serialize: canonical form round trips")
{
    auto f2 = trivial_module();
    CHECK(serialize_module(f2) == "1\n0\n");

    const auto& m = a2_module();
    auto text = serialize_module(m);
    auto back = parse_module(text);
    CHECK(back == m);
    /* canonicalization is idempotent */
    CHECK(serialize_module(back) == text);
}

TEST_CASE("two equal tables serialize identically")
{
    auto a = parse_module("2 0 1 0 1 1 1");
    auto b = parse_module("2\n0 1\n0 1 1 1\n");
    CHECK(serialize_module(a) == serialize_module(b));
}

TEST_CASE("action of Sq^1 twice is zero on validated modules")
{
    const auto& m = a2_module();
    for (int d = 0; d <= 23; ++d) {
        F2Matrix sq1 = m.sq_matrix(1, d);
        F2Matrix sq1sq1 = sq1 * m.sq_matrix(1, d + 1);
        CHECK(sq1sq1.is_zero());
    }
}

TEST_CASE("unit word acts as the identity")
{
    const auto& m = a2_module();
    SteenrodAlgebra full(Profile::full(), 30);
    auto id = action_of(m, MilnorElement::unit(), full, 23);
    CHECK(id.shift == 0);
    for (int d = 0; d <= 23; ++d)
        CHECK(id.at(d) == F2Matrix::identity(m.dim_in_degree(d)));
}

TEST_CASE("Q_2 action on the A(2) dataset squares to zero")
{
    const auto& m = a2_module();
    SteenrodAlgebra full(Profile::full(), 30);
    auto q2 = action_of(m, milnor_primitive(2), full, 23);
    CHECK(q2.shift == 7);
    for (int d = 0; d <= 16; ++d) {
        F2Matrix square = q2.at(d) * q2.at(d + 7);
        CHECK(square.is_zero());
    }
    /* Q_2 agrees with the commutator route Sq^4 Q_1 + Q_1 Sq^4 */
    auto q1 = action_of(m, milnor_primitive(1), full, 23);
    for (int d = 0; d <= 16; ++d) {
        F2Matrix sq4_then_q1 = m.sq_matrix(4, d) * q1.at(d + 4);
        F2Matrix q1_then_sq4 = q1.at(d) * m.sq_matrix(4, d + 3);
        CHECK(q2.at(d) == sq4_then_q1 + q1_then_sq4);
    }
}

TEST_CASE("validate_module: the A(2) dataset is Adem-consistent to degree 23")
{
    auto report = validate_module(a2_module(), 23);
    CHECK(report.empty());
}

TEST_CASE("validate_module: small modules")
{
    CHECK(validate_module(parse_module("2 0 1 0 1 1 1"), 10).empty());
    CHECK(validate_module(parse_module("2 0 2 0 2 1 1"), 10).empty());
    /* a lone Sq^3 cell contradicts Sq^3 = Sq^1 Sq^2 */
    CHECK(!validate_module(parse_module("2 0 3 0 3 1 1"), 10).empty());
}

TEST_CASE("validate_module: corrupting the A(2) dataset is detected")
{
    const auto& m = a2_module();
    auto actions = m.actions();
    /* flip one action bit: remove g_1 from Sq^1(g_0) */
    actions[{0, 1}].clear();
    actions.erase({0, 1});
    GradedModule corrupt(m.degrees(), actions);
    CHECK(!validate_module(corrupt, 23).empty());
}

TEST_CASE("tensor with F2 is the identity")
{
    const auto& m = a2_module();
    auto t = tensor(m, trivial_module(), 23);
    CHECK(t.dim() == m.dim());
    CHECK(t.degrees() == m.degrees());
    CHECK(t.actions() == m.actions());
}

TEST_CASE("tensor dimensions satisfy the Kunneth rule")
{
    const auto& m = a2_module();
    auto t = tensor(m, m, 20);
    for (int d = 0; d <= 20; ++d) {
        std::size_t expect = 0;
        for (int i = 0; i <= d; ++i)
            expect += m.dim_in_degree(i) * m.dim_in_degree(d - i);
        CHECK(t.dim_in_degree(d) == expect);
    }
}

TEST_CASE("tensor slice of the A(2) dataset validates")
{
    auto t = tensor(a2_module(), a2_module(), 10);
    CHECK(validate_module(t, 10).empty());
}

TEST_CASE("suspension shifts degrees")
{
    auto s = suspend(a2_module(), 7);
    CHECK(s.min_degree() == 7);
    CHECK(s.top_degree() == 30);
    CHECK(validate_module(s, 12).empty());
}

TEST_CASE("direct sum")
{
    auto s = direct_sum(trivial_module(), a2_module());
    CHECK(s.dim() == 65);
    CHECK(s.dim_in_degree(0) == 2);
    CHECK(validate_module(s, 12).empty());
}
