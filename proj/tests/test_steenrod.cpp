#include "f2ext/steenrod.hpp"

#include <doctest.h>
#include <map>

using namespace f2ext;

TEST_CASE("A(2) basis: 64 elements distributed per the Poincare series")
{
    SteenrodAlgebra a2(Profile::subalgebra_A(2), 32);
    /* (1+x+...+x^7)(1+x^3+x^6+x^9)(1+x^7) */
    std::map<int, int> series;
    for (int a = 0; a <= 7; ++a)
        for (int b : {0, 3, 6, 9})
            for (int c : {0, 7})
                series[a + b + c]++;
    std::size_t total = 0;
    for (int d = 0; d <= 31; ++d) {
        CHECK(a2.dim(d) == std::size_t(series.count(d) ? series[d] : 0));
        total += a2.dim(d);
    }
    CHECK(total == 64);
    CHECK(a2.dim(23) == 1);
    CHECK(a2.dim(24) == 0);
}

TEST_CASE("A(1) basis: 8 elements, top degree 6")
{
    SteenrodAlgebra a1(Profile::subalgebra_A(1), 16);
    std::size_t total = 0;
    int top = -1;
    for (int d = 0; d <= 16; ++d) {
        total += a1.dim(d);
        if (a1.dim(d))
            top = d;
    }
    CHECK(total == 8);
    CHECK(top == 6);
}

TEST_CASE("degree-0 basis is the unit for any profile")
{
    for (auto p : {Profile::full(), Profile::subalgebra_A(2), Profile::exterior_Q(2)}) {
        SteenrodAlgebra alg(p, 8);
        REQUIRE(alg.dim(0) == 1);
        CHECK(alg.basis(0)[0].is_unit());
    }
}

TEST_CASE("milnor primitives")
{
    CHECK(milnor_primitive(0) == MilnorElement::sq(1));
    CHECK(milnor_primitive(0).degree() == 1);
    CHECK(milnor_primitive(1).degree() == 3);
    CHECK(milnor_primitive(2).degree() == 7);
    CHECK(milnor_primitive(1).terms[0] == MilnorMonomial(std::vector<uint32_t>{0, 1}));
}

TEST_CASE("Sq1 Sq1 = 0 and unit law")
{
    SteenrodAlgebra a(Profile::full(), 64);
    CHECK(a.product(MilnorElement::sq(1), MilnorElement::sq(1)).is_zero());
    MilnorElement x(MilnorMonomial(std::vector<uint32_t>{2, 1}));
    CHECK(a.product(MilnorElement::unit(), x) == x);
    CHECK(a.product(x, MilnorElement::unit()) == x);
}

TEST_CASE("Q_i Q_i = 0 for i <= 4")
{
    SteenrodAlgebra a(Profile::full(), 70);
    for (int i = 0; i <= 4; ++i) {
        auto q = milnor_primitive(i);
        CHECK(a.product(q, q).is_zero());
    }
}

TEST_CASE("Q_i are primitive derivations: commutator recursion Q_{i+1} = Sq^{2^{i+1}} Q_i + Q_i Sq^{2^{i+1}}")
{
    SteenrodAlgebra a(Profile::full(), 40);
    for (int i = 0; i <= 2; ++i) {
        auto q = milnor_primitive(i);
        auto sq = MilnorElement::sq(uint32_t(1) << (i + 1));
        MilnorElement lhs = a.product(sq, q);
        lhs ^= a.product(q, sq);
        CHECK(lhs == milnor_primitive(i + 1));
    }
}

TEST_CASE("adem_rewrite basic relations")
{
    CHECK(adem_rewrite(1, 1).empty());
    CHECK(adem_rewrite(2, 2) == std::vector<AdmissibleWord>{{3, 1}});
    CHECK(adem_rewrite(1, 2) == std::vector<AdmissibleWord>{{3}});
    CHECK_THROWS(adem_rewrite(4, 2));
}

TEST_CASE("the two multiplication routes agree for Sq^a Sq^b, a+b <= 23")
{
    SteenrodAlgebra a(Profile::full(), 24);
    for (uint32_t s = 2; s <= 23; ++s) {
        for (uint32_t i = 1; i < s; ++i) {
            uint32_t b = s - i;
            MilnorElement direct = a.product(MilnorElement::sq(i), MilnorElement::sq(b));
            MilnorElement via_adem;
            if (i >= 2 * b) {
                via_adem = a.admissible_to_milnor({i, b});
            } else {
                for (const auto& w : adem_rewrite(i, b))
                    via_adem ^= a.admissible_to_milnor(w);
            }
            CHECK(direct == via_adem);
        }
    }
}

TEST_CASE("associativity on all basis triples of total degree <= 20")
{
    SteenrodAlgebra a(Profile::full(), 21);
    for (int da = 1; da <= 18; ++da)
        for (int db = 1; da + db <= 19; ++db)
            for (int dc = 1; da + db + dc <= 20; ++dc)
                for (const auto& x : a.basis(da))
                    for (const auto& y : a.basis(db))
                        for (const auto& z : a.basis(dc)) {
                            MilnorElement ex(x), ey(y), ez(z);
                            auto l = a.product(a.product(ex, ey), ez);
                            auto r = a.product(ex, a.product(ey, ez));
                            CHECK(l == r);
                        }
}

TEST_CASE("milnor_to_admissible round trip")
{
    SteenrodAlgebra a(Profile::full(), 24);
    for (int d = 0; d <= 18; ++d) {
        for (const auto& m : a.basis(d)) {
            MilnorElement e(m);
            auto words = a.milnor_to_admissible(e);
            MilnorElement back;
            for (const auto& w : words)
                back ^= a.admissible_to_milnor(w);
            CHECK(back == e);
        }
    }
}

TEST_CASE("admissible word count equals Milnor basis dimension")
{
    SteenrodAlgebra a(Profile::full(), 30);
    for (int d = 0; d <= 30; ++d)
        CHECK(a.admissible_words(d).size() == a.dim(d));
}

TEST_CASE("profile product closure: A(2) products stay inside A(2)")
{
    SteenrodAlgebra full(Profile::full(), 46);
    SteenrodAlgebra a2(Profile::subalgebra_A(2), 46);
    Profile p2 = Profile::subalgebra_A(2);
    for (int da = 1; da <= 12; ++da)
        for (int db = 1; da + db <= 23; ++db)
            for (const auto& x : a2.basis(da))
                for (const auto& y : a2.basis(db)) {
                    auto prod = full.product(MilnorElement(x), MilnorElement(y));
                    for (const auto& t : prod.terms)
                        CHECK(p2.admits(t));
                }
}

TEST_CASE("E[Q_0,...,Q_n] profiles are exterior on the primitives")
{
    SteenrodAlgebra e01(Profile::exterior_Q_range(1), 8);
    /* 1, Q_0, Q_1, Q_0 Q_1 at degrees 0, 1, 3, 4 */
    CHECK(e01.dim(0) == 1);
    CHECK(e01.dim(1) == 1);
    CHECK(e01.dim(2) == 0);
    CHECK(e01.dim(3) == 1);
    CHECK(e01.dim(4) == 1);
    std::size_t total = 0;
    for (int d = 0; d <= 8; ++d)
        total += e01.dim(d);
    CHECK(total == 4);
}
