#include "f2ext/f2linalg.hpp"

#include <doctest.h>
#include <random>

using namespace f2ext;

namespace {

F2Matrix from_rows(std::initializer_list<std::initializer_list<int>> rows)
{
    std::size_t r = rows.size(), c = rows.begin()->size();
    F2Matrix m(r, c);
    std::size_t i = 0;
    for (auto& row : rows) {
        std::size_t j = 0;
        for (int v : row)
            m.set(i, j++, v != 0);
        ++i;
    }
    return m;
}

F2Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c)
{
    F2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, rng() & 1);
    return m;
}

/* plain O(n^3) elimination on unpacked bytes, used as the oracle */
std::size_t naive_rank(const F2Matrix& m)
{
    std::vector<std::vector<uint8_t>> a(m.rows(), std::vector<uint8_t>(m.cols(), 0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            a[i][j] = m.get(i, j);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t p = rank;
        while (p < m.rows() && !a[p][c])
            ++p;
        if (p == m.rows())
            continue;
        std::swap(a[rank], a[p]);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != rank && a[i][c])
                for (std::size_t j = 0; j < m.cols(); ++j)
                    a[i][j] ^= a[rank][j];
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_CASE("rref identity")
{
    auto m = F2Matrix::identity(3);
    auto r = rref(m);
    CHECK(r.rank == 3);
    CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});
    CHECK(r.reduced == m);
}

TEST_CASE("rref duplicate rows")
{
    auto m = from_rows({{1, 1}, {1, 1}});
    auto r = rref(m);
    CHECK(r.rank == 1);
    CHECK(r.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("rref is idempotent and rank equals transpose rank and naive oracle")
{
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 8; ++trial) {
        auto m = random_matrix(rng, 64, 64);
        auto r = rref(m);
        CHECK(r.rank == naive_rank(m));
        CHECK(r.rank == rref(m.transposed()).rank);
        auto r2 = rref(r.reduced);
        CHECK(r2.reduced == r.reduced);
    }
}

TEST_CASE("rank invariant under row permutation")
{
    std::mt19937 rng(99);
    auto m = random_matrix(rng, 20, 30);
    F2Matrix p(20, 30);
    std::vector<std::size_t> perm(20);
    for (std::size_t i = 0; i < 20; ++i)
        perm[i] = (i * 7 + 3) % 20;
    for (std::size_t i = 0; i < 20; ++i)
        p.set_row(i, m.row(perm[i]));
    CHECK(rref(m).rank == rref(p).rank);
}

TEST_CASE("kernel basic cases")
{
    auto m = from_rows({{1, 1}, {0, 0}});
    auto k = kernel_basis(m);
    CHECK(k.dim() == 1);
    F2Vector v(2);
    v.set(0, true);
    v.set(1, true);
    CHECK(k.contains(v));

    CHECK(kernel_basis(F2Matrix::identity(5)).dim() == 0);
}

TEST_CASE("kernel rank-nullity and annihilation on random instances")
{
    std::mt19937 rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t r = 1 + rng() % 24, c = 1 + rng() % 24;
        auto m = random_matrix(rng, r, c);
        auto rr = rref(m);
        auto k = kernel_basis(m);
        CHECK(k.dim() == c - rr.rank);
        for (std::size_t i = 0; i < k.dim(); ++i) {
            CHECK(m.apply_col(k.basis.row(i)).is_zero());
            /* kernel vectors annihilate the original matrix, exactly */
        }
        /* pivot order strictly increasing */
        std::ptrdiff_t prev = -1;
        for (std::size_t i = 0; i < k.dim(); ++i) {
            auto p = k.basis.row(i).first_set();
            CHECK(p > prev);
            prev = p;
        }
    }
}

TEST_CASE("solve basic cases")
{
    auto id = F2Matrix::identity(2);
    F2Vector b(2);
    b.set(0, true);
    auto x = solve(id, b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    F2Matrix z(2, 2);
    CHECK_FALSE(solve(z, b).has_value());
}

TEST_CASE("solve consistency iff augmented rank matches")
{
    std::mt19937 rng(31415);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 1 + rng() % 16, c = 1 + rng() % 16;
        auto m = random_matrix(rng, r, c);
        F2Vector b(r);
        for (std::size_t i = 0; i < r; ++i)
            b.set(i, rng() & 1);
        F2Matrix aug(r, c + 1);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j)
                aug.set(i, j, m.get(i, j));
            aug.set(i, c, b.get(i));
        }
        bool solvable = rref(m).rank == rref(aug).rank;
        auto x = solve(m, b);
        CHECK(x.has_value() == solvable);
        if (x)
            CHECK(m.apply_col(*x) == b);
    }
}

TEST_CASE("binom_mod2 against Pascal recurrence")
{
    CHECK(binom_mod2(3, 1));
    CHECK_FALSE(binom_mod2(2, 1));
    std::vector<std::vector<uint8_t>> pascal(65, std::vector<uint8_t>(65, 0));
    for (int a = 0; a <= 64; ++a) {
        pascal[a][0] = 1;
        for (int b = 1; b <= a; ++b)
            pascal[a][b] = uint8_t((a ? pascal[a - 1][b - 1] : 0) ^ (a ? pascal[a - 1][b] : 0));
        for (int b = 0; b <= 64; ++b)
            CHECK(binom_mod2(a, b) == (b <= a && pascal[a][b]));
    }
}

TEST_CASE("binom_mod2 Vandermonde")
{
    for (uint64_t a = 0; a <= 32; ++a)
        for (uint64_t b = 0; b <= 32; ++b)
            for (uint64_t k = 0; k <= a + b; ++k) {
                bool lhs = binom_mod2(a + b, k);
                bool rhs = false;
                for (uint64_t i = 0; i <= k; ++i)
                    rhs ^= binom_mod2(a, i) && binom_mod2(b, k - i);
                CHECK(lhs == rhs);
            }
}

TEST_CASE("matrix product matches composed application")
{
    std::mt19937 rng(2024);
    auto a = random_matrix(rng, 9, 13);
    auto b = random_matrix(rng, 13, 7);
    auto ab = a * b;
    for (int trial = 0; trial < 10; ++trial) {
        F2Vector x(9);
        for (std::size_t i = 0; i < 9; ++i)
            x.set(i, rng() & 1);
        CHECK(ab.apply_row(x) == b.apply_row(a.apply_row(x)));
    }
}

TEST_CASE("subspace sum and intersection dimensions")
{
    std::mt19937 rng(5150);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 10;
        auto a = Subspace::from_rows(random_matrix(rng, 1 + rng() % 6, n));
        auto b = Subspace::from_rows(random_matrix(rng, 1 + rng() % 6, n));
        auto s = subspace_sum(a, b);
        auto i = subspace_intersection(a, b);
        CHECK(s.dim() + i.dim() == a.dim() + b.dim());
        for (std::size_t r = 0; r < i.dim(); ++r) {
            CHECK(a.contains(i.basis.row(r)));
            CHECK(b.contains(i.basis.row(r)));
        }
    }
}

TEST_CASE("eliminator tracks combinations")
{
    std::mt19937 rng(42);
    std::size_t n = 20;
    std::vector<F2Vector> rows;
    Eliminator elim(n);
    for (int k = 0; k < 40; ++k) {
        F2Vector v(n);
        for (std::size_t i = 0; i < n; ++i)
            v.set(i, rng() & 1);
        rows.push_back(v);
        auto dep = elim.add(v);
        if (dep) {
            F2Vector acc(n);
            for (std::size_t i = 0; i < dep->size(); ++i)
                if (dep->get(i))
                    acc ^= rows[i];
            CHECK(acc == v);
        }
    }
    CHECK(elim.rank() <= n);
    /* express a random combination of inserted rows */
    F2Vector target(n);
    target ^= rows[3];
    target ^= rows[17];
    auto combo = elim.express(target);
    REQUIRE(combo.has_value());
    F2Vector acc(n);
    for (std::size_t i = 0; i < combo->size(); ++i)
        if (combo->get(i))
            acc ^= rows[i];
    CHECK(acc == target);
}
