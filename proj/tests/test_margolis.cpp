#include "f2ext/margolis.hpp"

#include <doctest.h>
#include <fstream>
#include <functional>
#include <sstream>

using namespace f2ext;

namespace {

const GradedModule& a2_module()
{
    static GradedModule m = [] {
        std::ifstream in(std::string(F2EXT_DATA_DIR) + "/A2_module.def");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_module(ss.str());
    }();
    return m;
}

SteenrodAlgebra& full_algebra()
{
    static SteenrodAlgebra a(Profile::full(), 64);
    return a;
}

/* independent oracle: count exponent tuples of the truncated polynomial
 * algebra by direct enumeration of exponent tuples */
std::vector<int64_t> brute_force_truncated_poly(int n, int t_max)
{
    std::vector<std::pair<int64_t, int64_t>> gens;  /* (degree, height) */
    for (int j = 2;; ++j) {
        int64_t e = j <= n + 1 ? (int64_t(1) << (n + 2 - j)) : 2;
        int64_t deg = e * ((int64_t(1) << j) - 1);
        if (deg > t_max)
            break;
        gens.push_back({deg, (int64_t(1) << (n + 1)) / e});
    }
    std::vector<int64_t> out(std::size_t(t_max) + 1, 0);
    std::function<void(std::size_t, int64_t)> rec = [&](std::size_t g, int64_t deg) {
        if (g == gens.size()) {
            out[std::size_t(deg)]++;
            return;
        }
        for (int64_t p = 0; p < gens[g].second && deg + p * gens[g].first <= t_max; ++p)
            rec(g + 1, deg + p * gens[g].first);
    };
    rec(0, 0);
    return out;
}

}  // namespace

TEST_CASE("margolis homology of F2 is F2 in degree 0")
{
    for (int n : {0, 1, 2}) {
        auto r = margolis_homology(trivial_module(), n, full_algebra(), 40);
        CHECK(r.homology_dims.at(0) == 1);
        for (auto& [d, h] : r.homology_dims)
            if (d != 0)
                CHECK(h == 0);
    }
}

TEST_CASE("the A(2) dataset is free over E[Q_2]: homology vanishes everywhere")
{
    auto r = margolis_homology(a2_module(), 2, full_algebra(), 30);
    for (auto& [d, h] : r.homology_dims)
        CHECK(h == 0);
    /* freeness also forces ker = im in every degree */
    for (auto& [d, k] : r.ker_dims)
        CHECK(k == r.im_dims.at(d));
}

TEST_CASE("kunneth: margolis homology of a tensor product factors")
{
    std::vector<GradedModule> pool = {
        trivial_module(),
        parse_module("2 0 1 0 1 1 1"),
        parse_module("2 0 2 0 2 1 1"),
        a2_module(),
        suspend(parse_module("2 0 1 0 1 1 1"), 3),
    };
    for (int n : {0, 1, 2}) {
        int q = (1 << (n + 1)) - 1;
        for (std::size_t a = 0; a < pool.size(); ++a)
            for (std::size_t b = a; b < pool.size(); ++b) {
                auto t = tensor(pool[a], pool[b], 20 + q);
                auto rt = margolis_homology(t, n, full_algebra(), 20 + q);
                auto ra = margolis_homology(pool[a], n, full_algebra(), 20 + q);
                auto rb = margolis_homology(pool[b], n, full_algebra(), 20 + q);
                auto dim_of = [](const MargolisResult& r, int d) {
                    auto it = r.homology_dims.find(d);
                    return it == r.homology_dims.end() ? 0 : it->second;
                };
                for (int d = 0; d <= 20; ++d) {
                    int expect = 0;
                    for (int i = 0; i <= d; ++i)
                        expect += dim_of(ra, i) * dim_of(rb, d - i);
                    CHECK(dim_of(rt, d) == expect);
                }
            }
    }
}

TEST_CASE("split_dims of F2 is a clean v_2 tower")
{
    auto s = split_dims(trivial_module(), 1, 2, full_algebra(), 5, 40);
    CHECK(s.evil_dims.empty());
    for (int k = 0; k <= 5; ++k)
        CHECK(s.good_dims.at({k, 7 * k}) == 1);
    CHECK(s.good_dims.size() == 6);
}

TEST_CASE("split_dims rank-nullity accounting per degree")
{
    auto m = direct_sum(trivial_module(), a2_module());
    const int q = 7, t_max = 24;
    auto s = split_dims(m, 2, 2, full_algebra(), 0, t_max);
    auto t = tensor(m, m, t_max + q);
    auto mh = margolis_homology(t, 2, full_algebra(), t_max + q);
    for (int d = 0; d <= t_max; ++d) {
        auto good = s.good_dims.count({0, d}) ? s.good_dims.at({0, d}) : 0;
        auto evil = s.evil_dims.count(d) ? s.evil_dims.at(d) : 0;
        auto im_into = mh.im_dims.count(d) ? mh.im_dims.at(d) : 0;
        CHECK(good + evil + im_into == int(t.dim_in_degree(d)));
    }
}

TEST_CASE("split_dims towers are v_n-free above filtration zero")
{
    auto m = direct_sum(trivial_module(), a2_module());
    auto s = split_dims(m, 2, 2, full_algebra(), 4, 30);
    for (auto& [key, dim] : s.good_dims) {
        auto [f, t] = key;
        if (f >= 1 && t + 7 <= 30 && f + 1 <= 4) {
            auto it = s.good_dims.find({f + 1, t + 7});
            CHECK((it != s.good_dims.end() ? it->second : 0) == dim);
        }
    }
}

TEST_CASE("closed form margolis homology of A//A(2)")
{
    auto series = closed_form_margolis(2, 30);
    CHECK(series[0] == 1);
    CHECK(series[12] == 1);
    CHECK(series[14] == 1);
    CHECK(series[26] == 1);
    for (int d : {1, 2, 3, 11, 13, 15, 25})
        CHECK(series[std::size_t(d)] == 0);
}

TEST_CASE("closed form matches the brute-force expansion oracle to degree 48")
{
    for (int n : {1, 2, 3}) {
        auto fast = closed_form_margolis(n, 48);
        auto slow = brute_force_truncated_poly(n, 48);
        CHECK(fast == slow);
    }
}
