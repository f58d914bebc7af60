/* Acceptance suite: one all-or-nothing check per criterion, each printing a
 * single PASS/FAIL line.  Run everything (default) or one with
 * --criterion N.  A stretch item that needs externally supplied data prints
 * SKIP and does not fail the run. */

#include "f2ext/chart.hpp"
#include "f2ext/cobar.hpp"
#include "f2ext/margolis.hpp"
#include "f2ext/resolution.hpp"
#include "f2ext/ssq.hpp"

#include <chrono>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace f2ext;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define REQUIRE_EQ(a, b, what)                                                              \
    do {                                                                                    \
        auto va = (a);                                                                      \
        auto vb = (b);                                                                      \
        if (!(va == vb))                                                                    \
            throw Failure(fmt::format("{}: {} != {}", what, va, vb));                      \
    } while (0)

#define REQUIRE_TRUE(cond, what)                                                           \
    do {                                                                                    \
        if (!(cond))                                                                        \
            throw Failure(what);                                                           \
    } while (0)

std::string data_path(const std::string& name) { return std::string(F2EXT_DATA_DIR) + "/" + name; }

GradedModule load_module_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in.good())
        throw Failure(fmt::format("cannot open {}", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_module(ss.str());
}

const GradedModule& a2_module()
{
    static GradedModule m = load_module_file(data_path("A2_module.def"));
    return m;
}

std::shared_ptr<SteenrodAlgebra> shared_full(int cap)
{
    return std::make_shared<SteenrodAlgebra>(Profile::full(), cap);
}

/* ---- criterion 1: the A(2) dataset parses to the documented shape ---- */
void criterion_1()
{
    const GradedModule& m = a2_module();
    REQUIRE_EQ(m.dim(), 64, "dimension");
    REQUIRE_EQ(m.degree(0), 0, "first generator degree");
    REQUIRE_EQ(m.top_degree(), 23, "top degree");
    /* degree multiset = coefficients of (1+...+x^7)(1+x^3+x^6+x^9)(1+x^7) */
    std::map<int, int> series;
    for (int a = 0; a <= 7; ++a)
        for (int b : {0, 3, 6, 9})
            for (int c : {0, 7})
                series[a + b + c]++;
    for (int d = 0; d <= 23; ++d)
        REQUIRE_EQ(m.dim_in_degree(d), std::size_t(series[d]),
                   fmt::format("generator count in degree {}", d));
}

/* ---- criterion 2: Adem soundness of the dataset through degree 23 ---- */
void criterion_2()
{
    auto report = validate_module(a2_module(), 23);
    REQUIRE_TRUE(report.empty(),
                 fmt::format("{} Adem relations fail on the dataset", report.size()));
}

/* ---- criterion 3: Margolis homology facts ---- */
void criterion_3()
{
    auto full = shared_full(32);
    /* margolis_homology asserts Q_2^2 = 0 as matrices internally */
    auto r = margolis_homology(a2_module(), 2, *full, 30);
    for (const auto& [d, h] : r.homology_dims)
        REQUIRE_EQ(h, 0, fmt::format("H(A(2); Q_2) in degree {}", d));

    auto fast = closed_form_margolis(2, 48);
    /* brute-force expansion oracle */
    std::vector<std::pair<int64_t, int64_t>> gens;
    for (int j = 2;; ++j) {
        int64_t e = j <= 3 ? (int64_t(1) << (4 - j)) : 2;
        int64_t deg = e * ((int64_t(1) << j) - 1);
        if (deg > 48)
            break;
        gens.push_back({deg, 8 / e});
    }
    std::vector<int64_t> slow(49, 0);
    std::function<void(std::size_t, int64_t)> rec = [&](std::size_t g, int64_t deg) {
        if (g == gens.size()) {
            slow[std::size_t(deg)]++;
            return;
        }
        for (int64_t p = 0; p < gens[g].second && deg + p * gens[g].first <= 48; ++p)
            rec(g + 1, deg + p * gens[g].first);
    };
    rec(0, 0);
    REQUIRE_TRUE(fast == slow, "closed_form_margolis(2,48) differs from the expansion oracle");
}

/* ---- criterion 4: good/evil split against the E[Q_2]-resolution ---- */
void criterion_4()
{
    const int t_max = 30, s_max = 4, q = 7;
    auto full = shared_full(t_max + 2 * q + 1);
    GradedModule m = direct_sum(trivial_module(), a2_module());
    auto alg = std::make_shared<SteenrodAlgebra>(Profile::exterior_Q(2), t_max + 1);
    for (int k = 1; k <= 2; ++k) {
        auto sd = split_dims(m, k, 2, *full, s_max, t_max);
        GradedModule tk = m;
        for (int i = 1; i < k; ++i)
            tk = tensor(tk, m, t_max + q);
        if (tk.top_degree() > t_max + q)
            tk = tensor(tk, trivial_module(), t_max + q);
        MinimalResolution res(alg, full, tk, s_max, t_max);
        for (int s = 0; s <= s_max; ++s)
            for (int t = 0; t <= t_max; ++t) {
                int good = sd.good_dims.count({s, t}) ? sd.good_dims.at({s, t}) : 0;
                int evil = (s == 0 && sd.evil_dims.count(t)) ? sd.evil_dims.at(t) : 0;
                REQUIRE_EQ(int(res.ext_dim(s, t)), good + evil,
                           fmt::format("k={} split vs resolution at (s,t)=({},{})", k, s, t));
            }
    }
}

/* ---- criterion 5: resolution/cobar duality via change of rings ---- */
void criterion_5()
{
    auto full = shared_full(50);
    /* A(1) vs dual-A(1): s <= 5 and stem <= 20, plus the tower band
     * s <= 12, stem <= 2 */
    {
        HopfAlgebra h(hopf_preset("dual-A1", 26), 26);
        auto c = cobar_cohomology(h, 5, 25);
        auto alg = std::make_shared<SteenrodAlgebra>(Profile::subalgebra_A(1), 26);
        MinimalResolution r(alg, full, trivial_module(), 5, 25);
        for (int s = 0; s <= 5; ++s)
            for (int t = s; t - s <= 20 && t <= 25; ++t) {
                int cd = c.dims.count({s, t}) ? c.dims.at({s, t}) : 0;
                REQUIRE_EQ(std::size_t(cd), r.ext_dim(s, t),
                           fmt::format("A(1) duality at (s,t)=({},{})", s, t));
            }
        auto cband = cobar_cohomology(h, 12, 14);
        MinimalResolution rband(alg, full, trivial_module(), 12, 14);
        for (int s = 0; s <= 12; ++s)
            for (int t = s; t - s <= 2 && t <= 14; ++t) {
                int cd = cband.dims.count({s, t}) ? cband.dims.at({s, t}) : 0;
                REQUIRE_EQ(std::size_t(cd), rband.ext_dim(s, t),
                           fmt::format("A(1) tower band at (s,t)=({},{})", s, t));
            }
    }
    /* A(0) and E[Q_0] vs their duals: s <= 24, stem <= 24 */
    for (const char* name : {"A0", "EQ0"}) {
        Profile p = std::string(name) == "A0" ? Profile::subalgebra_A(0) : Profile::exterior_Q(0);
        HopfAlgebra h(hopf_preset(std::string(name) == "A0" ? "dual-A0" : "EQ0", 48), 48);
        auto c = cobar_cohomology(h, 24, 48);
        auto alg = std::make_shared<SteenrodAlgebra>(p, 48);
        MinimalResolution r(alg, full, trivial_module(), 24, 48);
        for (int s = 0; s <= 24; ++s)
            for (int t = s; t - s <= 24 && t <= 48; ++t) {
                int cd = c.dims.count({s, t}) ? c.dims.at({s, t}) : 0;
                REQUIRE_EQ(std::size_t(cd), r.ext_dim(s, t),
                           fmt::format("{} duality at (s,t)=({},{})", name, s, t));
            }
    }
}

/* ---- criterion 6: the 1/11 vanishing line over degree-46-truncated A ---- */
void criterion_6()
{
    auto alg = std::make_shared<SteenrodAlgebra>(Profile::full(), 46);
    auto full = shared_full(46);
    MinimalResolution r(alg, full, a2_module(), 12, 42);
    REQUIRE_EQ(r.ext_dim(0, 0), std::size_t(1), "chart must be nonzero at (0,0)");
    int above_line = 0, checked = 0;
    for (int s = 0; s <= 12; ++s)
        for (int t = s; t - s <= 30 && t <= 42; ++t) {
            if (11 * s > (t - s) + 12) {
                ++checked;
                if (r.ext_dim(s, t))
                    ++above_line;
            }
        }
    REQUIRE_TRUE(checked > 50, "vanishing region unexpectedly small");
    REQUIRE_EQ(above_line, 0, "nonzero Ext above the 1/11 line");
}

/* ---- criterion 7: cohomology of the algebraic good complex ---- */
void criterion_7()
{
    const int n_max = 4, t_max = 48;
    HopfAlgebra h(hopf_preset("E0AF-sigma2tilde", t_max), t_max);
    auto c = cobar_cohomology(h, n_max, t_max);
    /* monomial count of F2[v2, h21t, h_{i,j}] with |v2| = (0,6),
     * |h21t| = (1,12), |h_{i,j}| = (1, 2^{j+1}(2^i - 1)), i >= 3 */
    std::vector<std::pair<int, int>> hgens = {{1, 12}};
    for (int i = 3;; ++i) {
        bool any = false;
        for (int j = 0; j <= 1; ++j) {
            int deg = (1 << (j + 1)) * ((1 << i) - 1);
            if (deg <= t_max) {
                hgens.push_back({1, deg});
                any = true;
            }
        }
        if (!any)
            break;
    }
    std::map<std::pair<int, int>, int> expect;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t g, int n, int t) {
        if (g == hgens.size()) {
            for (int a = 0; t + 6 * a <= t_max; ++a)
                expect[{n, t + 6 * a}]++;
            return;
        }
        for (int e = 0; n + e * hgens[g].first <= n_max && t + e * hgens[g].second <= t_max; ++e)
            rec(g + 1, n + e * hgens[g].first, t + e * hgens[g].second);
    };
    rec(0, 0, 0);
    for (int n = 0; n <= n_max; ++n)
        for (int t = 0; t <= t_max; ++t) {
            int got = c.dims.count({n, t}) ? c.dims.at({n, t}) : 0;
            int want = expect.count({n, t}) ? expect.at({n, t}) : 0;
            REQUIRE_EQ(got, want, fmt::format("HCalg dims at (n,t)=({},{})", n, t));
        }
}

/* ---- criterion 8: CE cohomology of l2bar vs the closed-form basis ---- */
void criterion_8()
{
    const int s_cap = 6, t_cap = 60;
    CEComplex ce(CEVariant::L2Bar, s_cap, t_cap);
    auto coh = ce_cohomology(ce);
    auto tables = mre1_enumerate(s_cap, t_cap, false);
    /* per (s,t,f), both directions */
    std::map<std::tuple<int, int, int>, int> got;
    for (const auto& [key, n] : coh.dims)
        got[key] = n;
    REQUIRE_TRUE(got == tables.counts, "CE cohomology differs from the basis enumeration");
    REQUIRE_TRUE(!got.empty(), "empty comparison window");
}

/* ---- criterion 9: E_infinity of the AF-filtered complex ---- */
void criterion_9()
{
    const int s_cap = 5, t_cap = 48;
    CEComplex ce(CEVariant::L2Bar, s_cap, t_cap);
    auto pages = ss_pages(ce.filtered_by_af(), 3); /* asserts einf == gr H internally */
    auto coh = ce_cohomology(ce);
    std::map<std::pair<int, int>, int> from_einf, from_total;
    for (const auto& [key, n] : pages.einf) {
        auto [f, s, t] = key;
        if (s <= s_cap && t <= t_cap)
            from_einf[{s, t}] += n;
    }
    for (const auto& [key, n] : coh.dims) {
        auto [s, t, f] = key;
        from_total[{s, t}] += n;
    }
    REQUIRE_TRUE(from_einf == from_total,
                 "AF E_infinity does not match the graded total cohomology");
}

/* ---- criterion 10: connecting homomorphisms ---- */
void criterion_10()
{
    auto full = shared_full(24);
    /* split SES: delta = 0 */
    {
        auto alg = std::make_shared<SteenrodAlgebra>(Profile::subalgebra_A(1), 16);
        GradedModule a = suspend(trivial_module(), 2);
        GradedModule b = load_module_file(data_path("two_cell_sq1.def"));
        ModuleSES ses;
        ses.sub = a;
        ses.quot = b;
        ses.mid = direct_sum(a, b);
        ses.incl.shift = ses.proj.shift = 0;
        for (int d = 0; d <= 2; ++d) {
            F2Matrix I(a.dim_in_degree(d), ses.mid.dim_in_degree(d));
            F2Matrix P(ses.mid.dim_in_degree(d), b.dim_in_degree(d));
            /* direct_sum keeps a's generators first within each degree */
            std::size_t na = a.dim_in_degree(d);
            for (std::size_t i = 0; i < na; ++i)
                I.set(i, i, true);
            for (std::size_t j = 0; j < b.dim_in_degree(d); ++j)
                P.set(na + j, j, true);
            ses.incl.mats.emplace(d, std::move(I));
            ses.proj.mats.emplace(d, std::move(P));
        }
        auto conn = connecting_map(alg, full, ses, 5, 14);
        for (const auto& [key, mat] : conn.delta)
            REQUIRE_TRUE(mat.is_zero(),
                         fmt::format("split delta nonzero at (s,t)=({},{})", key.first,
                                     key.second));
    }
    /* A(0) Bockstein: delta is an isomorphism in every bidegree, s <= 8 */
    {
        auto alg = std::make_shared<SteenrodAlgebra>(Profile::exterior_Q(0), 12);
        ModuleSES ses;
        ses.sub = suspend(trivial_module(), 1);
        ses.mid = load_module_file(data_path("two_cell_sq1.def"));
        ses.quot = trivial_module();
        ses.incl.shift = ses.proj.shift = 0;
        for (int d = 0; d <= 1; ++d) {
            F2Matrix I(ses.sub.dim_in_degree(d), ses.mid.dim_in_degree(d));
            F2Matrix P(ses.mid.dim_in_degree(d), ses.quot.dim_in_degree(d));
            if (d == 1)
                I.set(0, 0, true);
            if (d == 0)
                P.set(0, 0, true);
            ses.incl.mats.emplace(d, std::move(I));
            ses.proj.mats.emplace(d, std::move(P));
        }
        auto conn = connecting_map(alg, full, ses, 9, 11);
        for (int s = 0; s <= 8; ++s) {
            auto it = conn.delta.find({s, s + 1});
            REQUIRE_TRUE(it != conn.delta.end() && it->second.rows() == 1 &&
                             it->second.cols() == 1 && it->second.get(0, 0),
                         fmt::format("Bockstein delta not an isomorphism at s={}", s));
        }
    }
    /* stretch: the B(2) SES realizing v_2-multiplication on Ext_A(Z).  The
     * B(2) module and the SES matrices are external data; when absent the
     * stretch is reported as skipped. */
    std::ifstream probe(data_path("B2_ses/sub.def"));
    if (!probe.good()) {
        fmt::print("       (stretch: external B(2) SES not supplied; skipped)\n");
        return;
    }
    auto read_map = [&](const std::string& name, const GradedModule& src,
                        const GradedModule& dst) {
        GradedMap g;
        g.shift = 0;
        std::ifstream in(data_path("B2_ses/" + name));
        int d, i, j;
        std::map<int, std::vector<std::pair<int, int>>> entries;
        while (in >> d >> i >> j)
            entries[d].push_back({i, j});
        for (int deg = std::min(src.min_degree(), dst.min_degree());
             deg <= std::max(src.top_degree(), dst.top_degree()); ++deg) {
            F2Matrix m(src.dim_in_degree(deg), dst.dim_in_degree(deg));
            if (auto it = entries.find(deg); it != entries.end())
                for (auto [a, b] : it->second)
                    m.set(std::size_t(a), std::size_t(b), true);
            g.mats.emplace(deg, std::move(m));
        }
        return g;
    };
    ModuleSES ses;
    ses.sub = load_module_file(data_path("B2_ses/sub.def"));
    ses.mid = load_module_file(data_path("B2_ses/mid.def"));
    ses.quot = load_module_file(data_path("B2_ses/quot.def"));
    ses.incl = read_map("incl.tsv", ses.sub, ses.mid);
    ses.proj = read_map("proj.tsv", ses.mid, ses.quot);
    auto big = shared_full(46);
    auto alg = std::make_shared<SteenrodAlgebra>(Profile::full(), 46);
    auto conn = connecting_map(alg, big, ses, 3, 26);
    /* delta at chart (x,y) = (15,1) of Ext_A(Z): source (s,t) = (1,16+7),
     * target (2,23); both one-dimensional and delta nonzero */
    auto it = conn.delta.find({1, 23});
    REQUIRE_TRUE(it != conn.delta.end() && !it->second.is_zero(),
                 "stretch: delta at (15,1) -> (21,2) vanishes");
}

/* ---- criterion 11: the parabola formula against independent arithmetic ---- */
void criterion_11()
{
    for (int64_t q : {1, 2, 4, 8}) {
        for (int64_t p = 1; p <= 16; ++p) {
            DyadicMass m{p, q};
            auto pts = parabola_points(m, 1, 10);
            for (const auto& [n, r] : pts) {
                /* independent route: cross-multiplied __int128 arithmetic */
                __int128 num = __int128(4) * n * n * q - __int128(3 * n - 6) * p;
                __int128 den = p;
                /* r == num/den exactly */
                REQUIRE_TRUE(__int128(r.num) * den == num * __int128(r.den),
                             fmt::format("parabola mismatch at M={}/{}, n={}", p, q, n));
                if (num % den == 0)
                    REQUIRE_TRUE(r.is_integer(),
                                 fmt::format("integer flag missing at M={}/{}, n={}", p, q, n));
            }
        }
    }
}

struct Criterion {
    int id;
    const char* label;
    void (*fn)();
};

const Criterion kCriteria[] = {
    {1, "A(2) dataset: 64 generators, top degree 23, Poincare series", criterion_1},
    {2, "Adem soundness of the dataset through degree 23", criterion_2},
    {3, "Margolis: Q_2-freeness of the dataset and the closed form", criterion_3},
    {4, "good/evil split vs the E[Q_2]-resolution, k <= 2, t <= 30", criterion_4},
    {5, "resolution/cobar duality for A(1), A(0), E[Q_0]", criterion_5},
    {6, "1/11 vanishing line over degree-46-truncated A", criterion_6},
    {7, "cohomology of the algebraic good complex, n <= 4, t <= 48", criterion_7},
    {8, "CE cohomology of l2bar equals the closed-form basis, t <= 60", criterion_8},
    {9, "AF-filtered E_infinity equals graded total cohomology, t <= 48", criterion_9},
    {10, "connecting maps: split SES and the A(0) Bockstein", criterion_10},
    {11, "parabola formula, dyadic masses with denominator <= 8, n <= 10", criterion_11},
};

}  // namespace

int main(int argc, char** argv)
{
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }
    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only && c.id != only)
            continue;
        auto start = std::chrono::steady_clock::now();
        try {
            c.fn();
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
            fmt::print("PASS  criterion {:2}  [{:6} ms]  {}\n", c.id, ms, c.label);
        } catch (const std::exception& e) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
            fmt::print("FAIL  criterion {:2}  [{:6} ms]  {}: {}\n", c.id, ms, c.label, e.what());
            ++failures;
        }
    }
    return failures ? 1 : 0;
}
