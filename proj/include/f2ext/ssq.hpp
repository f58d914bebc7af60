#pragma once

#include "f2ext/f2linalg.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace f2ext {

/* ---------- generic filtered cochain complexes ---------- */

/* A finitely graded cochain complex with an integer filtration weight per
 * basis element.  d raises s by 1, preserves t, and never decreases the
 * weight.  Matrices are row-convention: row i is the image of basis element i. */
struct FilteredComplex {
    int s_max = 0;
    std::map<std::pair<int, int>, std::vector<int>> weights; /* (s,t) -> per-element weight */
    std::map<std::pair<int, int>, F2Matrix> d;               /* (s,t) -> (s+1,t) */

    std::size_t dim(int s, int t) const;
    const F2Matrix& d_at(int s, int t) const;

    /* d^2 = 0 and weight monotonicity, checked entry-wise; throws on failure */
    void validate() const;
};

/* E_r dimension tables of the filtration spectral sequence, r = 1..r_max,
 * E_r^{f,s,t} with d_r raising (f, s) by (r, 1).  einf is the stable page and
 * is asserted equal to the associated graded of the total cohomology. */
struct SSPages {
    int r_max = 0;
    std::vector<std::map<std::tuple<int, int, int>, int>> pages; /* pages[r-1][(f,s,t)] */
    std::map<std::tuple<int, int, int>, int> einf;
    std::map<std::tuple<int, int, int>, int> gr_total;

    struct Survivor {
        int f, s, t;
        int e1;
        int einf;
    };
    std::vector<Survivor> ledger;
};

SSPages ss_pages(const FilteredComplex& fc, int r_max);

/* half-integer AKSS filtrations n, n + epsilon are stored as the integers
 * 2n, 2n + 1; this renders them back for display */
std::string akss_filtration_label(int stored);

/* ---------- Chevalley-Eilenberg presets ---------- */

enum class CEVariant { L2, L2Bar };

/* Polynomial Chevalley-Eilenberg complex F2[v2] (x) F2[h_{i,j}] with the
 * closed-form differentials; generators are included for every h_{i,j} of
 * internal degree <= t_max.  Gradings per monomial: s = number of h factors,
 * t = internal degree, MR weight from the May-Ravenel filtration
 * (w(h_{2k,j}) = 2^k, w(h_{2k+1,j}) = 3*2^{k-1} for k > 0, w(h_{1,j}) = 1,
 * w(v2) = 0), AF weight = v2 exponent. */
class CEComplex {
public:
    struct Gen {
        std::string name;
        int i, j;
        int degree;
        int mr_weight;
    };

    CEComplex(CEVariant variant, int s_max, int t_max);

    CEVariant variant() const { return variant_; }
    int s_max() const { return s_max_; }
    int t_max() const { return t_max_; }
    const std::vector<Gen>& gens() const { return gens_; }

    /* monomials: exponent vectors, index 0 = v2, then gens() order */
    const std::vector<std::vector<uint32_t>>& basis(int s, int t) const;
    std::size_t dim(int s, int t) const { return basis(s, t).size(); }
    int mr_weight(int s, int t, std::size_t idx) const;
    int af_weight(int s, int t, std::size_t idx) const
    {
        return int(basis(s, t)[idx][0]);
    }
    std::string mono_str(int s, int t, std::size_t idx) const;

    /* differential matrix (s,t) -> (s+1,t); d^2 = 0 is asserted at build */
    const F2Matrix& diff(int s, int t) const;

    /* multiplication by v2 as an index map into basis(s, t+6) */
    std::vector<std::size_t> v2_push(int s, int t) const;

    FilteredComplex filtered_by_mr() const;
    FilteredComplex filtered_by_af() const;

private:
    CEVariant variant_;
    int s_max_, t_max_;
    std::vector<Gen> gens_;
    std::vector<std::vector<std::vector<uint32_t>>> gen_diff_; /* per gen: monomials */
    std::map<std::pair<int, int>, std::vector<std::vector<uint32_t>>> basis_;
    std::map<std::pair<int, int>, F2Matrix> diff_;

    void build_gens();
    void build_basis();
    void build_diff();
    std::size_t index_of(int s, int t, const std::vector<uint32_t>& e) const;
};

/* cohomology of the CE complex per (s, t, MR-weight), with in-window
 * v2-torsion orders per class (0 = survives every v2 power in the window) */
struct CECohomology {
    int t_max = 0;
    std::map<std::tuple<int, int, int>, int> dims;
    std::map<std::tuple<int, int, int>, std::vector<int>> torsion;
};

CECohomology ce_cohomology(const CEComplex& ce);

/* ---------- closed-form basis enumerators ---------- */

/* one basis monomial of the May-Ravenel E_1-term for l2bar */
struct MRE1Class {
    enum class Family { IPrime, IDoublePrime, II };
    Family family;
    int s, t, f;        /* cohomological degree, internal degree, MR weight */
    int v2_exp;
    int predicted_torsion; /* in-window v2-order: 0 = free through t_max */
};

struct MRE1Tables {
    std::map<std::tuple<int, int, int>, int> counts;          /* (s,t,f) -> total */
    std::map<std::tuple<int, int, int>, int> counts_iprime;
    std::map<std::tuple<int, int, int>, int> counts_idprime;
    std::map<std::tuple<int, int, int>, int> counts_ii;
    std::vector<MRE1Class> classes;
    /* optional intermediate families of the first-round page */
    std::map<std::tuple<int, int, int>, int> afe1_counts;
};

MRE1Tables mre1_enumerate(int s_max, int t_max, bool include_afe1);

/* v2-free class counts per (s,t) from a computed torsion profile */
std::map<std::pair<int, int>, int> v2_local_rank(const CECohomology& c, int s_max, int t_max);

/* bidegree pairs where a torsion family dies in-window while classes exist at
 * the landing spot in another filtration: candidate hidden-v2-extension sites
 * that the May-Ravenel E_1 data cannot decide */
struct ExtensionAmbiguity {
    int s, t_death;
    int f_source, f_candidate;
};
std::vector<ExtensionAmbiguity> extension_ambiguities(const MRE1Tables& tables, int t_max);

/* ---------- the parabola formula ---------- */

struct Rational {
    int64_t num = 0, den = 1;
    Rational() = default;
    Rational(int64_t n, int64_t d);
    bool is_integer() const { return den == 1; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    std::string str() const;
};

/* positive dyadic mass written p/q with q a power of two */
struct DyadicMass {
    int64_t p = 1, q = 1;
};
DyadicMass parse_dyadic(const std::string& text);

/* points (n, t - n) with t - n = (4/M) n^2 - 3 n + 6, exact */
std::vector<std::pair<int, Rational>> parabola_points(const DyadicMass& mass, int n_min,
                                                      int n_max);

}  // namespace f2ext
