#pragma once

#include "f2ext/f2linalg.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace f2ext {

/* A Milnor basis monomial Sq(r_1, r_2, ...), exponents stored without trailing
 * zeros.  Sq(r_1,...,r_k) has degree sum r_i (2^i - 1). */
struct MilnorMonomial {
    std::vector<uint32_t> r;

    MilnorMonomial() = default;
    explicit MilnorMonomial(std::vector<uint32_t> exps) : r(std::move(exps)) { trim(); }

    static MilnorMonomial unit() { return MilnorMonomial{}; }
    static MilnorMonomial sq(uint32_t k)
    {
        return k ? MilnorMonomial{{k}} : MilnorMonomial{};
    }

    void trim()
    {
        while (!r.empty() && r.back() == 0)
            r.pop_back();
    }

    bool is_unit() const { return r.empty(); }

    int degree() const
    {
        int64_t d = 0;
        for (std::size_t i = 0; i < r.size(); ++i)
            d += int64_t(r[i]) * ((int64_t(1) << (i + 1)) - 1);
        return int(d);
    }

    /* canonical order: lexicographic on the exponent sequence */
    bool operator<(const MilnorMonomial& o) const
    {
        std::size_t n = std::max(r.size(), o.r.size());
        for (std::size_t i = 0; i < n; ++i) {
            uint32_t a = i < r.size() ? r[i] : 0;
            uint32_t b = i < o.r.size() ? o.r[i] : 0;
            if (a != b)
                return a < b;
        }
        return false;
    }
    bool operator==(const MilnorMonomial& o) const { return r == o.r; }

    std::string str() const;
};

/* An F2 sum of Milnor monomials of one common degree. */
struct MilnorElement {
    std::vector<MilnorMonomial> terms;  // sorted, no duplicates

    MilnorElement() = default;
    explicit MilnorElement(MilnorMonomial m) : terms{std::move(m)} {}

    static MilnorElement zero() { return MilnorElement{}; }
    static MilnorElement unit() { return MilnorElement(MilnorMonomial::unit()); }
    static MilnorElement sq(uint32_t k) { return MilnorElement(MilnorMonomial::sq(k)); }

    bool is_zero() const { return terms.empty(); }
    int degree() const { return terms.empty() ? -1 : terms.front().degree(); }

    void toggle(const MilnorMonomial& m);
    MilnorElement& operator^=(const MilnorElement& o);
    bool operator==(const MilnorElement& o) const { return terms == o.terms; }

    std::string str() const;
};

/* Q_i = Sq(0,...,0,1) with the 1 in slot i+1; degree 2^{i+1} - 1. */
MilnorElement milnor_primitive(int i);

/* Dual truncation heights h_1, h_2, ...: the monomial Sq(r_1,...) is admitted
 * iff r_i < 2^{h_i}.  kInfinite means no restriction in that slot. */
struct Profile {
    static constexpr uint8_t kInfinite = 0xff;

    std::vector<uint8_t> heights;  // heights[i] is h_{i+1}

    static Profile full() { return Profile{}; }
    /* A(n): heights (n+1, n, ..., 1, 0, 0, ...) */
    static Profile subalgebra_A(int n);
    /* E[Q_n]: dual E[zeta_{n+1}] */
    static Profile exterior_Q(int n);
    /* E[Q_0, ..., Q_n]: dual E[zeta_1, ..., zeta_{n+1}] */
    static Profile exterior_Q_range(int n);

    /* slot is 1-based; the empty heights vector is the full algebra */
    uint8_t height(std::size_t slot) const
    {
        if (heights.empty())
            return kInfinite;
        return slot <= heights.size() ? heights[slot - 1] : 0;
    }

    bool is_full() const { return heights.empty(); }
    bool admits(const MilnorMonomial& m) const;
    bool operator==(const Profile& o) const { return heights == o.heights; }
    std::string str() const;
};

/* An admissible word Sq^{i_1} Sq^{i_2} ... with i_j >= 2 i_{j+1}; the unit is
 * the empty word. */
using AdmissibleWord = std::vector<uint32_t>;

/* Classical Adem relation: for a < 2b,
 *   Sq^a Sq^b = sum_c C(b-c-1, a-2c) Sq^{a+b-c} Sq^c  (mod 2),
 * every output word already admissible.  a >= 2b is rejected. */
std::vector<AdmissibleWord> adem_rewrite(uint32_t a, uint32_t b);

/* The (possibly profile-restricted, degree-capped) Steenrod algebra in the
 * Milnor basis.  Values handed out are immutable; the internal caches are
 * guarded by a mutex so concurrent callers are safe. */
class SteenrodAlgebra {
public:
    SteenrodAlgebra(Profile profile, int max_degree);

    const Profile& profile() const { return profile_; }
    int max_degree() const { return max_degree_; }

    /* all admitted monomials of degree d in canonical order */
    const std::vector<MilnorMonomial>& basis(int d) const;
    std::size_t dim(int d) const { return basis(d).size(); }
    std::optional<std::size_t> index_of(int d, const MilnorMonomial& m) const;

    /* product of basis monomials, as indices into basis(da + db); cached */
    const std::vector<uint32_t>& product_indices(int da, uint32_t ia, int db, uint32_t ib) const;

    /* full product; degree must stay within max_degree unless truncate is set,
     * in which case an over-cap product is zero */
    MilnorElement product(const MilnorElement& x, const MilnorElement& y,
                          bool truncate = false) const;

    /* admissible words of degree d (full Steenrod algebra; profile-independent) */
    const std::vector<AdmissibleWord>& admissible_words(int d) const;

    /* Milnor expansion of an admissible word (full-profile algebras only) */
    MilnorElement admissible_to_milnor(const AdmissibleWord& w) const;

    /* expansion of a Milnor element as a sum of admissible words */
    std::vector<AdmissibleWord> milnor_to_admissible(const MilnorElement& x) const;

private:
    struct AdmBasis {
        std::vector<AdmissibleWord> words;
        Eliminator elim;  // rows: Milnor coordinate vectors of the words
        AdmBasis(std::size_t width) : elim(width) {}
    };

    Profile profile_;
    int max_degree_;
    mutable std::mutex mu_;
    mutable std::vector<std::optional<std::vector<MilnorMonomial>>> basis_cache_;
    mutable std::map<std::pair<int, int>, std::map<uint64_t, std::vector<uint32_t>>> prod_cache_;
    mutable std::vector<std::unique_ptr<AdmBasis>> adm_cache_;

    const std::vector<MilnorMonomial>& basis_locked(int d) const;
    const AdmBasis& adm_basis_locked(int d) const;
};

/* product of raw monomials over the full algebra, no caching */
MilnorElement milnor_monomial_product(const MilnorMonomial& a, const MilnorMonomial& b);

}  // namespace f2ext
