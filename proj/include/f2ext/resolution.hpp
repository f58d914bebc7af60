#pragma once

#include "f2ext/bruner.hpp"

#include <map>
#include <memory>
#include <string>

namespace f2ext {

/* A minimal free resolution ... -> F_1 -> F_0 -> M -> 0 over a profile
 * subalgebra of the Steenrod algebra (possibly degree-truncated), computed
 * stage by stage through internal degree t_max.  Minimality makes the number
 * of stage-s generators in internal degree t equal dim Ext^{s,t}(M, F2).
 *
 * Free-module bases are ordered by (generator index, canonical monomial
 * order); generator indices increase with internal degree, and new
 * generators are adjoined from kernel bases in RREF order, so charts and
 * generator names are reproducible across runs. */
class MinimalResolution {
public:
    struct Generator {
        int degree;
    };

    MinimalResolution(std::shared_ptr<const SteenrodAlgebra> alg,
                      std::shared_ptr<const SteenrodAlgebra> full, GradedModule module, int s_max,
                      int t_max);

    int s_max() const { return s_max_; }
    int t_max() const { return t_max_; }
    const SteenrodAlgebra& algebra() const { return *alg_; }
    const std::shared_ptr<const SteenrodAlgebra>& algebra_ptr() const { return alg_; }
    const std::shared_ptr<const SteenrodAlgebra>& full_ptr() const { return full_; }
    const GradedModule& module() const { return module_; }

    const std::vector<Generator>& generators(int s) const { return gens_.at(std::size_t(s)); }
    /* generator indices of stage s in internal degree t */
    std::vector<int> generators_in_degree(int s, int t) const;
    std::size_t ext_dim(int s, int t) const { return generators_in_degree(s, t).size(); }

    /* basis of the free module F_s in internal degree t */
    struct FreeBasis {
        std::vector<std::pair<int, uint32_t>> elems; /* (gen, monomial index) */
        std::vector<std::size_t> gen_offset;         /* per gen, block start; back() = size */
        std::size_t size() const { return elems.size(); }
        std::size_t index(int g, uint32_t m) const { return gen_offset[std::size_t(g)] + m; }
    };
    const FreeBasis& free_basis(int s, int t) const;

    /* value of the differential on generator g of stage s >= 1, over
     * free_basis(s-1, deg g); for s = 0 see augmentation(). */
    const F2Vector& differential(int s, int g) const
    {
        return diffs_.at(std::size_t(s)).at(std::size_t(g));
    }
    /* image of stage-0 generator g in the module slice at its degree */
    const F2Vector& augmentation(int g) const { return diffs_.at(0).at(std::size_t(g)); }

    /* d_s applied to an element of F_s^t (s >= 1); result over free_basis(s-1, t) */
    F2Vector apply_differential(int s, int t, const F2Vector& x) const;
    /* the augmentation F_0^t -> M^t */
    F2Vector apply_augmentation(int t, const F2Vector& x) const;

    /* left action: y = b . x for x over free_basis(s, t); y over free_basis(s, t + deg b) */
    F2Vector act(int s, int t, int b_deg, uint32_t b_idx, const F2Vector& x) const;

    /* solve d_s(x) = y (or the augmentation when s = 0).  order_seed permutes
     * the preference order among solutions; 0 is the deterministic default. */
    std::optional<F2Vector> solve_differential(int s, int t, const F2Vector& y,
                                               uint64_t order_seed = 0) const;

    /* same resolution with every internal degree shifted by k */
    MinimalResolution suspended(int k) const;

    std::map<std::pair<int, int>, int> dims_table() const;

private:
    std::shared_ptr<const SteenrodAlgebra> alg_;
    std::shared_ptr<const SteenrodAlgebra> full_;
    GradedModule module_;
    int s_max_, t_max_;
    std::vector<std::vector<Generator>> gens_;
    std::vector<std::vector<F2Vector>> diffs_;

    mutable std::map<std::pair<int, int>, FreeBasis> fb_cache_;
    mutable std::map<std::pair<int, int>, GradedMap> modact_cache_;

    MinimalResolution(std::shared_ptr<const SteenrodAlgebra> alg,
                      std::shared_ptr<const SteenrodAlgebra> full, GradedModule module, int s_max,
                      int t_max, std::vector<std::vector<Generator>> gens,
                      std::vector<std::vector<F2Vector>> diffs);

    FreeBasis build_free_basis(int s, int t) const;
    const GradedMap& module_action(int b_deg, uint32_t b_idx) const;
    void build();
    void verify();
};

MinimalResolution minimal_resolution(std::shared_ptr<const SteenrodAlgebra> alg,
                                     std::shared_ptr<const SteenrodAlgebra> full,
                                     GradedModule module, int s_max, int t_max);

/* chart data: dims and stable names "s_t_k" per (s,t) */
struct ExtChart {
    std::map<std::pair<int, int>, int> dims;
    std::map<std::pair<int, int>, std::vector<std::string>> names;
};
ExtChart ext_chart(const MinimalResolution& r);

/* A chain map over a degree-0 module map f: M -> N, stored on generators:
 * stage_values[s][g] is the image of generator g of F_s(M) in F_s(N), over
 * free_basis_N(s, deg g).  gen_matrix is its unit-coefficient part: rows are
 * M-generators, columns N-generators at equal (s,t); applied to coordinate
 * columns it is the induced map Ext^{s,t}(N,F2) -> Ext^{s,t}(M,F2). */
struct ChainMap {
    std::vector<std::vector<F2Vector>> stage_values;
    std::map<std::pair<int, int>, F2Matrix> gen_matrix;
};

/* f must be A-linear; rejected with a witness otherwise */
ChainMap lift_chain_map(const MinimalResolution& rM, const MinimalResolution& rN,
                        const GradedMap& f, uint64_t order_seed = 0);

/* nullopt when f commutes with every stored Sq^k; otherwise a witness (d, k) */
std::optional<std::pair<int, int>> a_linear_violation(const GradedModule& m, const GradedModule& n,
                                                      const GradedMap& f);

/* a short exact sequence of modules 0 -> sub -> mid -> quot -> 0 given by
 * degreewise matrices */
struct ModuleSES {
    GradedModule sub, mid, quot;
    GradedMap incl, proj;
};

/* throws with a degree witness when the sequence is inexact or not A-linear */
void validate_ses(const ModuleSES& ses);

/* Connecting homomorphism delta: Ext^{s,t}(sub) -> Ext^{s+1,t}(quot) of the
 * long exact sequence in Ext(-, F2), computed by the lifted-inclusion zig-zag
 * through the middle term.  delta[(s,t)] has rows = quot-generators at
 * (s+1,t), columns = sub-generators at (s,t).  LES exactness (im = ker at
 * every node in the window) is asserted before returning. */
struct ConnectingResult {
    std::map<std::pair<int, int>, F2Matrix> delta;
    ChainMap incl_star; /* F(sub) -> F(mid) */
    ChainMap proj_star; /* F(mid) -> F(quot) */
};

ConnectingResult connecting_map(const ModuleSES& ses, const MinimalResolution& r_sub,
                                const MinimalResolution& r_mid, const MinimalResolution& r_quot);

/* convenience: resolve all three terms and form the connecting map */
ConnectingResult connecting_map(std::shared_ptr<const SteenrodAlgebra> alg,
                                std::shared_ptr<const SteenrodAlgebra> full, const ModuleSES& ses,
                                int s_max, int t_max);

/* The two-cell module F2 + Sigma^{2^i} F2 joined by Sq^{2^i}, its tensor with
 * m, and the resulting SES 0 -> Sigma^{2^i} m -> cone (x) m -> m -> 0; the
 * connecting map of this SES is multiplication by h_i. */
ModuleSES h_multiplication_ses(int i, const GradedModule& m, int max_deg);

/* h_i-multiplication matrices on the chart of r: for each (s,t), rows are
 * generators at (s+1, t+2^i), columns generators at (s,t). */
std::map<std::pair<int, int>, F2Matrix> h_multiplication(const MinimalResolution& r, int i);

}  // namespace f2ext
