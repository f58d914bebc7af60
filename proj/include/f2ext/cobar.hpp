#pragma once

#include "f2ext/f2linalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace f2ext {

/* A generator of a truncated-polynomial Hopf algebra over F2 (or F2[v]);
 * height is the nilpotence exponent and must be a power of 2. */
struct HopfGenerator {
    std::string name;
    int degree;
    int height;
};

/* Primitive: every generator is primitive.
 * DualSteenrod: generators are zeta_1, zeta_2, ... with the genuine coproduct
 * psi(zeta_k) = sum zeta_i (x) zeta_j^{2^i}, reduced by the truncations. */
enum class CoproductRule { Primitive, DualSteenrod };

struct HopfPresentation {
    enum class Ground { F2, F2v };
    Ground ground = Ground::F2;
    int v_degree = 0;
    std::vector<HopfGenerator> gens;
    CoproductRule rule = CoproductRule::Primitive;
    std::string name;
};

/* known names: dual-A0, dual-A1, dual-A2, EQ0, EQ1, EQ2, E0AF-sigma2tilde;
 * the last takes its generator window from t_window */
HopfPresentation hopf_preset(const std::string& name, int t_window);

/* monomial id: degree in the high 32 bits, index within the degree in the low */
using MonoId = uint64_t;

class HopfAlgebra {
public:
    HopfAlgebra(HopfPresentation p, int t_max);

    const HopfPresentation& presentation() const { return p_; }
    int t_max() const { return t_max_; }

    /* monomial exponent vectors of degree d, lexicographically ordered */
    const std::vector<std::vector<uint32_t>>& basis(int d) const;
    std::size_t dim(int d) const { return basis(d).size(); }
    static int mono_degree(MonoId m) { return int(m >> 32); }
    static uint32_t mono_index(MonoId m) { return uint32_t(m); }
    MonoId id_of(int d, uint32_t idx) const { return (uint64_t(uint32_t(d)) << 32) | idx; }

    std::string mono_str(MonoId m) const;

    /* reduced coproduct as a list of (left, right) monomial-id pairs (F2) */
    const std::vector<std::pair<MonoId, MonoId>>& reduced_coproduct(MonoId m) const;

    /* product of two monomials under the truncations; nullopt when it dies */
    std::optional<MonoId> mono_product(MonoId a, MonoId b) const;

    /* all non-unit monomials with degree <= t_max, by (degree, index) */
    const std::vector<MonoId>& reduced_monomials() const { return reduced_; }

private:
    HopfPresentation p_;
    int t_max_;
    std::vector<std::vector<std::vector<uint32_t>>> basis_;  /* per degree */
    std::vector<MonoId> reduced_;
    mutable std::map<MonoId, std::vector<std::pair<MonoId, MonoId>>> cop_cache_;

    using TensorElt = std::vector<std::pair<MonoId, MonoId>>; /* sorted, xor-reduced */
    TensorElt full_coproduct(MonoId m) const;
    TensorElt generator_coproduct(std::size_t gen) const;
    TensorElt tensor_mul(const TensorElt& a, const TensorElt& b) const;
    void verify_coassociativity() const;
};

/* Exact cobar cohomology dims per (n, t), with a v-torsion profile when the
 * ground ring is F2[v].  torsion[(n,t)] lists one entry per cohomology class:
 * the least p with v^p [x] = 0, or 0 when the class stays nonzero through the
 * window. */
struct CobarCohomology {
    std::map<std::pair<int, int>, int> dims;
    std::map<std::pair<int, int>, std::vector<int>> torsion;
};

CobarCohomology cobar_cohomology(const HopfAlgebra& h, int n_max, int t_max);

/* dimension of the cobar group C^{n,t} (v-powers folded in) */
std::size_t cobar_dim(const HopfAlgebra& h, int n, int t);

}  // namespace f2ext
