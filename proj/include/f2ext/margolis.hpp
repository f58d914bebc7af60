#pragma once

#include "f2ext/bruner.hpp"

#include <map>

namespace f2ext {

/* Margolis homology of a module with respect to Q_n.  The module grading is
 * cohomological, so Q_n raises degree by q = 2^{n+1} - 1.  Per degree d:
 *   ker_dims[d]      = dim ker(Q_n : M^d -> M^{d+q})
 *   im_dims[d]       = dim Q_n(M^{d-q})        (image landing in degree d)
 *   homology_dims[d] = ker_dims[d] - im_dims[d]
 */
struct MargolisResult {
    int n = 0;
    int q = 0;
    std::map<int, int> ker_dims, im_dims, homology_dims;
    std::map<int, Subspace> homology_basis;  /* representatives inside ker, reduced mod im */
};

MargolisResult margolis_homology(const GradedModule& m, int n, const SteenrodAlgebra& full,
                                 int max_deg);

/* The good/evil dimension split for the k-th tensor power of m over E[Q_n]:
 *   good_dims[s][t] = dim H(M^{(x)k}; Q_n)^{t - s q}   (the F2[v_n]-tower part)
 *   evil_dims[t]    = dim Q_n((M^{(x)k})^t)            (simple torsion, filtration 0)
 * v_n sits at (s,t) = (1, q), so chart coordinates (t-s, s) put v_2 on a
 * slope-(6,1) line. */
struct SplitDims {
    int q = 0;
    std::map<std::pair<int, int>, int> good_dims;  /* keyed by (s, t) */
    std::map<int, int> evil_dims;
};

SplitDims split_dims(const GradedModule& m, int tensor_power, int n, const SteenrodAlgebra& full,
                     int s_max, int t_max);

/* Poincare series of H(A//A(n)_*; Q_n) as the explicit truncated polynomial
 * algebra F2[zeta_2^{2^n}, zeta_3^{2^{n-1}}, ..., zeta_{n+1}^2, zeta_{n+2}^2, ...]
 * with all generators of height 2^{n+1} in the zeta power; coefficients for
 * degrees 0..t_max. */
std::vector<int64_t> closed_form_margolis(int n, int t_max);

}  // namespace f2ext
