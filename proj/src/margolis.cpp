#include "f2ext/margolis.hpp"

#include <fmt/format.h>
#include <stdexcept>

namespace f2ext {

MargolisResult margolis_homology(const GradedModule& m, int n, const SteenrodAlgebra& full,
                                 int max_deg)
{
    MargolisResult res;
    res.n = n;
    res.q = (1 << (n + 1)) - 1;
    const int q = res.q;
    GradedMap qn = action_of(m, milnor_primitive(n), full, m.top_degree());

    /* Q_n^2 = 0 as a matrix identity */
    for (int d = m.min_degree(); d + 2 * q <= m.top_degree() && d <= max_deg; ++d)
        if (!(qn.at(d) * qn.at(d + q)).is_zero())
            throw std::logic_error(fmt::format("Q_{}^2 != 0 at degree {}", n, d));

    auto rank_at = [&](int d) -> std::size_t {
        if (d < m.min_degree() || d > m.top_degree() || !qn.defined(d))
            return 0;
        return rref(qn.at(d)).rank;
    };

    for (int d = m.min_degree(); d <= max_deg - q && d <= m.top_degree(); ++d) {
        std::size_t nd = m.dim_in_degree(d);
        /* left kernel of the row-convention action matrix */
        Subspace ker = kernel_basis(qn.at(d).transposed());
        std::size_t im_into = rank_at(d - q);
        res.ker_dims[d] = int(ker.dim());
        res.im_dims[d] = int(im_into);
        res.homology_dims[d] = int(ker.dim() - im_into);
        if (res.homology_dims[d] < 0)
            throw std::logic_error("margolis: homology dimension negative");

        /* representatives: kernel vectors independent modulo the image */
        Eliminator elim(nd);
        if (d - q >= m.min_degree() && qn.defined(d - q)) {
            const F2Matrix& prev = qn.at(d - q);
            for (std::size_t i = 0; i < prev.rows(); ++i)
                if (!prev.row_is_zero(i))
                    elim.add(prev.row(i));
        }
        std::vector<F2Vector> reps;
        for (std::size_t i = 0; i < ker.dim(); ++i) {
            F2Vector v = ker.basis.row(i);
            if (!elim.add(v))
                reps.push_back(v);
        }
        F2Matrix rep_rows(reps.size(), nd);
        for (std::size_t i = 0; i < reps.size(); ++i)
            rep_rows.set_row(i, reps[i]);
        res.homology_basis.emplace(d, Subspace::from_rows(rep_rows));
        if (res.homology_basis.at(d).dim() != std::size_t(res.homology_dims[d]))
            throw std::logic_error("margolis: representative count mismatch");
    }
    return res;
}

SplitDims split_dims(const GradedModule& m, int tensor_power, int n, const SteenrodAlgebra& full,
                     int s_max, int t_max)
{
    if (tensor_power < 1)
        throw std::invalid_argument("split_dims: tensor power must be >= 1");
    const int q = (1 << (n + 1)) - 1;

    GradedModule t = m;
    for (int k = 1; k < tensor_power; ++k)
        t = tensor(t, m, t_max + q);
    if (tensor_power == 1 && m.top_degree() > t_max + q)
        t = tensor(m, trivial_module(), t_max + q); /* truncate high degrees */

    /* window: homology is read at degrees <= t_max, image ranks at <= t_max+q;
     * the tensor power is built through t_max + q, so both reads are exact */
    MargolisResult mh = margolis_homology(t, n, full, t_max + 2 * q);

    SplitDims out;
    out.q = q;
    for (int s = 0; s <= s_max; ++s)
        for (int td = 0; td <= t_max; ++td) {
            int d = td - s * q;
            auto it = mh.homology_dims.find(d);
            int h = it == mh.homology_dims.end() ? 0 : it->second;
            if (h)
                out.good_dims[{s, td}] = h;
        }
    /* evil part: rank of Q_n out of degree t, concentrated in filtration 0 */
    for (int td = 0; td <= t_max && td <= t.top_degree(); ++td) {
        auto it = mh.im_dims.find(td + q);
        int v = it == mh.im_dims.end() ? 0 : it->second;
        if (v)
            out.evil_dims[td] = v;
    }
    return out;
}

std::vector<int64_t> closed_form_margolis(int n, int t_max)
{
    if (n < 1)
        throw std::invalid_argument("closed_form_margolis: n >= 1 required");
    std::vector<int64_t> series(std::size_t(t_max) + 1, 0);
    series[0] = 1;
    /* generators zeta_j^{e_j}: e_j = 2^{n+2-j} for j <= n+1, else 2; the
     * relation zeta_j^{2^{n+1}} = 0 gives height 2^{n+1}/e_j */
    for (int j = 2;; ++j) {
        int64_t e = j <= n + 1 ? (int64_t(1) << (n + 2 - j)) : 2;
        int64_t deg = e * ((int64_t(1) << j) - 1);
        if (deg > t_max)
            break;
        int64_t height = (int64_t(1) << (n + 1)) / e;
        /* multiply the series by 1 + x^deg + ... + x^{(height-1) deg} */
        std::vector<int64_t> next(series.size(), 0);
        for (int64_t p = 0; p < height && p * deg <= t_max; ++p)
            for (std::size_t d = 0; d + std::size_t(p * deg) < next.size(); ++d)
                next[d + std::size_t(p * deg)] += series[d];
        series = std::move(next);
    }
    return series;
}

}  // namespace f2ext
