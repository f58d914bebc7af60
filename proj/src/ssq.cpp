#include "f2ext/ssq.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace f2ext {

/* ---------- FilteredComplex ---------- */

std::size_t FilteredComplex::dim(int s, int t) const
{
    auto it = weights.find({s, t});
    return it == weights.end() ? 0 : it->second.size();
}

const F2Matrix& FilteredComplex::d_at(int s, int t) const
{
    static const F2Matrix empty;
    auto it = d.find({s, t});
    return it == d.end() ? empty : it->second;
}

void FilteredComplex::validate() const
{
    for (const auto& [key, mat] : d) {
        auto [s, t] = key;
        auto src = weights.find({s, t});
        auto dst = weights.find({s + 1, t});
        std::size_t nd = dst == weights.end() ? 0 : dst->second.size();
        if (src == weights.end() || mat.rows() != src->second.size() || mat.cols() != nd)
            throw std::logic_error(fmt::format("filtered complex: shape mismatch at ({},{})", s, t));
        for (std::size_t i = 0; i < mat.rows(); ++i)
            for (std::size_t j = 0; j < mat.cols(); ++j)
                if (mat.get(i, j) && dst->second[j] < src->second[i])
                    throw std::logic_error(
                        fmt::format("filtration decreases along d at ({},{})", s, t));
        /* d^2 = 0 */
        auto next = d.find({s + 1, t});
        if (next != d.end() && mat.cols() == next->second.rows() &&
            !(mat * next->second).is_zero())
            throw std::logic_error(fmt::format("d^2 != 0 at ({},{})", s, t));
    }
}

namespace {

/* dimension of Z_r^{f,s,t} = {x in F^f C^{s,t} : dx in F^{f+r} C^{s+1,t}},
 * together with a spanning set */
std::vector<F2Vector> cycle_space(const FilteredComplex& fc, int s, int t, int f, int r)
{
    auto wit = fc.weights.find({s, t});
    if (wit == fc.weights.end())
        return {};
    const auto& w = wit->second;
    const F2Matrix& mat = fc.d_at(s, t);
    auto wdst = fc.weights.find({s + 1, t});
    const std::vector<int>* wd = wdst == fc.weights.end() ? nullptr : &wdst->second;

    /* columns of the target below weight f + r */
    std::vector<std::size_t> low_cols;
    if (wd)
        for (std::size_t j = 0; j < wd->size(); ++j)
            if ((*wd)[j] < f + r)
                low_cols.push_back(j);

    std::vector<std::size_t> src;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] >= f)
            src.push_back(i);

    /* kernel of the map F^f -> low-weight part of the target */
    F2Matrix m(src.size(), low_cols.size());
    if (mat.rows()) {
        for (std::size_t a = 0; a < src.size(); ++a)
            for (std::size_t b = 0; b < low_cols.size(); ++b)
                if (mat.get(src[a], low_cols[b]))
                    m.set(a, b, true);
    }
    Subspace ker = kernel_basis(m.transposed());
    std::vector<F2Vector> out;
    for (std::size_t i = 0; i < ker.dim(); ++i) {
        F2Vector v(w.size());
        for (std::size_t a = 0; a < src.size(); ++a)
            if (ker.basis.get(i, a))
                v.set(src[a], true);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

SSPages ss_pages(const FilteredComplex& fc, int r_max)
{
    fc.validate();
    SSPages out;
    out.r_max = r_max;
    out.pages.resize(std::size_t(r_max));

    /* weight spread determines the stable page */
    int wmin = 0, wmax = 0;
    bool first = true;
    for (const auto& [key, w] : fc.weights)
        for (int x : w) {
            if (first) {
                wmin = wmax = x;
                first = false;
            }
            wmin = std::min(wmin, x);
            wmax = std::max(wmax, x);
        }
    int r_stable = wmax - wmin + 2;

    for (const auto& [key, w] : fc.weights) {
        auto [s, t] = key;
        for (int f = wmin; f <= wmax; ++f) {
            for (int r = 1; r <= std::max(r_max, r_stable); ++r) {
                /* E_r^{f} = Z_r^f / (Z_{r-1}^{f+1} + d Z_{r-1}^{f-r+1} at s-1) */
                auto z = cycle_space(fc, s, t, f, r);
                Eliminator elim(w.size());
                for (auto& v : cycle_space(fc, s, t, f + 1, r - 1))
                    elim.add(std::move(v));
                if (s >= 1) {
                    const F2Matrix& dprev = fc.d_at(s - 1, t);
                    if (dprev.rows())
                        for (auto& y : cycle_space(fc, s - 1, t, f - r + 1, r - 1))
                            elim.add(dprev.apply_row(y));
                }
                std::size_t denom_rank = elim.rank();
                for (auto& v : z)
                    elim.add(std::move(v));
                int dim = int(elim.rank() - denom_rank);
                if (r <= r_max && dim)
                    out.pages[std::size_t(r - 1)][{f, s, t}] = dim;
                if (r == std::max(r_max, r_stable) && dim)
                    out.einf[{f, s, t}] = dim;
            }
        }
    }

    /* associated graded of the total cohomology: gr^f H = dim(F^f H) - dim(F^{f+1} H)
     * with F^f H the image of ker(d) cap F^f in H */
    for (const auto& [key, w] : fc.weights) {
        auto [s, t] = key;
        const F2Matrix& mat = fc.d_at(s, t);
        Subspace ker = mat.rows() ? kernel_basis(mat.transposed())
                                  : Subspace::from_rows(F2Matrix::identity(w.size()));
        std::vector<F2Vector> img;
        if (s >= 1) {
            const F2Matrix& dprev = fc.d_at(s - 1, t);
            for (std::size_t i = 0; i < dprev.rows(); ++i)
                if (!dprev.row_is_zero(i))
                    img.push_back(dprev.row(i));
        }
        std::vector<std::size_t> filt_dims;
        for (int f = wmin; f <= wmax + 1; ++f) {
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (w[i] >= f)
                    keep.push_back(i);
            F2Matrix sub(keep.size(), w.size());
            for (std::size_t i = 0; i < keep.size(); ++i)
                sub.set(i, keep[i], true);
            Subspace kf = subspace_intersection(ker, Subspace::from_rows(sub));
            Eliminator elim(w.size());
            for (const auto& v : img)
                elim.add(v);
            std::size_t base = elim.rank();
            for (std::size_t i = 0; i < kf.dim(); ++i)
                elim.add(kf.basis.row(i));
            filt_dims.push_back(elim.rank() - base);
        }
        for (int f = wmin; f <= wmax; ++f) {
            int dim = int(filt_dims[std::size_t(f - wmin)] - filt_dims[std::size_t(f - wmin + 1)]);
            if (dim)
                out.gr_total[{f, s, t}] = dim;
        }
    }

    if (out.einf != out.gr_total)
        throw std::logic_error("ss_pages: E_infinity differs from the graded total cohomology");

    for (const auto& [key, dim] : out.pages.empty() ? out.einf : out.pages[0]) {
        auto [f, s, t] = key;
        auto it = out.einf.find(key);
        out.ledger.push_back({f, s, t, dim, it == out.einf.end() ? 0 : it->second});
    }
    return out;
}

std::string akss_filtration_label(int stored)
{
    if (stored % 2 == 0)
        return fmt::format("{}", stored / 2);
    return fmt::format("{}+e", (stored - 1) / 2);
}

/* ---------- Chevalley-Eilenberg presets ---------- */

namespace {

int mr_weight_of(int i)
{
    if (i == 1)
        return 1;
    if (i % 2 == 0)
        return 1 << (i / 2);
    return 3 * (1 << ((i - 1) / 2 - 1));
}

int h_degree(int i, int j) { return (1 << (j + 1)) * ((1 << i) - 1); }

}  // namespace

CEComplex::CEComplex(CEVariant variant, int s_max, int t_max)
    : variant_(variant), s_max_(s_max), t_max_(t_max)
{
    build_gens();
    build_basis();
    build_diff();
}

void CEComplex::build_gens()
{
    int i0 = variant_ == CEVariant::L2 ? 1 : 3;
    if (variant_ == CEVariant::L2Bar)
        gens_.push_back({"h21t", 2, 1, h_degree(2, 1), mr_weight_of(2)});
    for (int i = i0;; ++i) {
        bool any = false;
        for (int j = 0; j <= 1; ++j) {
            if (h_degree(i, j) <= t_max_) {
                gens_.push_back({fmt::format("h{}{}", i, j), i, j, h_degree(i, j),
                                 mr_weight_of(i)});
                any = true;
            }
        }
        if (!any)
            break;
    }
    std::sort(gens_.begin(), gens_.end(), [](const Gen& a, const Gen& b) {
        if (a.degree != b.degree)
            return a.degree < b.degree;
        return a.name < b.name;
    });

    /* generator differentials as monomial lists over (v2, gens...) */
    gen_diff_.assign(gens_.size(), {});
    auto slot = [&](int i, int j) -> std::size_t {
        for (std::size_t g = 0; g < gens_.size(); ++g)
            if (gens_[g].i == i && gens_[g].j == j)
                return g + 1; /* +1: exponent slot 0 is v2 */
        throw std::logic_error(fmt::format("missing generator h{}{}", i, j));
    };
    auto have = [&](int i, int j) {
        for (const auto& g : gens_)
            if (g.i == i && g.j == j)
                return true;
        return false;
    };
    auto mono = [&](int v2, std::initializer_list<std::pair<std::size_t, uint32_t>> parts) {
        std::vector<uint32_t> e(gens_.size() + 1, 0);
        e[0] = uint32_t(v2);
        for (auto [s, p] : parts)
            e[s] = p;
        return e;
    };
    for (std::size_t g = 0; g < gens_.size(); ++g) {
        const Gen& gen = gens_[g];
        std::vector<std::vector<uint32_t>> dg;
        if (variant_ == CEVariant::L2Bar) {
            if (gen.i == 4 && gen.j == 0)
                dg.push_back(mono(1, {{slot(2, 1), 2}}));
            else if (gen.i == 4 && gen.j == 1)
                dg.push_back(mono(6, {{slot(2, 1), 2}}));
            else if (gen.i >= 5 && gen.j == 0 && have(gen.i - 2, 1))
                dg.push_back(mono(1, {{slot(gen.i - 2, 1), 2}}));
            else if (gen.i >= 5 && gen.j == 1 && have(gen.i - 2, 0))
                dg.push_back(mono(1 << (gen.i - 1), {{slot(gen.i - 2, 0), 2}}));
        } else {
            /* l(2): chi_2 = v2 h20 + h21 */
            if (gen.i == 2 && gen.j == 0) {
                dg.push_back(mono(0, {{slot(1, 0), 1}, {slot(1, 1), 1}}));
            } else if (gen.i == 2 && gen.j == 1) {
                dg.push_back(mono(1, {{slot(1, 0), 1}, {slot(1, 1), 1}}));
            } else if (gen.i == 3 && gen.j == 0) {
                dg.push_back(mono(1, {{slot(1, 0), 1}, {slot(2, 0), 1}}));
                dg.push_back(mono(0, {{slot(1, 0), 1}, {slot(2, 1), 1}}));
            } else if (gen.i == 3 && gen.j == 1) {
                dg.push_back(mono(3, {{slot(1, 1), 1}, {slot(2, 0), 1}}));
                dg.push_back(mono(2, {{slot(1, 1), 1}, {slot(2, 1), 1}}));
            } else if (gen.i == 4 && gen.j == 0) {
                if (have(3, 1))
                    dg.push_back(mono(0, {{slot(1, 0), 1}, {slot(3, 1), 1}}));
                dg.push_back(mono(2, {{slot(1, 1), 1}, {slot(3, 0), 1}}));
                dg.push_back(mono(3, {{slot(2, 0), 2}}));
                dg.push_back(mono(1, {{slot(2, 1), 2}}));
            } else if (gen.i == 4 && gen.j == 1) {
                if (have(3, 1))
                    dg.push_back(mono(5, {{slot(1, 0), 1}, {slot(3, 1), 1}}));
                dg.push_back(mono(7, {{slot(1, 1), 1}, {slot(3, 0), 1}}));
                dg.push_back(mono(8, {{slot(2, 0), 2}}));
                dg.push_back(mono(6, {{slot(2, 1), 2}}));
            } else if (gen.i >= 5 && gen.j == 0 && have(gen.i - 2, 1)) {
                dg.push_back(mono(1, {{slot(gen.i - 2, 1), 2}}));
            } else if (gen.i >= 5 && gen.j == 1 && have(gen.i - 2, 0)) {
                dg.push_back(mono(1 << (gen.i - 1), {{slot(gen.i - 2, 0), 2}}));
            }
        }
        gen_diff_[g] = std::move(dg);
    }
}

void CEComplex::build_basis()
{
    /* enumerate all monomials with s <= s_max + 1, t <= t_max */
    std::vector<uint32_t> e(gens_.size() + 1, 0);
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t g, int s, int t) {
        if (g == gens_.size()) {
            for (uint32_t a = 0; t + int(a) * 6 <= t_max_; ++a) {
                e[0] = a;
                basis_[{s, t + int(a) * 6}].push_back(e);
            }
            e[0] = 0;
            return;
        }
        for (uint32_t p = 0;; ++p) {
            int ns = s + int(p);
            int nt = t + int(p) * gens_[g].degree;
            if (ns > s_max_ + 1 || nt > t_max_)
                break;
            e[g + 1] = p;
            rec(g + 1, ns, nt);
        }
        e[g + 1] = 0;
    };
    rec(0, 0, 0);
    for (auto& [key, b] : basis_)
        std::sort(b.begin(), b.end());
}

std::size_t CEComplex::index_of(int s, int t, const std::vector<uint32_t>& e) const
{
    const auto& b = basis(s, t);
    auto it = std::lower_bound(b.begin(), b.end(), e);
    if (it == b.end() || *it != e)
        throw std::logic_error("CE monomial missing from basis");
    return std::size_t(it - b.begin());
}

const std::vector<std::vector<uint32_t>>& CEComplex::basis(int s, int t) const
{
    static const std::vector<std::vector<uint32_t>> empty;
    auto it = basis_.find({s, t});
    return it == basis_.end() ? empty : it->second;
}

int CEComplex::mr_weight(int s, int t, std::size_t idx) const
{
    const auto& e = basis(s, t)[idx];
    int w = 0;
    for (std::size_t g = 0; g < gens_.size(); ++g)
        w += int(e[g + 1]) * gens_[g].mr_weight;
    return w;
}

std::string CEComplex::mono_str(int s, int t, std::size_t idx) const
{
    const auto& e = basis(s, t)[idx];
    std::string out;
    if (e[0])
        out = e[0] == 1 ? "v2" : fmt::format("v2^{}", e[0]);
    for (std::size_t g = 0; g < gens_.size(); ++g)
        if (e[g + 1]) {
            if (!out.empty())
                out += ".";
            out += e[g + 1] == 1 ? gens_[g].name
                                 : fmt::format("{}^{}", gens_[g].name, e[g + 1]);
        }
    return out.empty() ? "1" : out;
}

void CEComplex::build_diff()
{
    for (const auto& [key, b] : basis_) {
        auto [s, t] = key;
        if (s > s_max_)
            continue;
        const auto& target = basis(s + 1, t);
        F2Matrix mat(b.size(), target.size());
        for (std::size_t idx = 0; idx < b.size(); ++idx) {
            const auto& e = b[idx];
            for (std::size_t g = 0; g < gens_.size(); ++g) {
                if (e[g + 1] % 2 == 0 || gen_diff_[g].empty())
                    continue;
                for (const auto& term : gen_diff_[g]) {
                    std::vector<uint32_t> prod(e);
                    prod[g + 1] -= 1;
                    for (std::size_t k = 0; k < prod.size(); ++k)
                        prod[k] += term[k];
                    mat.flip(idx, index_of(s + 1, t, prod));
                }
            }
        }
        diff_[{s, t}] = std::move(mat);
    }
    /* d^2 = 0 on every monomial in the window */
    for (const auto& [key, mat] : diff_) {
        auto [s, t] = key;
        auto next = diff_.find({s + 1, t});
        if (next == diff_.end())
            continue;
        if (mat.cols() == next->second.rows() && !(mat * next->second).is_zero())
            throw std::logic_error(fmt::format("CE d^2 != 0 at ({},{})", s, t));
    }
}

const F2Matrix& CEComplex::diff(int s, int t) const
{
    static const F2Matrix empty;
    auto it = diff_.find({s, t});
    return it == diff_.end() ? empty : it->second;
}

std::vector<std::size_t> CEComplex::v2_push(int s, int t) const
{
    const auto& b = basis(s, t);
    std::vector<std::size_t> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        std::vector<uint32_t> e = b[i];
        e[0] += 1;
        out[i] = index_of(s, t + 6, e);
    }
    return out;
}

FilteredComplex CEComplex::filtered_by_mr() const
{
    FilteredComplex fc;
    fc.s_max = s_max_;
    for (const auto& [key, b] : basis_) {
        auto [s, t] = key;
        std::vector<int> w(b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            w[i] = mr_weight(s, t, i);
        fc.weights[key] = std::move(w);
        if (s <= s_max_ && diff_.count(key))
            fc.d[key] = diff_.at(key);
    }
    return fc;
}

FilteredComplex CEComplex::filtered_by_af() const
{
    FilteredComplex fc;
    fc.s_max = s_max_;
    for (const auto& [key, b] : basis_) {
        auto [s, t] = key;
        std::vector<int> w(b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            w[i] = int(b[i][0]);
        fc.weights[key] = std::move(w);
        if (s <= s_max_ && diff_.count(key))
            fc.d[key] = diff_.at(key);
    }
    return fc;
}

CECohomology ce_cohomology(const CEComplex& ce)
{
    CECohomology out;
    out.t_max = ce.t_max();
    /* the differential preserves the MR weight exactly, so cohomology splits
     * per (s, t, f); representatives per block feed v2-torsion orders */
    struct Block {
        std::vector<std::size_t> members; /* indices into basis(s,t) */
    };
    auto blocks_at = [&](int s, int t) {
        std::map<int, Block> blocks;
        for (std::size_t i = 0; i < ce.dim(s, t); ++i)
            blocks[ce.mr_weight(s, t, i)].members.push_back(i);
        return blocks;
    };

    for (int s = 0; s <= ce.s_max(); ++s) {
        for (int t = 0; t <= ce.t_max(); ++t) {
            if (ce.dim(s, t) == 0)
                continue;
            auto blocks = blocks_at(s, t);
            const F2Matrix& d = ce.diff(s, t);
            static const F2Matrix no_prev;
            const F2Matrix& dprev = s >= 1 ? ce.diff(s - 1, t) : no_prev;

            for (auto& [f, blk] : blocks) {
                /* kernel within the weight-f slice */
                std::vector<F2Vector> cycles;
                {
                    F2Matrix rows(blk.members.size(), d.cols());
                    for (std::size_t i = 0; i < blk.members.size(); ++i)
                        if (d.rows())
                            rows.set_row(i, d.row(blk.members[i]));
                    Subspace ker = kernel_basis(rows.transposed());
                    for (std::size_t i = 0; i < ker.dim(); ++i) {
                        F2Vector v(ce.dim(s, t));
                        for (std::size_t a = 0; a < blk.members.size(); ++a)
                            if (ker.basis.get(i, a))
                                v.set(blk.members[a], true);
                        cycles.push_back(std::move(v));
                    }
                }
                Eliminator mod(ce.dim(s, t));
                if (s >= 1 && dprev.rows())
                    for (std::size_t i = 0; i < dprev.rows(); ++i)
                        if (!dprev.row_is_zero(i))
                            mod.add(dprev.row(i));
                std::vector<F2Vector> reps;
                for (auto& c : cycles)
                    if (!mod.add(c))
                        reps.push_back(c);
                if (reps.empty())
                    continue;
                out.dims[{s, t, f}] = int(reps.size());

                /* in-window v2 orders via ranks of pushed representatives */
                std::vector<int> orders;
                std::size_t prev_rank = reps.size();
                std::vector<F2Vector> cur = reps;
                int tcur = t;
                for (int p = 1; t + 6 * p <= ce.t_max(); ++p) {
                    int tp = t + 6 * p;
                    auto push = ce.v2_push(s, tcur);
                    std::vector<F2Vector> pushed;
                    for (const auto& v : cur) {
                        F2Vector w(ce.dim(s, tp));
                        for (std::size_t bit : v.support())
                            w.flip(push[bit]);
                        pushed.push_back(std::move(w));
                    }
                    Eliminator span(ce.dim(s, tp));
                    if (s >= 1) {
                        const F2Matrix& dp = ce.diff(s - 1, tp);
                        for (std::size_t i = 0; i < dp.rows(); ++i)
                            if (!dp.row_is_zero(i))
                                span.add(dp.row(i));
                    }
                    std::size_t base = span.rank();
                    for (const auto& w : pushed)
                        span.add(w);
                    std::size_t rk = span.rank() - base;
                    for (std::size_t k = 0; k < prev_rank - rk; ++k)
                        orders.push_back(p);
                    prev_rank = rk;
                    cur = std::move(pushed);
                    tcur = tp;
                    if (rk == 0)
                        break;
                }
                for (std::size_t k = 0; k < prev_rank; ++k)
                    orders.push_back(0);
                std::sort(orders.begin(), orders.end());
                out.torsion[{s, t, f}] = std::move(orders);
            }
        }
    }
    return out;
}

/* ---------- MRE1 enumerator ---------- */

namespace {

struct GenInfo {
    int i, j;
    int degree;
    int weight;
};

std::vector<GenInfo> h_gens_in_window(int t_max)
{
    std::vector<GenInfo> out;
    out.push_back({2, 1, h_degree(2, 1), mr_weight_of(2)}); /* h21 tilde */
    for (int i = 3;; ++i) {
        bool any = false;
        for (int j = 0; j <= 1; ++j)
            if (h_degree(i, j) <= t_max) {
                out.push_back({i, j, h_degree(i, j), mr_weight_of(i)});
                any = true;
            }
        if (!any)
            break;
    }
    return out;
}

}  // namespace

MRE1Tables mre1_enumerate(int s_max, int t_max, bool include_afe1)
{
    MRE1Tables out;
    auto gens = h_gens_in_window(t_max);
    auto deg_of = [&](int i, int j) -> int { return h_degree(i, j); };
    auto w_of = [&](int i) { return mr_weight_of(i); };
    int top_i = 2;
    for (const auto& g : gens)
        top_i = std::max(top_i, g.i);

    auto record = [&](MRE1Class::Family fam, int s, int t, int f, int v2e, int torsion_bound) {
        if (s > s_max || t > t_max)
            return;
        int torsion = torsion_bound;
        if (torsion > 0 && t + 6 * torsion > t_max)
            torsion = 0; /* death not visible in the window */
        MRE1Class c{fam, s, t, f, v2e, torsion};
        out.classes.push_back(c);
        std::tuple<int, int, int> key{s, t, f};
        out.counts[key]++;
        if (fam == MRE1Class::Family::IPrime)
            out.counts_iprime[key]++;
        else if (fam == MRE1Class::Family::IDoublePrime)
            out.counts_idprime[key]++;
        else
            out.counts_ii[key]++;
    };

    /* family I': v2^m h30^{e3b} h21t^{e2} h31^{e3} h41t^{e4} */
    for (int e3b = 0; e3b <= 1; ++e3b)
        for (int e2 = 0; e2 <= 1; ++e2)
            for (int e3 = 0; e3 <= 1; ++e3)
                for (int e4 = 0; e4 <= 1; ++e4) {
                    int s = e3b + e2 + e3 + e4;
                    int t = e3b * deg_of(3, 0) + e2 * deg_of(2, 1) + e3 * deg_of(3, 1) +
                            e4 * deg_of(4, 1);
                    int f = e3b * w_of(3) + e2 * w_of(2) + e3 * w_of(3) + e4 * w_of(4);
                    if (t > t_max || s > s_max)
                        continue;
                    for (int m = 0; t + 6 * m <= t_max; ++m)
                        record(MRE1Class::Family::IPrime, s, t + 6 * m, f, m, 0);
                }

    /* family I'': v2^{<2^{i+1}} h30^{e3b} x_i^{k_i+1} x_{i+1}^{k} ...
     *             h21t^{e2} h31^{e3} h41t^{e4} h_{j,1}^{e_j} (j >= i+3) */
    for (int i = 3; i <= top_i; ++i) {
        if (deg_of(i, 0) * 2 > t_max)
            continue;
        /* exponents of h_{j,0} for j >= i: 2*k_j with k_i >= 1 */
        std::vector<int> js;
        for (int j = i; j <= top_i; ++j)
            if (2 * deg_of(j, 0) <= t_max)
                js.push_back(j);
        std::function<void(std::size_t, int, int, int)> rec_x = [&](std::size_t idx, int s, int t,
                                                                    int f) {
            if (idx == js.size()) {
                if (s == 0)
                    return; /* k_i >= 1 required */
                /* epsilon factors */
                for (int e3b = 0; e3b <= 1; ++e3b)
                    for (int e2 = 0; e2 <= 1; ++e2)
                        for (int e3 = 0; e3 <= 1; ++e3)
                            for (int e4 = 0; e4 <= 1; ++e4) {
                                int s1 = s + e3b + e2 + e3 + e4;
                                int t1 = t + e3b * deg_of(3, 0) + e2 * deg_of(2, 1) +
                                         e3 * deg_of(3, 1) + e4 * deg_of(4, 1);
                                int f1 = f + e3b * w_of(3) + e2 * w_of(2) + e3 * w_of(3) +
                                         e4 * w_of(4);
                                if (t1 > t_max || s1 > s_max)
                                    continue;
                                /* h_{j,1} for j >= i+3 */
                                std::vector<int> j1s;
                                for (int j = i + 3; j <= top_i; ++j)
                                    if (deg_of(j, 1) <= t_max)
                                        j1s.push_back(j);
                                std::function<void(std::size_t, int, int, int)> rec_e =
                                    [&](std::size_t k, int s2, int t2, int f2) {
                                        if (k == j1s.size()) {
                                            for (int a = 0;
                                                 a < (1 << (i + 1)) && t2 + 6 * a <= t_max; ++a)
                                                record(MRE1Class::Family::IDoublePrime, s2,
                                                       t2 + 6 * a, f2, a, (1 << (i + 1)) - a);
                                            return;
                                        }
                                        rec_e(k + 1, s2, t2, f2);
                                        int j = j1s[k];
                                        if (t2 + deg_of(j, 1) <= t_max && s2 + 1 <= s_max)
                                            rec_e(k + 1, s2 + 1, t2 + deg_of(j, 1),
                                                  f2 + w_of(j));
                                    };
                                rec_e(0, s1, t1, f1);
                            }
                return;
            }
            int j = js[idx];
            int kmin = idx == 0 ? 1 : 0; /* js[0] == i carries the k_i >= 1 constraint */
            for (int k = kmin;; ++k) {
                int ns = s + 2 * k;
                int nt = t + 2 * k * deg_of(j, 0);
                if (nt > t_max || ns > s_max)
                    break;
                rec_x(idx + 1, ns, nt, f + 2 * k * w_of(j));
            }
        };
        rec_x(0, 0, 0, 0);
    }

    /* family II: h30^{k3} h40^{2k4} .. h_{i+2,0}^{2k} h_{i+3,0}^{free} ...
     *            h21t^{e2} .. h_{i-1,1}^{e} h_{i,1}^{l_i+2} h_{i+1,1}^{free} ... */
    for (int i = 2; i <= top_i; ++i) {
        if (2 * deg_of(i, 1) > t_max)
            continue;
        /* h_{j,0} exponents: j = 3 free; 4 <= j <= i+2 even; j >= i+3 free */
        std::vector<std::pair<int, int>> zero_slots; /* (j, step) */
        for (int j = 3; j <= top_i; ++j) {
            if (deg_of(j, 0) > t_max)
                continue;
            int step = (j >= 4 && j <= i + 2) ? 2 : 1;
            zero_slots.push_back({j, step});
        }
        /* h_{j,1} exponents: j < i in {0,1}; j = i: l+2; j > i free */
        std::function<void(std::size_t, int, int, int)> rec0 = [&](std::size_t idx, int s, int t,
                                                                   int f) {
            if (idx == zero_slots.size()) {
                std::vector<int> ones;
                for (int j = 2; j <= top_i; ++j)
                    if (deg_of(j, 1) <= t_max)
                        ones.push_back(j);
                std::function<void(std::size_t, int, int, int, bool)> rec1 =
                    [&](std::size_t k, int s2, int t2, int f2, bool placed) {
                        if (k == ones.size()) {
                            if (placed)
                                record(MRE1Class::Family::II, s2, t2, f2, 0, 1);
                            return;
                        }
                        int j = ones[k];
                        if (j < i) {
                            for (int e = 0; e <= 1; ++e)
                                if (t2 + e * deg_of(j, 1) <= t_max && s2 + e <= s_max)
                                    rec1(k + 1, s2 + e, t2 + e * deg_of(j, 1),
                                         f2 + e * w_of(j), placed);
                        } else if (j == i) {
                            for (int l = 2;; ++l) {
                                int nt = t2 + l * deg_of(j, 1);
                                int ns = s2 + l;
                                if (nt > t_max || ns > s_max)
                                    break;
                                rec1(k + 1, ns, nt, f2 + l * w_of(j), true);
                            }
                        } else {
                            for (int l = 0;; ++l) {
                                int nt = t2 + l * deg_of(j, 1);
                                int ns = s2 + l;
                                if (nt > t_max || ns > s_max)
                                    break;
                                rec1(k + 1, ns, nt, f2 + l * w_of(j), placed);
                            }
                        }
                    };
                rec1(0, s, t, f, false);
                return;
            }
            auto [j, step] = zero_slots[idx];
            for (int e = 0;; e += step) {
                int nt = t + e * deg_of(j, 0);
                int ns = s + e;
                if (nt > t_max || ns > s_max)
                    break;
                rec0(idx + 1, ns, nt, f + e * w_of(j));
            }
        };
        rec0(0, 0, 0, 0);
    }

    if (include_afe1) {
        /* first-round families: (I) v2^m h30^{k3} h_{j,0}^{2k_j} h_{j,1}^{eps};
         * (II) as above.  Start from the II counts and add family (I). */
        out.afe1_counts = out.counts_ii;
        std::vector<int> zslots;
        for (int j = 3; j <= top_i; ++j)
            if (deg_of(j, 0) <= t_max)
                zslots.push_back(j);
        std::function<void(std::size_t, int, int, int)> recz = [&](std::size_t idx, int s, int t,
                                                                   int f) {
            if (idx == zslots.size()) {
                std::vector<int> ones;
                for (int j = 2; j <= top_i; ++j)
                    if (deg_of(j, 1) <= t_max)
                        ones.push_back(j);
                std::function<void(std::size_t, int, int, int)> rece = [&](std::size_t k, int s2,
                                                                           int t2, int f2) {
                    if (k == ones.size()) {
                        for (int m = 0; t2 + 6 * m <= t_max; ++m)
                            if (s2 <= s_max)
                                out.afe1_counts[{s2, t2 + 6 * m, f2}]++;
                        return;
                    }
                    int j = ones[k];
                    rece(k + 1, s2, t2, f2);
                    if (t2 + deg_of(j, 1) <= t_max && s2 + 1 <= s_max)
                        rece(k + 1, s2 + 1, t2 + deg_of(j, 1), f2 + w_of(j));
                };
                rece(0, s, t, f);
                return;
            }
            int j = zslots[idx];
            int step = j == 3 ? 1 : 2;
            for (int e = 0;; e += step) {
                int nt = t + e * deg_of(j, 0);
                if (nt > t_max || s + e > s_max)
                    break;
                recz(idx + 1, s + e, nt, f + e * w_of(j));
            }
        };
        recz(0, 0, 0, 0);
    }
    return out;
}

std::map<std::pair<int, int>, int> v2_local_rank(const CECohomology& c, int s_max, int t_max)
{
    std::map<std::pair<int, int>, int> out;
    for (const auto& [key, orders] : c.torsion) {
        auto [s, t, f] = key;
        if (s > s_max || t > t_max)
            continue;
        int free_count = 0;
        for (int o : orders)
            if (o == 0)
                ++free_count;
        if (free_count)
            out[{s, t}] += free_count;
    }
    return out;
}

std::vector<ExtensionAmbiguity> extension_ambiguities(const MRE1Tables& tables, int t_max)
{
    /* bidegrees where a torsion family's last v2-multiple sits next to classes
     * of a different MR weight one v2-step later */
    std::map<std::tuple<int, int, int>, int> present = tables.counts;
    std::vector<ExtensionAmbiguity> out;
    for (const auto& c : tables.classes) {
        if (c.predicted_torsion != 1)
            continue; /* only the top of each family: torsion 1 = dies next step */
        int t_death = c.t + 6;
        if (t_death > t_max)
            continue;
        for (const auto& [key, n] : present) {
            auto [s2, t2, f2] = key;
            if (s2 == c.s && t2 == t_death && f2 != c.f && n > 0)
                out.push_back({c.s, t_death, c.f, f2});
        }
    }
    std::sort(out.begin(), out.end(), [](const ExtensionAmbiguity& a, const ExtensionAmbiguity& b) {
        return std::tuple(a.s, a.t_death, a.f_source, a.f_candidate) <
               std::tuple(b.s, b.t_death, b.f_source, b.f_candidate);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const ExtensionAmbiguity& a, const ExtensionAmbiguity& b) {
                              return std::tuple(a.s, a.t_death, a.f_source, a.f_candidate) ==
                                     std::tuple(b.s, b.t_death, b.f_source, b.f_candidate);
                          }),
              out.end());
    return out;
}

/* ---------- parabola ---------- */

Rational::Rational(int64_t n, int64_t d) : num(n), den(d)
{
    if (den == 0)
        throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rational::str() const
{
    if (den == 1)
        return fmt::format("{}", num);
    return fmt::format("{}/{}", num, den);
}

DyadicMass parse_dyadic(const std::string& text)
{
    DyadicMass m;
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            m.p = std::stoll(text);
            m.q = 1;
        } else {
            m.p = std::stoll(text.substr(0, slash));
            m.q = std::stoll(text.substr(slash + 1));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("mass '{}' is not a fraction", text));
    }
    if (m.p <= 0 || m.q <= 0 || (m.q & (m.q - 1)) != 0)
        throw std::invalid_argument(
            fmt::format("mass must be a positive dyadic rational, got '{}'", text));
    return m;
}

std::vector<std::pair<int, Rational>> parabola_points(const DyadicMass& mass, int n_min, int n_max)
{
    std::vector<std::pair<int, Rational>> out;
    for (int n = n_min; n <= n_max; ++n) {
        /* t - n = (4/M) n^2 - 3n + 6 with M = p/q */
        Rational r(4 * int64_t(n) * int64_t(n) * mass.q - (3 * int64_t(n) - 6) * mass.p, mass.p);
        out.push_back({n, r});
    }
    return out;
}

}  // namespace f2ext
