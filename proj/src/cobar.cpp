#include "f2ext/cobar.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <functional>
#include <stdexcept>

namespace f2ext {

HopfPresentation hopf_preset(const std::string& name, int t_window)
{
    HopfPresentation p;
    p.name = name;
    auto dual_An = [&](int n) {
        p.rule = CoproductRule::DualSteenrod;
        for (int i = 1; i <= n + 1; ++i)
            p.gens.push_back({fmt::format("z{}", i), (1 << i) - 1, 1 << (n + 2 - i)});
    };
    if (name == "dual-A0") {
        dual_An(0);
    } else if (name == "dual-A1") {
        dual_An(1);
    } else if (name == "dual-A2") {
        dual_An(2);
    } else if (name == "EQ0" || name == "EQ1" || name == "EQ2") {
        int n = name[2] - '0';
        p.rule = CoproductRule::Primitive;
        p.gens.push_back({fmt::format("z{}", n + 1), (1 << (n + 1)) - 1, 2});
    } else if (name == "E0AF-sigma2tilde") {
        p.ground = HopfPresentation::Ground::F2v;
        p.v_degree = 6;
        p.rule = CoproductRule::Primitive;
        p.gens.push_back({"tt2sq", 12, 2});
        for (int k = 3;; ++k) {
            int deg = 2 * ((1 << k) - 1);
            if (deg > t_window)
                break;
            p.gens.push_back({fmt::format("tb{}", k), deg, 4});
        }
    } else {
        throw std::invalid_argument(fmt::format("unknown Hopf preset '{}'", name));
    }
    return p;
}

HopfAlgebra::HopfAlgebra(HopfPresentation p, int t_max) : p_(std::move(p)), t_max_(t_max)
{
    for (const auto& g : p_.gens) {
        if (g.height < 2 || (g.height & (g.height - 1)) != 0)
            throw std::invalid_argument(
                fmt::format("generator {} has non-power-of-2 height {}", g.name, g.height));
        if (g.degree <= 0)
            throw std::invalid_argument("generator degrees must be positive");
    }
    /* enumerate monomials per degree */
    basis_.resize(std::size_t(t_max_) + 1);
    std::vector<uint32_t> exps(p_.gens.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t g, int deg) {
        if (g == p_.gens.size()) {
            basis_[std::size_t(deg)].push_back(exps);
            return;
        }
        for (uint32_t e = 0; e < uint32_t(p_.gens[g].height); ++e) {
            int nd = deg + int(e) * p_.gens[g].degree;
            if (nd > t_max_)
                break;
            exps[g] = e;
            rec(g + 1, nd);
        }
        exps[g] = 0;
    };
    rec(0, 0);
    for (auto& b : basis_)
        std::sort(b.begin(), b.end());
    for (int d = 1; d <= t_max_; ++d)
        for (uint32_t i = 0; i < basis_[std::size_t(d)].size(); ++i)
            reduced_.push_back(id_of(d, i));
    verify_coassociativity();
}

const std::vector<std::vector<uint32_t>>& HopfAlgebra::basis(int d) const
{
    static const std::vector<std::vector<uint32_t>> empty;
    if (d < 0 || d > t_max_)
        return empty;
    return basis_[std::size_t(d)];
}

std::string HopfAlgebra::mono_str(MonoId m) const
{
    const auto& e = basis(mono_degree(m))[mono_index(m)];
    std::string s;
    for (std::size_t g = 0; g < e.size(); ++g)
        if (e[g]) {
            if (!s.empty())
                s += ".";
            s += e[g] == 1 ? p_.gens[g].name : fmt::format("{}^{}", p_.gens[g].name, e[g]);
        }
    return s.empty() ? "1" : s;
}

std::optional<MonoId> HopfAlgebra::mono_product(MonoId a, MonoId b) const
{
    int d = mono_degree(a) + mono_degree(b);
    if (d > t_max_)
        return std::nullopt;
    const auto& ea = basis(mono_degree(a))[mono_index(a)];
    const auto& eb = basis(mono_degree(b))[mono_index(b)];
    std::vector<uint32_t> e(p_.gens.size(), 0);
    for (std::size_t g = 0; g < e.size(); ++g) {
        e[g] = ea[g] + eb[g];
        if (e[g] >= uint32_t(p_.gens[g].height))
            return std::nullopt; /* truncated away */
    }
    const auto& tgt = basis(d);
    auto it = std::lower_bound(tgt.begin(), tgt.end(), e);
    if (it == tgt.end() || *it != e)
        throw std::logic_error("mono_product: missing target monomial");
    return id_of(d, uint32_t(it - tgt.begin()));
}

HopfAlgebra::TensorElt HopfAlgebra::tensor_mul(const TensorElt& a, const TensorElt& b) const
{
    TensorElt out;
    for (const auto& [al, ar] : a)
        for (const auto& [bl, br] : b) {
            auto l = mono_product(al, bl);
            if (!l)
                continue;
            auto r = mono_product(ar, br);
            if (!r)
                continue;
            out.push_back({*l, *r});
        }
    std::sort(out.begin(), out.end());
    TensorElt red;
    for (std::size_t i = 0; i < out.size();) {
        std::size_t j = i;
        while (j < out.size() && out[j] == out[i])
            ++j;
        if ((j - i) % 2)
            red.push_back(out[i]);
        i = j;
    }
    return red;
}

HopfAlgebra::TensorElt HopfAlgebra::generator_coproduct(std::size_t gen) const
{
    const MonoId unit = id_of(0, 0);
    std::vector<uint32_t> e(p_.gens.size(), 0);
    e[gen] = 1;
    const auto& b = basis(p_.gens[gen].degree);
    auto it = std::lower_bound(b.begin(), b.end(), e);
    MonoId g = id_of(p_.gens[gen].degree, uint32_t(it - b.begin()));

    TensorElt out = {{g, unit}, {unit, g}};
    if (p_.rule == CoproductRule::DualSteenrod) {
        /* gens are zeta_1..zeta_m in order; psi(zeta_k) adds zeta_i (x) zeta_j^{2^i} */
        std::size_t k = gen + 1;
        for (std::size_t i = 1; i < k; ++i) {
            std::size_t j = k - i;
            uint32_t pw = uint32_t(1) << i;
            if (pw >= uint32_t(p_.gens[j - 1].height))
                continue; /* zeta_j^{2^i} = 0 under the truncation */
            std::vector<uint32_t> el(p_.gens.size(), 0), er(p_.gens.size(), 0);
            el[i - 1] = 1;
            er[j - 1] = pw;
            int dl = p_.gens[i - 1].degree;
            int dr = p_.gens[j - 1].degree * int(pw);
            if (dl > t_max_ || dr > t_max_)
                continue;
            const auto& bl = basis(dl);
            const auto& br = basis(dr);
            auto pl = std::lower_bound(bl.begin(), bl.end(), el);
            auto pr = std::lower_bound(br.begin(), br.end(), er);
            if (pl == bl.end() || *pl != el || pr == br.end() || *pr != er)
                throw std::logic_error("generator_coproduct: missing term");
            out.push_back({id_of(dl, uint32_t(pl - bl.begin())),
                           id_of(dr, uint32_t(pr - br.begin()))});
        }
        std::sort(out.begin(), out.end());
    }
    return out;
}

HopfAlgebra::TensorElt HopfAlgebra::full_coproduct(MonoId m) const
{
    const MonoId unit = id_of(0, 0);
    TensorElt acc = {{unit, unit}};
    const auto& e = basis(mono_degree(m))[mono_index(m)];
    for (std::size_t g = 0; g < e.size(); ++g) {
        if (!e[g])
            continue;
        TensorElt cg = generator_coproduct(g);
        for (uint32_t k = 0; k < e[g]; ++k)
            acc = tensor_mul(acc, cg);
    }
    return acc;
}

const std::vector<std::pair<MonoId, MonoId>>& HopfAlgebra::reduced_coproduct(MonoId m) const
{
    auto it = cop_cache_.find(m);
    if (it != cop_cache_.end())
        return it->second;
    TensorElt full = full_coproduct(m);
    TensorElt red;
    for (const auto& [l, r] : full)
        if (mono_degree(l) > 0 && mono_degree(r) > 0)
            red.push_back({l, r});
    return cop_cache_.emplace(m, std::move(red)).first->second;
}

void HopfAlgebra::verify_coassociativity() const
{
    /* (Delta (x) 1) Delta = (1 (x) Delta) Delta on every monomial in window */
    using Triple = std::tuple<MonoId, MonoId, MonoId>;
    for (int d = 1; d <= t_max_; ++d) {
        for (uint32_t i = 0; i < basis(d).size(); ++i) {
            MonoId m = id_of(d, i);
            std::vector<Triple> lhs, rhs;
            for (const auto& [l, r] : full_coproduct(m)) {
                for (const auto& [a, b] : full_coproduct(l))
                    lhs.push_back({a, b, r});
                for (const auto& [a, b] : full_coproduct(r))
                    rhs.push_back({l, a, b});
            }
            auto reduce = [](std::vector<Triple>& v) {
                std::sort(v.begin(), v.end());
                std::vector<Triple> red;
                for (std::size_t p = 0; p < v.size();) {
                    std::size_t q = p;
                    while (q < v.size() && v[q] == v[p])
                        ++q;
                    if ((q - p) % 2)
                        red.push_back(v[p]);
                    p = q;
                }
                v = std::move(red);
            };
            reduce(lhs);
            reduce(rhs);
            if (lhs != rhs)
                throw std::logic_error(
                    fmt::format("coproduct not coassociative on {}", mono_str(m)));
        }
    }
}

namespace {

/* basis of the cobar group C^{n,t}: a v-power (ground F2[v] only) and an
 * n-tuple of non-unit monomials */
struct CobarBasis {
    struct Elt {
        uint32_t v_exp;
        std::vector<MonoId> factors;
        bool operator<(const Elt& o) const
        {
            if (v_exp != o.v_exp)
                return v_exp < o.v_exp;
            return factors < o.factors;
        }
        bool operator==(const Elt& o) const
        {
            return v_exp == o.v_exp && factors == o.factors;
        }
    };
    std::vector<Elt> elems;
    std::map<std::pair<uint32_t, std::vector<MonoId>>, std::size_t> index;

    std::size_t size() const { return elems.size(); }
};

CobarBasis build_cobar_basis(const HopfAlgebra& h, int n, int t)
{
    CobarBasis cb;
    const bool has_v = h.presentation().ground == HopfPresentation::Ground::F2v;
    const int vdeg = h.presentation().v_degree;
    const auto& red = h.reduced_monomials();

    std::vector<MonoId> factors;
    std::function<void(int, int)> rec = [&](int k, int rem) {
        if (k == 0) {
            if (rem == 0) {
                cb.elems.push_back({0, factors});
            } else if (has_v && vdeg > 0 && rem % vdeg == 0) {
                cb.elems.push_back({uint32_t(rem / vdeg), factors});
            }
            return;
        }
        for (MonoId m : red) {
            int d = HopfAlgebra::mono_degree(m);
            if (d > rem - (k - 1))
                break; /* remaining factors need degree >= 1 each */
            factors.push_back(m);
            rec(k - 1, rem - d);
            factors.pop_back();
        }
    };
    rec(n, t);
    std::sort(cb.elems.begin(), cb.elems.end());
    for (std::size_t i = 0; i < cb.elems.size(); ++i)
        cb.index[{cb.elems[i].v_exp, cb.elems[i].factors}] = i;
    return cb;
}

/* image of basis element e under the cobar differential, over `next` */
F2Vector cobar_diff_row(const HopfAlgebra& h, const CobarBasis::Elt& e, const CobarBasis& next)
{
    F2Vector row(next.size());
    std::vector<MonoId> t(e.factors.size() + 1);
    for (std::size_t i = 0; i < e.factors.size(); ++i) {
        for (const auto& [l, r] : h.reduced_coproduct(e.factors[i])) {
            for (std::size_t k = 0; k < i; ++k)
                t[k] = e.factors[k];
            t[i] = l;
            t[i + 1] = r;
            for (std::size_t k = i + 1; k < e.factors.size(); ++k)
                t[k + 1] = e.factors[k];
            auto it = next.index.find({e.v_exp, t});
            if (it == next.index.end())
                throw std::logic_error("cobar differential left the window");
            row.flip(it->second);
        }
    }
    return row;
}

}  // namespace

std::size_t cobar_dim(const HopfAlgebra& h, int n, int t)
{
    return build_cobar_basis(h, n, t).size();
}

CobarCohomology cobar_cohomology(const HopfAlgebra& h, int n_max, int t_max)
{
    if (t_max > h.t_max())
        throw std::invalid_argument("cobar_cohomology: window exceeds the algebra build");
    const bool has_v = h.presentation().ground == HopfPresentation::Ground::F2v;
    const int vdeg = h.presentation().v_degree;

    CobarCohomology out;
    for (int t = 0; t <= t_max; ++t) {
        std::vector<CobarBasis> bases;  /* n = 0 .. n_max + 1 */
        for (int n = 0; n <= n_max + 1; ++n)
            bases.push_back(build_cobar_basis(h, n, t));

        std::vector<std::size_t> rank(std::size_t(n_max) + 2, 0);
        std::vector<std::vector<F2Vector>> kernels(std::size_t(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) {
            Eliminator elim(bases[std::size_t(n) + 1].size());
            std::vector<F2Vector> kvecs;
            for (std::size_t i = 0; i < bases[std::size_t(n)].size(); ++i) {
                F2Vector row = cobar_diff_row(h, bases[std::size_t(n)].elems[i],
                                              bases[std::size_t(n) + 1]);
                if (auto combo = elim.add(std::move(row))) {
                    combo->resize(bases[std::size_t(n)].size());
                    combo->set(i, true);
                    kvecs.push_back(std::move(*combo));
                }
            }
            rank[std::size_t(n) + 1] = elim.rank();
            kernels[std::size_t(n)] = std::move(kvecs);
        }
        for (int n = 0; n <= n_max; ++n) {
            std::size_t dim_c = bases[std::size_t(n)].size();
            std::size_t rk = rank[std::size_t(n) + 1];          /* rank of d_n */
            std::size_t rk_prev = n == 0 ? 0 : rank[std::size_t(n)]; /* rank of d_{n-1} */
            int hdim = int(dim_c - rk - rk_prev);
            if (hdim < 0)
                throw std::logic_error("cobar: negative cohomology dimension");
            if (hdim)
                out.dims[{n, t}] = hdim;
        }
        /* exact d^2 = 0 on every slice of workable size; coassociativity of
         * the coproduct (asserted exhaustively at build) covers the rest */
        for (int n = 0; n + 1 <= n_max && bases[std::size_t(n)].size() <= 2048; ++n) {
            for (const auto& e : bases[std::size_t(n)].elems) {
                F2Vector d1 = cobar_diff_row(h, e, bases[std::size_t(n) + 1]);
                F2Vector d2(bases[std::size_t(n) + 2].size());
                for (std::size_t bit : d1.support())
                    d2 ^= cobar_diff_row(h, bases[std::size_t(n) + 1].elems[bit],
                                         bases[std::size_t(n) + 2]);
                if (!d2.is_zero())
                    throw std::logic_error("cobar: d^2 != 0");
            }
        }
    }

    /* v-torsion profile via ranks of v^p on cohomology */
    if (has_v && vdeg > 0) {
        /* recompute representatives per (n,t) and push them up by v-powers */
        for (const auto& [key, dim] : out.dims) {
            auto [n, t] = key;
            CobarBasis cb = build_cobar_basis(h, n, t);
            CobarBasis cb_next = build_cobar_basis(h, n + 1, t);
            /* kernel of d_n and image of d_{n-1} at (n,t) */
            Eliminator elim(cb_next.size());
            std::vector<F2Vector> kvecs;
            for (std::size_t i = 0; i < cb.size(); ++i) {
                F2Vector row = cobar_diff_row(h, cb.elems[i], cb_next);
                if (auto combo = elim.add(std::move(row))) {
                    combo->resize(cb.size());
                    combo->set(i, true);
                    kvecs.push_back(std::move(*combo));
                }
            }
            Eliminator mod(cb.size());
            if (n > 0) {
                CobarBasis cb_prev = build_cobar_basis(h, n - 1, t);
                for (std::size_t i = 0; i < cb_prev.size(); ++i)
                    mod.add(cobar_diff_row(h, cb_prev.elems[i], cb));
            }
            std::vector<F2Vector> reps;
            for (auto& k : kvecs)
                if (!mod.add(k))
                    reps.push_back(k);
            if (int(reps.size()) != dim)
                throw std::logic_error("cobar: representative count mismatch");

            /* ranks r_p of v^p: H(n,t) -> H(n, t + p vdeg) */
            std::vector<int> orders;
            int pmax = (t_max - t) / vdeg;
            std::size_t prev_rank = reps.size();
            std::vector<F2Vector> cur = reps;  /* cochain reps at level t + p vdeg */
            CobarBasis cur_basis = cb;
            for (int p = 1; p <= pmax; ++p) {
                int tp = t + p * vdeg;
                CobarBasis bp = build_cobar_basis(h, n, tp);
                /* push reps by one v */
                std::vector<F2Vector> pushed;
                for (std::size_t i = 0; i < cur.size(); ++i) {
                    F2Vector w(bp.size());
                    for (std::size_t bit : cur[i].support()) {
                        const auto& e = cur_basis.elems[bit];
                        auto it = bp.index.find({e.v_exp + 1, e.factors});
                        if (it == bp.index.end())
                            throw std::logic_error("cobar: v-push left the window");
                        w.flip(it->second);
                    }
                    pushed.push_back(std::move(w));
                }
                /* rank of the pushed classes modulo boundaries at (n, tp) */
                Eliminator span(bp.size());
                if (n > 0) {
                    CobarBasis bp_prev = build_cobar_basis(h, n - 1, tp);
                    for (std::size_t i = 0; i < bp_prev.size(); ++i)
                        span.add(cobar_diff_row(h, bp_prev.elems[i], bp));
                }
                std::size_t base = span.rank();
                for (const auto& w : pushed)
                    span.add(w);
                std::size_t rk = span.rank() - base;
                int died = int(prev_rank - rk);
                for (int k = 0; k < died; ++k)
                    orders.push_back(p);
                prev_rank = rk;
                cur = std::move(pushed);
                cur_basis = bp;
                if (rk == 0)
                    break;
            }
            for (std::size_t k = 0; k < prev_rank; ++k)
                orders.push_back(0); /* survives through the window */
            std::sort(orders.begin(), orders.end());
            out.torsion[key] = std::move(orders);
        }
    }
    return out;
}

}  // namespace f2ext
