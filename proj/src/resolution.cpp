#include "f2ext/resolution.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

namespace f2ext {

MinimalResolution::MinimalResolution(std::shared_ptr<const SteenrodAlgebra> alg,
                                     std::shared_ptr<const SteenrodAlgebra> full,
                                     GradedModule module, int s_max, int t_max)
    : alg_(std::move(alg)), full_(std::move(full)), module_(std::move(module)), s_max_(s_max),
      t_max_(t_max)
{
    if (alg_->max_degree() < t_max_)
        throw std::invalid_argument(
            fmt::format("resolution: algebra truncation {} is below t_max {}",
                        alg_->max_degree(), t_max_));
    gens_.resize(std::size_t(s_max_) + 1);
    diffs_.resize(std::size_t(s_max_) + 1);
    build();
    verify();
}

MinimalResolution::MinimalResolution(std::shared_ptr<const SteenrodAlgebra> alg,
                                     std::shared_ptr<const SteenrodAlgebra> full,
                                     GradedModule module, int s_max, int t_max,
                                     std::vector<std::vector<Generator>> gens,
                                     std::vector<std::vector<F2Vector>> diffs)
    : alg_(std::move(alg)), full_(std::move(full)), module_(std::move(module)), s_max_(s_max),
      t_max_(t_max), gens_(std::move(gens)), diffs_(std::move(diffs))
{
}

std::vector<int> MinimalResolution::generators_in_degree(int s, int t) const
{
    std::vector<int> out;
    const auto& gs = gens_.at(std::size_t(s));
    for (std::size_t g = 0; g < gs.size(); ++g)
        if (gs[g].degree == t)
            out.push_back(int(g));
    return out;
}

MinimalResolution::FreeBasis MinimalResolution::build_free_basis(int s, int t) const
{
    FreeBasis fb;
    const auto& gs = gens_.at(std::size_t(s));
    fb.gen_offset.resize(gs.size() + 1, 0);
    for (std::size_t g = 0; g < gs.size(); ++g) {
        fb.gen_offset[g] = fb.elems.size();
        int bdeg = t - gs[g].degree;
        if (bdeg < 0)
            continue;
        std::size_t nb = alg_->dim(bdeg);
        for (uint32_t m = 0; m < nb; ++m)
            fb.elems.push_back({int(g), m});
    }
    fb.gen_offset[gs.size()] = fb.elems.size();
    return fb;
}

const MinimalResolution::FreeBasis& MinimalResolution::free_basis(int s, int t) const
{
    auto key = std::make_pair(s, t);
    auto it = fb_cache_.find(key);
    if (it != fb_cache_.end())
        return it->second;
    return fb_cache_.emplace(key, build_free_basis(s, t)).first->second;
}

const GradedMap& MinimalResolution::module_action(int b_deg, uint32_t b_idx) const
{
    auto key = std::make_pair(b_deg, int(b_idx));
    auto it = modact_cache_.find(key);
    if (it != modact_cache_.end())
        return it->second;
    MilnorElement elt(alg_->basis(b_deg)[b_idx]);
    GradedMap gm = action_of(module_, elt, *full_, module_.top_degree());
    return modact_cache_.emplace(key, std::move(gm)).first->second;
}

F2Vector MinimalResolution::act(int s, int t, int b_deg, uint32_t b_idx, const F2Vector& x) const
{
    const FreeBasis& src = free_basis(s, t);
    const FreeBasis& dst = free_basis(s, t + b_deg);
    if (x.size() != src.size())
        throw std::invalid_argument("act: element size mismatch");
    F2Vector y(dst.size());
    const auto& gs = gens_.at(std::size_t(s));
    for (std::size_t bit : x.support()) {
        auto [g, c_idx] = src.elems[bit];
        int c_deg = t - gs[std::size_t(g)].degree;
        for (uint32_t e : alg_->product_indices(b_deg, b_idx, c_deg, c_idx))
            y.flip(dst.index(g, e));
    }
    return y;
}

F2Vector MinimalResolution::apply_differential(int s, int t, const F2Vector& x) const
{
    if (s < 1)
        throw std::invalid_argument("apply_differential: use apply_augmentation for stage 0");
    const FreeBasis& src = free_basis(s, t);
    const FreeBasis& dst = free_basis(s - 1, t);
    if (x.size() != src.size())
        throw std::invalid_argument("apply_differential: size mismatch");
    F2Vector y(dst.size());
    const auto& gs = gens_.at(std::size_t(s));
    for (std::size_t bit : x.support()) {
        auto [g, c_idx] = src.elems[bit];
        int gdeg = gs[std::size_t(g)].degree;
        int c_deg = t - gdeg;
        y ^= act(s - 1, gdeg, c_deg, c_idx, differential(s, g));
    }
    return y;
}

F2Vector MinimalResolution::apply_augmentation(int t, const F2Vector& x) const
{
    const FreeBasis& src = free_basis(0, t);
    if (x.size() != src.size())
        throw std::invalid_argument("apply_augmentation: size mismatch");
    F2Vector y(module_.dim_in_degree(t));
    const auto& gs = gens_.at(0);
    for (std::size_t bit : x.support()) {
        auto [g, c_idx] = src.elems[bit];
        int gdeg = gs[std::size_t(g)].degree;
        int c_deg = t - gdeg;
        if (c_deg == 0) {
            y ^= diffs_[0][std::size_t(g)];
            continue;
        }
        const GradedMap& ma = module_action(c_deg, c_idx);
        y ^= ma.at(gdeg).apply_row(diffs_[0][std::size_t(g)]);
    }
    return y;
}

std::optional<F2Vector> MinimalResolution::solve_differential(int s, int t, const F2Vector& y,
                                                              uint64_t order_seed) const
{
    const FreeBasis& src = free_basis(s, t);
    std::size_t width = s == 0 ? module_.dim_in_degree(t) : free_basis(s - 1, t).size();
    if (y.size() != width)
        throw std::invalid_argument("solve_differential: target size mismatch");

    std::vector<std::size_t> order(src.size());
    std::iota(order.begin(), order.end(), 0);
    if (order_seed) {
        uint64_t st = order_seed;
        for (std::size_t i = order.size(); i > 1; --i) {
            st ^= st << 13;
            st ^= st >> 7;
            st ^= st << 17;
            std::swap(order[i - 1], order[st % i]);
        }
    }

    Eliminator elim(width);
    std::vector<std::size_t> inserted;
    auto row_of = [&](std::size_t idx) -> F2Vector {
        F2Vector e = F2Vector::unit(src.size(), idx);
        return s == 0 ? apply_augmentation(t, e) : apply_differential(s, t, e);
    };
    /* feed rows until y is expressible */
    for (std::size_t k = 0; k < order.size(); ++k) {
        elim.add(row_of(order[k]));
        inserted.push_back(order[k]);
    }
    auto combo = elim.express(y);
    if (!combo)
        return std::nullopt;
    F2Vector x(src.size());
    for (std::size_t i : combo->support())
        x.flip(inserted[i]);
    return x;
}

void MinimalResolution::build()
{
    const int t0 = module_.min_degree();
    for (int t = t0; t <= t_max_; ++t) {
        /* kernel of the previous stage's map in degree t, updated stage by stage */
        Subspace ker_prev = Subspace::zero(0);
        for (int s = 0; s <= s_max_; ++s) {
            FreeBasis old = build_free_basis(s, t);
            std::size_t width = s == 0 ? module_.dim_in_degree(t) : free_basis(s - 1, t).size();
            Eliminator elim(width);
            std::vector<F2Vector> kernel_vecs;
            const auto& gs = gens_[std::size_t(s)];
            for (std::size_t idx = 0; idx < old.size(); ++idx) {
                auto [g, c_idx] = old.elems[idx];
                int gdeg = gs[std::size_t(g)].degree;
                int c_deg = t - gdeg;
                F2Vector row;
                if (s == 0) {
                    if (c_deg == 0) {
                        row = diffs_[0][std::size_t(g)];
                    } else {
                        const GradedMap& ma = module_action(c_deg, c_idx);
                        row = ma.at(gdeg).apply_row(diffs_[0][std::size_t(g)]);
                    }
                } else {
                    row = act(s - 1, gdeg, c_deg, c_idx, differential(s, int(g)));
                }
                if (auto combo = elim.add(std::move(row))) {
                    combo->resize(old.size());
                    combo->set(idx, true); /* the dependency includes this row */
                    kernel_vecs.push_back(std::move(*combo));
                }
            }
            std::size_t rank_before = elim.rank();

            /* adjoin generators: at stage 0 cover the module slice, at stage
             * s >= 1 cover ker_prev, taking RREF-order representatives */
            std::size_t n_new = 0;
            if (s == 0) {
                for (std::size_t j = 0; j < width; ++j) {
                    F2Vector e = F2Vector::unit(width, j);
                    if (elim.add(e))
                        continue;
                    gens_[0].push_back({t});
                    diffs_[0].push_back(e);
                    ++n_new;
                }
            } else {
                for (std::size_t j = 0; j < ker_prev.dim(); ++j) {
                    F2Vector v = ker_prev.basis.row(j);
                    if (elim.add(v))
                        continue;
                    /* minimality: no unit coefficient on a degree-t generator */
                    const FreeBasis& below = free_basis(s - 1, t);
                    const auto& gs_below = gens_[std::size_t(s - 1)];
                    for (std::size_t bit : v.support())
                        if (gs_below[std::size_t(below.elems[bit].first)].degree == t)
                            throw std::logic_error(
                                fmt::format("minimality violated at stage {} degree {}", s, t));
                    gens_[std::size_t(s)].push_back({t});
                    diffs_[std::size_t(s)].push_back(v);
                    ++n_new;
                }
                /* window exactness: im d_s plus the new generators spans
                 * ker d_{s-1} with no slack */
                if (elim.rank() != rank_before + n_new || elim.rank() != ker_prev.dim())
                    throw std::logic_error(
                        fmt::format("exactness accounting failed at stage {} degree {}", s, t));
            }

            /* kernel of this stage at degree t, over the enlarged basis */
            std::size_t full_size = old.size() + n_new;
            F2Matrix kmat(kernel_vecs.size(), full_size);
            for (std::size_t i = 0; i < kernel_vecs.size(); ++i) {
                kernel_vecs[i].resize(full_size);
                kmat.set_row(i, kernel_vecs[i]);
            }
            ker_prev = Subspace::from_rows(kmat);
        }
    }
}

void MinimalResolution::verify()
{
    /* d^2 = 0 and entries in the augmentation ideal, for every generator */
    for (int s = 1; s <= s_max_; ++s) {
        const auto& gs = gens_[std::size_t(s)];
        for (std::size_t g = 0; g < gs.size(); ++g) {
            int t = gs[g].degree;
            const F2Vector& d = diffs_[std::size_t(s)][g];
            const FreeBasis& below = free_basis(s - 1, t);
            const auto& gs_below = gens_[std::size_t(s - 1)];
            for (std::size_t bit : d.support())
                if (gs_below[std::size_t(below.elems[bit].first)].degree == t)
                    throw std::logic_error("augmentation-ideal violation");
            F2Vector dd = s == 1 ? apply_augmentation(t, d) : apply_differential(s - 1, t, d);
            if (!dd.is_zero())
                throw std::logic_error(
                    fmt::format("d^2 != 0 at stage {} generator {} (degree {})", s, g, t));
        }
    }
}

MinimalResolution MinimalResolution::suspended(int k) const
{
    std::vector<std::vector<Generator>> gens = gens_;
    for (auto& stage : gens)
        for (auto& g : stage)
            g.degree += k;
    return MinimalResolution(alg_, full_, suspend(module_, k), s_max_, t_max_ + k, gens, diffs_);
}

std::map<std::pair<int, int>, int> MinimalResolution::dims_table() const
{
    std::map<std::pair<int, int>, int> out;
    for (int s = 0; s <= s_max_; ++s)
        for (const auto& g : gens_[std::size_t(s)])
            out[{s, g.degree}]++;
    return out;
}

MinimalResolution minimal_resolution(std::shared_ptr<const SteenrodAlgebra> alg,
                                     std::shared_ptr<const SteenrodAlgebra> full,
                                     GradedModule module, int s_max, int t_max)
{
    return MinimalResolution(std::move(alg), std::move(full), std::move(module), s_max, t_max);
}

ExtChart ext_chart(const MinimalResolution& r)
{
    ExtChart chart;
    for (int s = 0; s <= r.s_max(); ++s) {
        std::map<int, int> seen;
        for (const auto& g : r.generators(s)) {
            int k = seen[g.degree]++;
            chart.dims[{s, g.degree}]++;
            chart.names[{s, g.degree}].push_back(fmt::format("{}_{}_{}", s, g.degree, k));
        }
    }
    return chart;
}

std::optional<std::pair<int, int>> a_linear_violation(const GradedModule& m, const GradedModule& n,
                                                      const GradedMap& f)
{
    for (int d = m.min_degree(); d <= m.top_degree(); ++d) {
        if (!f.defined(d))
            continue;
        for (int k = 1; d + k <= std::max(m.top_degree(), n.top_degree()); ++k) {
            if (!f.defined(d + k))
                continue;
            F2Matrix lhs = f.at(d) * n.sq_matrix(k, d + f.shift);
            F2Matrix rhs = m.sq_matrix(k, d) * f.at(d + k);
            if (lhs != rhs) {
                /* witness: the first generator on which f and Sq^k disagree */
                for (std::size_t i = 0; i < lhs.rows(); ++i)
                    if (lhs.row(i) != rhs.row(i))
                        return std::make_pair(m.generators_in_degree(d)[i], k);
                return std::make_pair(d, k);
            }
        }
    }
    return std::nullopt;
}

ChainMap lift_chain_map(const MinimalResolution& rM, const MinimalResolution& rN,
                        const GradedMap& f, uint64_t order_seed)
{
    if (auto w = a_linear_violation(rM.module(), rN.module(), f))
        throw std::invalid_argument(fmt::format(
            "lift_chain_map: f is not A-linear (generator {}, Sq^{})", w->first, w->second));
    ChainMap cm;
    int s_top = std::min(rM.s_max(), rN.s_max());
    cm.stage_values.resize(std::size_t(s_top) + 1);
    for (int s = 0; s <= s_top; ++s) {
        const auto& gens = rM.generators(s);
        cm.stage_values[std::size_t(s)].resize(gens.size());
        for (std::size_t g = 0; g < gens.size(); ++g) {
            int t = gens[g].degree;
            if (t > std::min(rM.t_max(), rN.t_max()))
                continue;
            F2Vector target;
            if (s == 0) {
                const F2Vector& aug = rM.augmentation(int(g));
                target = f.defined(t) ? f.at(t).apply_row(aug)
                                      : F2Vector(rN.module().dim_in_degree(t));
            } else {
                /* phi_{s-1} applied to d(g) */
                const F2Vector& d = rM.differential(s, int(g));
                const auto& fbM = rM.free_basis(s - 1, t);
                target = F2Vector(rN.free_basis(s - 1, t).size());
                const auto& gsM = rM.generators(s - 1);
                for (std::size_t bit : d.support()) {
                    auto [gm, c_idx] = fbM.elems[bit];
                    int gdeg = gsM[std::size_t(gm)].degree;
                    const F2Vector& img = cm.stage_values[std::size_t(s - 1)][std::size_t(gm)];
                    target ^= rN.act(s - 1, gdeg, t - gdeg, c_idx, img);
                }
            }
            auto x = rN.solve_differential(s, t, target, order_seed);
            if (!x)
                throw std::logic_error("lift_chain_map: lift does not exist");
            cm.stage_values[std::size_t(s)][g] = std::move(*x);
        }
    }
    /* unit-coefficient part per (s,t) */
    for (int s = 0; s <= s_top; ++s) {
        for (int t = rM.module().min_degree(); t <= std::min(rM.t_max(), rN.t_max()); ++t) {
            auto gm = rM.generators_in_degree(s, t);
            auto gn = rN.generators_in_degree(s, t);
            if (gm.empty() && gn.empty())
                continue;
            F2Matrix mat(gm.size(), gn.size());
            const auto& fbN = rN.free_basis(s, t);
            for (std::size_t i = 0; i < gm.size(); ++i) {
                const F2Vector& v = cm.stage_values[std::size_t(s)][std::size_t(gm[i])];
                if (v.size() == 0)
                    continue;
                for (std::size_t j = 0; j < gn.size(); ++j)
                    if (v.get(fbN.index(gn[j], 0)))
                        mat.set(i, j, true);
            }
            cm.gen_matrix.emplace(std::make_pair(s, t), std::move(mat));
        }
    }
    return cm;
}

void validate_ses(const ModuleSES& ses)
{
    if (auto w = a_linear_violation(ses.sub, ses.mid, ses.incl))
        throw std::invalid_argument(fmt::format("SES: inclusion not A-linear (generator {}, Sq^{})",
                                                w->first, w->second));
    if (auto w = a_linear_violation(ses.mid, ses.quot, ses.proj))
        throw std::invalid_argument(fmt::format("SES: projection not A-linear (generator {}, Sq^{})",
                                                w->first, w->second));
    int lo = std::min(ses.sub.min_degree(), ses.mid.min_degree());
    int hi = std::max(ses.sub.top_degree(), ses.mid.top_degree());
    for (int d = lo; d <= hi; ++d) {
        std::size_t ns = ses.sub.dim_in_degree(d);
        std::size_t nm = ses.mid.dim_in_degree(d);
        std::size_t nq = ses.quot.dim_in_degree(d);
        if (nm != ns + nq)
            throw std::invalid_argument(fmt::format("SES: dims {} + {} != {} at degree {}", ns,
                                                    nq, nm, d));
        if (ns == 0 && nq == 0)
            continue;
        const F2Matrix& I = ses.incl.at(d);
        const F2Matrix& P = ses.proj.at(d);
        if (rref(I).rank != ns)
            throw std::invalid_argument(fmt::format("SES: inclusion not injective at degree {}", d));
        if (rref(P).rank != nq)
            throw std::invalid_argument(
                fmt::format("SES: projection not surjective at degree {}", d));
        if (!(I * P).is_zero())
            throw std::invalid_argument(fmt::format("SES: proj . incl != 0 at degree {}", d));
        /* rank-nullity: im(incl) = ker(proj) follows from ranks */
        if (rref(I).rank + rref(P).rank != nm)
            throw std::invalid_argument(fmt::format("SES: inexact at degree {}", d));
    }
}

namespace {

/* module action helper with a local cache */
struct ModAction {
    const GradedModule& mod;
    const SteenrodAlgebra& alg;
    const SteenrodAlgebra& full;
    std::map<std::pair<int, uint32_t>, GradedMap> cache;

    const GradedMap& get(int b_deg, uint32_t b_idx)
    {
        auto key = std::make_pair(b_deg, b_idx);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        GradedMap gm = action_of(mod, MilnorElement(alg.basis(b_deg)[b_idx]), full,
                                 mod.top_degree());
        return cache.emplace(key, std::move(gm)).first->second;
    }
};

}  // namespace

ConnectingResult connecting_map(const ModuleSES& ses, const MinimalResolution& r_sub,
                                const MinimalResolution& r_mid, const MinimalResolution& r_quot)
{
    validate_ses(ses);
    ConnectingResult out;
    out.incl_star = lift_chain_map(r_sub, r_mid, ses.incl);
    out.proj_star = lift_chain_map(r_mid, r_quot, ses.proj);

    const int s_max = std::min({r_sub.s_max(), r_mid.s_max(), r_quot.s_max()});
    const int t_max = std::min({r_sub.t_max(), r_mid.t_max(), r_quot.t_max()});

    ModAction mid_act{ses.mid, r_mid.algebra(), *r_mid.full_ptr(), {}};

    /* SES matrices default to zero of the right shape outside the given range */
    auto incl_at = [&](int d) {
        return ses.incl.defined(d)
                   ? ses.incl.at(d)
                   : F2Matrix(ses.sub.dim_in_degree(d), ses.mid.dim_in_degree(d));
    };
    auto proj_at = [&](int d) {
        return ses.proj.defined(d)
                   ? ses.proj.at(d)
                   : F2Matrix(ses.mid.dim_in_degree(d), ses.quot.dim_in_degree(d));
    };

    /* stage-0 lifts of the quotient augmentation through proj */
    std::vector<F2Vector> lift0(r_quot.generators(0).size());
    for (std::size_t g = 0; g < lift0.size(); ++g) {
        int t = r_quot.generators(0)[g].degree;
        if (t > t_max)
            continue;
        const F2Vector& aug = r_quot.augmentation(int(g));
        auto m = solve(proj_at(t).transposed(), aug);
        if (!m)
            throw std::logic_error("connecting_map: projection lift failed");
        lift0[g] = std::move(*m);
    }
    auto apply_lift0 = [&](int t, const F2Vector& x) {
        /* x over F''_0 basis at degree t -> element of mid^t */
        const auto& fb = r_quot.free_basis(0, t);
        const auto& gs = r_quot.generators(0);
        F2Vector y(ses.mid.dim_in_degree(t));
        for (std::size_t bit : x.support()) {
            auto [g, c_idx] = fb.elems[bit];
            int gdeg = gs[std::size_t(g)].degree;
            int c_deg = t - gdeg;
            if (c_deg == 0)
                y ^= lift0[std::size_t(g)];
            else
                y ^= mid_act.get(c_deg, c_idx).at(gdeg).apply_row(lift0[std::size_t(g)]);
        }
        return y;
    };

    /* gamma_s : F''_s -> F'_{s-1}, on generators */
    std::vector<std::vector<F2Vector>> gamma(std::size_t(s_max) + 1);
    for (int s = 1; s <= s_max; ++s) {
        const auto& gens = r_quot.generators(s);
        gamma[std::size_t(s)].resize(gens.size());
        for (std::size_t g = 0; g < gens.size(); ++g) {
            int t = gens[g].degree;
            if (t > t_max)
                continue;
            const F2Vector& d = r_quot.differential(s, int(g));
            F2Vector target;
            if (s == 1) {
                F2Vector v = apply_lift0(t, d);
                /* v lies in the kernel of proj, hence in the image of incl */
                if (!proj_at(t).apply_row(v).is_zero())
                    throw std::logic_error("connecting_map: lift is not a proj-kernel element");
                auto w = solve(incl_at(t).transposed(), v);
                if (!w)
                    throw std::logic_error("connecting_map: inclusion preimage failed");
                auto x = r_sub.solve_differential(0, t, *w);
                if (!x)
                    throw std::logic_error("connecting_map: stage-0 solve failed");
                gamma[1][g] = std::move(*x);
            } else {
                /* target = gamma_{s-1}(d''(g)) in F'_{s-2} */
                const auto& fbQ = r_quot.free_basis(s - 1, t);
                const auto& gsQ = r_quot.generators(s - 1);
                target = F2Vector(r_sub.free_basis(s - 2, t).size());
                for (std::size_t bit : d.support()) {
                    auto [gq, c_idx] = fbQ.elems[bit];
                    int gdeg = gsQ[std::size_t(gq)].degree;
                    const F2Vector& img = gamma[std::size_t(s - 1)][std::size_t(gq)];
                    if (img.size() == 0)
                        continue;
                    target ^= r_sub.act(s - 2, gdeg, t - gdeg, c_idx, img);
                }
                auto x = r_sub.solve_differential(s - 1, t, target);
                if (!x)
                    throw std::logic_error("connecting_map: zig-zag solve failed");
                gamma[std::size_t(s)][g] = std::move(*x);
            }
        }
    }

    /* delta matrices: unit coefficients of gamma_{s+1} */
    for (int s = 0; s + 1 <= s_max; ++s) {
        for (int t = 0; t <= t_max; ++t) {
            auto rows = r_quot.generators_in_degree(s + 1, t);
            auto cols = r_sub.generators_in_degree(s, t);
            if (rows.empty() && cols.empty())
                continue;
            F2Matrix mat(rows.size(), cols.size());
            const auto& fbS = r_sub.free_basis(s, t);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const F2Vector& v = gamma[std::size_t(s + 1)][std::size_t(rows[i])];
                if (v.size() == 0)
                    continue;
                for (std::size_t j = 0; j < cols.size(); ++j)
                    if (v.get(fbS.index(cols[j], 0)))
                        mat.set(i, j, true);
            }
            out.delta.emplace(std::make_pair(s, t), std::move(mat));
        }
    }

    /* LES exactness: ... -> Ext^s(quot) -> Ext^s(mid) -> Ext^s(sub) -d-> Ext^{s+1}(quot) -> ... */
    auto mat_of = [](const std::map<std::pair<int, int>, F2Matrix>& m, int s, int t,
                     std::size_t rows, std::size_t cols) {
        auto it = m.find({s, t});
        return it == m.end() ? F2Matrix(rows, cols) : it->second;
    };
    for (int t = 0; t <= t_max; ++t) {
        for (int s = 0; s <= s_max; ++s) {
            std::size_t nq = r_quot.ext_dim(s, t);
            std::size_t nm = r_mid.ext_dim(s, t);
            std::size_t ns = r_sub.ext_dim(s, t);
            F2Matrix Gp = mat_of(out.proj_star.gen_matrix, s, t, nm, nq);
            F2Matrix Gi = mat_of(out.incl_star.gen_matrix, s, t, ns, nm);
            /* node Ext^s(quot): ker(proj*) = im(delta at s-1) */
            std::size_t rank_p = rref(Gp).rank;
            if (s >= 1) {
                std::size_t nq_in = r_sub.ext_dim(s - 1, t);
                F2Matrix D = mat_of(out.delta, s - 1, t, nq, nq_in);
                if (!(D.transposed() * Gp.transposed()).is_zero())
                    throw std::logic_error(
                        fmt::format("LES: proj* . delta != 0 at (s,t)=({},{})", s, t));
                if (rref(D).rank + rank_p != nq)
                    throw std::logic_error(
                        fmt::format("LES: inexact at Ext^{{{},{}}}(quot)", s, t));
            } else if (rank_p != nq) {
                throw std::logic_error(fmt::format("LES: proj* not injective at (0,{})", t));
            }
            /* node Ext^s(mid): ker(incl*) = im(proj*) */
            if (!(Gp.transposed() * Gi.transposed()).is_zero())
                throw std::logic_error(
                    fmt::format("LES: incl* . proj* != 0 at (s,t)=({},{})", s, t));
            if (rank_p + rref(Gi).rank != nm)
                throw std::logic_error(fmt::format("LES: inexact at Ext^{{{},{}}}(mid)", s, t));
            /* node Ext^s(sub): ker(delta) = im(incl*) */
            if (s + 1 <= s_max) {
                std::size_t nq1 = r_quot.ext_dim(s + 1, t);
                F2Matrix D = mat_of(out.delta, s, t, nq1, ns);
                if (!(Gi.transposed() * D.transposed()).is_zero())
                    throw std::logic_error(
                        fmt::format("LES: delta . incl* != 0 at (s,t)=({},{})", s, t));
                if (rref(Gi).rank + rref(D).rank != ns)
                    throw std::logic_error(fmt::format("LES: inexact at Ext^{{{},{}}}(sub)", s, t));
            }
        }
    }
    return out;
}

ConnectingResult connecting_map(std::shared_ptr<const SteenrodAlgebra> alg,
                                std::shared_ptr<const SteenrodAlgebra> full, const ModuleSES& ses,
                                int s_max, int t_max)
{
    MinimalResolution r_sub(alg, full, ses.sub, s_max + 1, t_max);
    MinimalResolution r_mid(alg, full, ses.mid, s_max + 1, t_max);
    MinimalResolution r_quot(alg, full, ses.quot, s_max + 1, t_max);
    return connecting_map(ses, r_sub, r_mid, r_quot);
}

ModuleSES h_multiplication_ses(int i, const GradedModule& m, int max_deg)
{
    const int q = 1 << i;
    /* cone basis: (cell, gen) with cell 0 in degree deg(gen), cell 1 in
     * degree deg(gen) + 2^i, sorted by (degree, cell, gen) */
    struct Cell {
        int cell, gen, degree;
    };
    std::vector<Cell> cells;
    for (int g = 0; g < m.dim(); ++g) {
        if (m.degree(g) <= max_deg)
            cells.push_back({0, g, m.degree(g)});
        if (m.degree(g) + q <= max_deg)
            cells.push_back({1, g, m.degree(g) + q});
    }
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.degree != b.degree)
            return a.degree < b.degree;
        if (a.cell != b.cell)
            return a.cell < b.cell;
        return a.gen < b.gen;
    });
    std::map<std::pair<int, int>, int> pos;
    std::vector<int> degrees;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        pos[{cells[c].cell, cells[c].gen}] = int(c);
        degrees.push_back(cells[c].degree);
    }
    std::map<std::pair<int, int>, std::vector<int>> actions;
    auto add_target = [&](std::vector<int>& v, int cell, int gen) {
        auto it = pos.find({cell, gen});
        if (it != pos.end())
            v.push_back(it->second);
    };
    for (std::size_t c = 0; c < cells.size(); ++c) {
        auto [cell, gen, mydeg] = cells[c];
        for (int k = 1; mydeg + k <= max_deg; ++k) {
            std::vector<int> targets;
            /* Sq^k on the module factor */
            if (auto it = m.actions().find({gen, k}); it != m.actions().end())
                for (int j : it->second)
                    add_target(targets, cell, j);
            if (cell == 0) {
                /* connecting Sq^{2^i}: Cartan cross terms Sq^{k-2^i} on the module */
                if (k == q) {
                    add_target(targets, 1, gen);
                } else if (k > q) {
                    if (auto it = m.actions().find({gen, k - q}); it != m.actions().end())
                        for (int j : it->second)
                            add_target(targets, 1, j);
                }
            }
            std::sort(targets.begin(), targets.end());
            std::vector<int> reduced;
            for (std::size_t u = 0; u < targets.size();) {
                std::size_t v = u;
                while (v < targets.size() && targets[v] == targets[u])
                    ++v;
                if ((v - u) % 2)
                    reduced.push_back(targets[u]);
                u = v;
            }
            if (!reduced.empty())
                actions[{int(c), k}] = std::move(reduced);
        }
    }
    ModuleSES ses;
    ses.mid = GradedModule(std::move(degrees), std::move(actions));
    /* truncate sub/quot consistently with the cone window */
    std::vector<int> sub_deg, quot_deg;
    std::vector<int> sub_keep, quot_keep;
    for (int g = 0; g < m.dim(); ++g) {
        if (m.degree(g) + q <= max_deg) {
            sub_keep.push_back(g);
            sub_deg.push_back(m.degree(g) + q);
        }
        if (m.degree(g) <= max_deg) {
            quot_keep.push_back(g);
            quot_deg.push_back(m.degree(g));
        }
    }
    auto restrict_actions = [&](const std::vector<int>& keep, int shift) {
        std::map<int, int> remap;
        for (std::size_t x = 0; x < keep.size(); ++x)
            remap[keep[x]] = int(x);
        std::map<std::pair<int, int>, std::vector<int>> out;
        for (const auto& [key, targets] : m.actions()) {
            auto src = remap.find(key.first);
            if (src == remap.end())
                continue;
            std::vector<int> t;
            for (int j : targets)
                if (auto dst = remap.find(j); dst != remap.end())
                    t.push_back(dst->second);
            if (!t.empty() && m.degree(key.first) + shift + key.second <= max_deg)
                out[{src->second, key.second}] = std::move(t);
        }
        return out;
    };
    ses.sub = GradedModule(sub_deg, restrict_actions(sub_keep, q));
    ses.quot = GradedModule(quot_deg, restrict_actions(quot_keep, 0));

    ses.incl.shift = 0;
    ses.proj.shift = 0;
    for (int d = ses.mid.min_degree(); d <= ses.mid.top_degree(); ++d) {
        F2Matrix I(ses.sub.dim_in_degree(d), ses.mid.dim_in_degree(d));
        const auto& sgens = ses.sub.generators_in_degree(d);
        for (std::size_t x = 0; x < sgens.size(); ++x) {
            int orig = sub_keep[std::size_t(sgens[x])];
            I.set(x, std::size_t(ses.mid.slice_index(pos.at({1, orig}))), true);
        }
        F2Matrix P(ses.mid.dim_in_degree(d), ses.quot.dim_in_degree(d));
        const auto& mgens = ses.mid.generators_in_degree(d);
        for (std::size_t x = 0; x < mgens.size(); ++x) {
            const Cell& c = cells[std::size_t(mgens[x])];
            if (c.cell == 0)
                P.set(x, std::size_t(ses.quot.slice_index(c.gen)), true);
        }
        ses.incl.mats.emplace(d, std::move(I));
        ses.proj.mats.emplace(d, std::move(P));
    }
    return ses;
}

std::map<std::pair<int, int>, F2Matrix> h_multiplication(const MinimalResolution& r, int i)
{
    const int q = 1 << i;
    ModuleSES ses = h_multiplication_ses(i, r.module(), r.t_max());
    MinimalResolution r_mid(r.algebra_ptr(), r.full_ptr(), ses.mid, r.s_max(), r.t_max());
    MinimalResolution r_sub(r.algebra_ptr(), r.full_ptr(), ses.sub, r.s_max(), r.t_max());
    MinimalResolution r_quot(r.algebra_ptr(), r.full_ptr(), ses.quot, r.s_max(), r.t_max());
    ConnectingResult conn = connecting_map(ses, r_sub, r_mid, r_quot);
    /* delta[(s,t)]: Ext^{s,t}(Sigma^{2^i} M) -> Ext^{s+1,t}(M); reindex the
     * source by the suspension so the result is h_i: (s,t') -> (s+1, t'+2^i) */
    std::map<std::pair<int, int>, F2Matrix> out;
    for (const auto& [key, mat] : conn.delta) {
        auto [s, t] = key;
        if (mat.rows() == 0 && mat.cols() == 0)
            continue;
        out[{s, t - q}] = mat;
    }
    return out;
}

}  // namespace f2ext
