#include "f2ext/steenrod.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <functional>
#include <stdexcept>

namespace f2ext {

std::string MilnorMonomial::str() const
{
    if (r.empty())
        return "Sq()";
    return fmt::format("Sq({})", fmt::join(r, ","));
}

void MilnorElement::toggle(const MilnorMonomial& m)
{
    auto it = std::lower_bound(terms.begin(), terms.end(), m);
    if (it != terms.end() && *it == m)
        terms.erase(it);
    else
        terms.insert(it, m);
}

MilnorElement& MilnorElement::operator^=(const MilnorElement& o)
{
    for (const auto& m : o.terms)
        toggle(m);
    return *this;
}

std::string MilnorElement::str() const
{
    if (terms.empty())
        return "0";
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i)
            s += " + ";
        s += terms[i].str();
    }
    return s;
}

MilnorElement milnor_primitive(int i)
{
    if (i < 0)
        throw std::invalid_argument("milnor_primitive: negative index");
    std::vector<uint32_t> r(std::size_t(i) + 1, 0);
    r.back() = 1;
    return MilnorElement(MilnorMonomial(std::move(r)));
}

Profile Profile::subalgebra_A(int n)
{
    Profile p;
    for (int i = 0; i <= n; ++i)
        p.heights.push_back(uint8_t(n + 1 - i));
    if (p.heights.empty())
        p.heights.push_back(0); /* A(-1) = F2 */
    return p;
}

Profile Profile::exterior_Q(int n)
{
    Profile p;
    p.heights.assign(std::size_t(n) + 1, 0);
    p.heights[std::size_t(n)] = 1;
    return p;
}

Profile Profile::exterior_Q_range(int n)
{
    Profile p;
    p.heights.assign(std::size_t(n) + 1, 1);
    return p;
}

bool Profile::admits(const MilnorMonomial& m) const
{
    if (heights.empty())
        return true;
    for (std::size_t i = 0; i < m.r.size(); ++i) {
        uint8_t h = height(i + 1);
        if (h == kInfinite)
            continue;
        if (h >= 32) {
            if (uint64_t(m.r[i]) >= (uint64_t(1) << h))
                return false;
        } else if (m.r[i] >= (uint32_t(1) << h)) {
            return false;
        }
    }
    return true;
}

std::string Profile::str() const
{
    if (heights.empty())
        return "A";
    std::string s = "(";
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (i)
            s += ",";
        s += heights[i] == kInfinite ? std::string("inf") : std::to_string(int(heights[i]));
    }
    return s + ")";
}

std::vector<AdmissibleWord> adem_rewrite(uint32_t a, uint32_t b)
{
    if (a >= 2 * b)
        throw std::invalid_argument("adem_rewrite: word already admissible");
    std::vector<AdmissibleWord> out;
    for (uint32_t c = 0; 2 * c <= a; ++c) {
        if (!binom_mod2(b - c - 1, a - 2 * c))
            continue;
        AdmissibleWord w;
        w.push_back(a + b - c);
        if (c > 0)
            w.push_back(c);
        out.push_back(std::move(w));
    }
    return out;
}

namespace {

/* Enumerate all Milnor matrices for the product Sq(r) * Sq(s) and feed the
 * surviving diagonal sequences into `emit`.  A matrix survives iff on each
 * diagonal the entries have pairwise disjoint binary digits (odd multinomial). */
void milnor_matrices(const std::vector<uint32_t>& r, const std::vector<uint32_t>& s,
                     const std::function<void(const std::vector<uint32_t>&)>& emit)
{
    const std::size_t R = r.size(), S = s.size();
    std::vector<std::vector<uint32_t>> x(R + 1, std::vector<uint32_t>(S + 1, 0));
    std::vector<uint32_t> rrem(r); /* remaining weighted budget per row */
    std::vector<uint32_t> srem(s); /* remaining budget per column */
    std::vector<uint32_t> diag(R + S + 1, 0);

    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
        if (i > R) {
            for (std::size_t jj = 1; jj <= S; ++jj)
                x[0][jj] = srem[jj - 1];
            for (std::size_t ii = 1; ii <= R; ++ii)
                x[ii][0] = rrem[ii - 1];
            for (std::size_t n = 1; n <= R + S; ++n) {
                uint32_t acc_or = 0;
                uint64_t acc_sum = 0;
                std::size_t lo = n > S ? n - S : 0;
                for (std::size_t ii = lo; ii <= std::min(n, R); ++ii) {
                    uint32_t v = x[ii][n - ii];
                    acc_or |= v;
                    acc_sum += v;
                }
                if (acc_sum != acc_or)
                    return;
                diag[n] = uint32_t(acc_sum);
            }
            std::vector<uint32_t> t(diag.begin() + 1, diag.end());
            emit(t);
            return;
        }
        if (j > S) {
            rec(i + 1, 1);
            return;
        }
        uint64_t w = uint64_t(1) << j;
        uint32_t bound = uint32_t(std::min<uint64_t>(rrem[i - 1] / w, srem[j - 1]));
        for (uint32_t v = 0; v <= bound; ++v) {
            x[i][j] = v;
            rrem[i - 1] -= uint32_t(v * w);
            srem[j - 1] -= v;
            rec(i, j + 1);
            rrem[i - 1] += uint32_t(v * w);
            srem[j - 1] += v;
        }
        x[i][j] = 0;
    };
    rec(1, 1);
}

}  // namespace

MilnorElement milnor_monomial_product(const MilnorMonomial& a, const MilnorMonomial& b)
{
    if (a.is_unit())
        return MilnorElement(b);
    if (b.is_unit())
        return MilnorElement(a);
    MilnorElement out;
    milnor_matrices(a.r, b.r,
                    [&out](const std::vector<uint32_t>& t) { out.toggle(MilnorMonomial(t)); });
    return out;
}

SteenrodAlgebra::SteenrodAlgebra(Profile profile, int max_degree)
    : profile_(std::move(profile)), max_degree_(max_degree)
{
    if (max_degree < 0)
        throw std::invalid_argument("SteenrodAlgebra: negative degree cap");
    basis_cache_.resize(std::size_t(max_degree) + 1);
    adm_cache_.resize(std::size_t(max_degree) + 1);
}

const std::vector<MilnorMonomial>& SteenrodAlgebra::basis_locked(int d) const
{
    auto& slot = basis_cache_[std::size_t(d)];
    if (slot)
        return *slot;
    std::vector<MilnorMonomial> out;
    std::size_t max_slot = 1;
    while ((int64_t(1) << (max_slot + 2)) - 1 <= d)
        ++max_slot;
    ++max_slot; /* slots 1..max_slot may carry a nonzero exponent */
    std::vector<uint32_t> exps(max_slot, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t slot_i, int rem) {
        if (rem == 0) {
            out.emplace_back(exps);
            return;
        }
        if (slot_i == 0)
            return;
        int64_t w = (int64_t(1) << slot_i) - 1;
        uint8_t h = profile_.height(slot_i);
        uint64_t cap = h == Profile::kInfinite ? uint64_t(rem)
                       : h >= 32               ? uint64_t(rem)
                                               : (uint64_t(1) << h) - 1;
        uint64_t top = std::min<uint64_t>(cap, uint64_t(rem) / uint64_t(w));
        for (uint64_t v = 0; v <= top; ++v) {
            exps[slot_i - 1] = uint32_t(v);
            rec(slot_i - 1, rem - int(int64_t(v) * w));
        }
        exps[slot_i - 1] = 0;
    };
    rec(max_slot, d);
    std::sort(out.begin(), out.end());
    slot = std::move(out);
    return *slot;
}

const std::vector<MilnorMonomial>& SteenrodAlgebra::basis(int d) const
{
    if (d < 0 || d > max_degree_)
        throw std::out_of_range(fmt::format("basis: degree {} outside cap {}", d, max_degree_));
    std::lock_guard<std::mutex> lock(mu_);
    return basis_locked(d);
}

std::optional<std::size_t> SteenrodAlgebra::index_of(int d, const MilnorMonomial& m) const
{
    const auto& b = basis(d);
    auto it = std::lower_bound(b.begin(), b.end(), m);
    if (it != b.end() && *it == m)
        return std::size_t(it - b.begin());
    return std::nullopt;
}

const std::vector<uint32_t>& SteenrodAlgebra::product_indices(int da, uint32_t ia, int db,
                                                              uint32_t ib) const
{
    std::lock_guard<std::mutex> lock(mu_);
    auto& bucket = prod_cache_[{da, db}];
    uint64_t key = (uint64_t(ia) << 32) | ib;
    auto it = bucket.find(key);
    if (it != bucket.end())
        return it->second;
    const auto& a = basis_locked(da)[ia];
    const auto& b = basis_locked(db)[ib];
    MilnorElement prod = milnor_monomial_product(a, b);
    std::vector<uint32_t> idx;
    const auto& target = basis_locked(da + db);
    for (const auto& m : prod.terms) {
        if (!profile_.admits(m))
            continue; /* reduced modulo the profile truncation */
        auto pos = std::lower_bound(target.begin(), target.end(), m);
        if (pos == target.end() || !(*pos == m))
            throw std::logic_error("product term missing from basis");
        idx.push_back(uint32_t(pos - target.begin()));
    }
    return bucket.emplace(key, std::move(idx)).first->second;
}

MilnorElement SteenrodAlgebra::product(const MilnorElement& x, const MilnorElement& y,
                                       bool truncate) const
{
    if (x.is_zero() || y.is_zero())
        return MilnorElement::zero();
    int d = x.degree() + y.degree();
    if (d > max_degree_) {
        if (truncate)
            return MilnorElement::zero();
        throw std::out_of_range("product: degree exceeds cap");
    }
    MilnorElement out;
    for (const auto& a : x.terms)
        for (const auto& b : y.terms) {
            MilnorElement p = milnor_monomial_product(a, b);
            for (const auto& m : p.terms)
                if (profile_.admits(m))
                    out.toggle(m);
        }
    return out;
}

const std::vector<AdmissibleWord>& SteenrodAlgebra::admissible_words(int d) const
{
    std::lock_guard<std::mutex> lock(mu_);
    return adm_basis_locked(d).words;
}

const SteenrodAlgebra::AdmBasis& SteenrodAlgebra::adm_basis_locked(int d) const
{
    if (d < 0 || d > max_degree_)
        throw std::out_of_range("admissible basis: degree outside cap");
    auto& slot = adm_cache_[std::size_t(d)];
    if (slot)
        return *slot;
    if (!profile_.is_full())
        throw std::logic_error("admissible basis requires the full algebra");
    const auto& milnor = basis_locked(d);
    auto ab = std::make_unique<AdmBasis>(milnor.size());
    /* enumerate admissible words right-to-left: the next letter k to the left
     * of a word starting (from the right) with letter m must satisfy k >= 2m */
    AdmissibleWord w;
    std::function<void(int, uint32_t)> rec = [&](int rem, uint32_t min_next) {
        if (rem == 0 && !w.empty()) {
            AdmissibleWord word(w.rbegin(), w.rend());
            ab->words.push_back(std::move(word));
            return;
        }
        for (uint32_t k = std::max<uint32_t>(min_next, 1); k <= uint32_t(rem); ++k) {
            w.push_back(k);
            rec(rem - int(k), 2 * k);
            w.pop_back();
        }
    };
    if (d == 0) {
        ab->words.push_back({}); /* the unit */
    } else {
        rec(d, 1);
    }
    std::sort(ab->words.begin(), ab->words.end());
    if (ab->words.size() != milnor.size())
        throw std::logic_error(fmt::format("admissible count {} != Milnor count {} in degree {}",
                                           ab->words.size(), milnor.size(), d));
    for (const auto& word : ab->words) {
        MilnorElement e = admissible_to_milnor(word);
        F2Vector coords(milnor.size());
        for (const auto& m : e.terms) {
            auto pos = std::lower_bound(milnor.begin(), milnor.end(), m);
            if (pos == milnor.end() || !(*pos == m))
                throw std::logic_error("admissible expansion left the basis");
            coords.flip(std::size_t(pos - milnor.begin()));
        }
        if (ab->elim.add(std::move(coords)))
            throw std::logic_error("admissible words are not independent");
    }
    slot = std::move(ab);
    return *slot;
}

MilnorElement SteenrodAlgebra::admissible_to_milnor(const AdmissibleWord& word) const
{
    MilnorElement e = MilnorElement::unit();
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        MilnorElement next;
        MilnorMonomial sq = MilnorMonomial::sq(*it);
        for (const auto& m : e.terms)
            next ^= milnor_monomial_product(sq, m);
        e = std::move(next);
    }
    return e;
}

std::vector<AdmissibleWord> SteenrodAlgebra::milnor_to_admissible(const MilnorElement& x) const
{
    if (x.is_zero())
        return {};
    int d = x.degree();
    std::lock_guard<std::mutex> lock(mu_);
    const AdmBasis& ab = adm_basis_locked(d);
    const auto& milnor = basis_locked(d);
    F2Vector coords(milnor.size());
    for (const auto& m : x.terms) {
        auto pos = std::lower_bound(milnor.begin(), milnor.end(), m);
        if (pos == milnor.end() || !(*pos == m))
            throw std::logic_error("milnor_to_admissible: term outside basis");
        coords.flip(std::size_t(pos - milnor.begin()));
    }
    auto combo = ab.elim.express(coords);
    if (!combo)
        throw std::logic_error("milnor_to_admissible: failed to express element");
    std::vector<AdmissibleWord> out;
    for (std::size_t i : combo->support())
        out.push_back(ab.words[i]);
    return out;
}

}  // namespace f2ext
