#include "f2ext/bruner.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>

namespace f2ext {

GradedModule::GradedModule(std::vector<int> degrees,
                           std::map<std::pair<int, int>, std::vector<int>> actions)
    : degrees_(std::move(degrees)), actions_(std::move(actions))
{
    for (std::size_t i = 1; i < degrees_.size(); ++i)
        if (degrees_[i] < degrees_[i - 1])
            throw std::invalid_argument("GradedModule: degrees must be non-decreasing");
    int n = dim();
    for (auto& [key, targets] : actions_) {
        auto [i, k] = key;
        if (i < 0 || i >= n || k <= 0)
            throw std::invalid_argument("GradedModule: bad action key");
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (int j : targets) {
            if (j < 0 || j >= n)
                throw std::invalid_argument("GradedModule: action target out of range");
            if (degrees_[std::size_t(j)] != degrees_[std::size_t(i)] + k)
                throw std::invalid_argument(fmt::format(
                    "GradedModule: action ({},{}) -> {} is not degree-homogeneous", i, k, j));
        }
    }
    build_index();
}

void GradedModule::build_index()
{
    slices_.clear();
    slice_index_.assign(degrees_.size(), 0);
    for (std::size_t g = 0; g < degrees_.size(); ++g) {
        auto& v = slices_[degrees_[g]];
        slice_index_[g] = int(v.size());
        v.push_back(int(g));
    }
}

const std::vector<int>& GradedModule::generators_in_degree(int d) const
{
    static const std::vector<int> empty;
    auto it = slices_.find(d);
    return it == slices_.end() ? empty : it->second;
}

int GradedModule::slice_index(int gen) const { return slice_index_.at(std::size_t(gen)); }

F2Matrix GradedModule::sq_matrix(int k, int source_degree) const
{
    const auto& src = generators_in_degree(source_degree);
    const auto& dst = generators_in_degree(source_degree + k);
    F2Matrix m(src.size(), dst.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        auto it = actions_.find({src[i], k});
        if (it == actions_.end())
            continue;
        for (int j : it->second)
            m.flip(i, std::size_t(slice_index(j)));
    }
    return m;
}

namespace {

struct TokenStream {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t token_index = 0;

    std::optional<long> next()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos >= text.size())
            return std::nullopt;
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        long value = 0;
        auto sv = text.substr(start, pos - start);
        auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
        if (ec != std::errc() || p != sv.data() + sv.size())
            throw BrunerError(token_index, fmt::format("token '{}' is not an integer", sv));
        ++token_index;
        return value;
    }

    long require(const char* what)
    {
        auto v = next();
        if (!v)
            throw BrunerError(token_index, fmt::format("truncated stream: expected {}", what));
        return *v;
    }
};

}  // namespace

GradedModule parse_module(std::string_view text)
{
    TokenStream ts{text};
    long n = ts.require("module dimension");
    if (n < 0)
        throw BrunerError(ts.token_index - 1, "negative dimension");
    std::vector<int> degrees;
    degrees.reserve(std::size_t(n));
    for (long i = 0; i < n; ++i) {
        long d = ts.require("generator degree");
        if (!degrees.empty() && d < degrees.back())
            throw BrunerError(ts.token_index - 1, "degrees must be non-decreasing");
        degrees.push_back(int(d));
    }
    std::map<std::pair<int, int>, std::vector<int>> actions;
    for (;;) {
        auto first = ts.next();
        if (!first)
            break;
        long i = *first;
        std::size_t rec_tok = ts.token_index - 1;
        if (i < 0 || i >= n)
            throw BrunerError(rec_tok, fmt::format("generator index {} out of range", i));
        long k = ts.require("Sq exponent");
        if (k <= 0)
            throw BrunerError(ts.token_index - 1, "Sq exponent must be positive");
        long l = ts.require("target count");
        if (l < 0)
            throw BrunerError(ts.token_index - 1, "negative target count");
        std::vector<int> targets;
        for (long t = 0; t < l; ++t) {
            long j = ts.require("action target");
            if (j < 0 || j >= n)
                throw BrunerError(ts.token_index - 1,
                                  fmt::format("target index {} out of range", j));
            if (degrees[std::size_t(j)] != degrees[std::size_t(i)] + int(k))
                throw BrunerError(
                    ts.token_index - 1,
                    fmt::format("degree mismatch: Sq^{}(g_{}) cannot contain g_{} "
                                "(degrees {} + {} != {})",
                                k, i, j, degrees[std::size_t(i)], k, degrees[std::size_t(j)]));
            targets.push_back(int(j));
        }
        auto key = std::make_pair(int(i), int(k));
        if (actions.count(key))
            throw BrunerError(rec_tok, fmt::format("duplicate action record ({}, {})", i, k));
        std::sort(targets.begin(), targets.end());
        if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
            throw BrunerError(rec_tok,
                              fmt::format("repeated target in action record ({}, {})", i, k));
        if (!targets.empty())
            actions.emplace(key, std::move(targets));
    }
    return GradedModule(std::move(degrees), std::move(actions));
}

std::string serialize_module(const GradedModule& m)
{
    std::string out = fmt::format("{}\n", m.dim());
    out += fmt::format("{}\n", fmt::join(m.degrees(), " "));
    for (const auto& [key, targets] : m.actions()) {
        if (targets.empty())
            continue;
        out += fmt::format("{} {} {} {}\n", key.first, key.second, targets.size(),
                           fmt::join(targets, " "));
    }
    return out;
}

GradedModule trivial_module() { return GradedModule({0}, {}); }

GradedModule suspend(const GradedModule& m, int k)
{
    std::vector<int> degrees;
    degrees.reserve(std::size_t(m.dim()));
    for (int d : m.degrees())
        degrees.push_back(d + k);
    return GradedModule(std::move(degrees), m.actions());
}

GradedModule direct_sum(const GradedModule& a, const GradedModule& b)
{
    /* merge generator lists keeping degrees sorted: a's generators first within
     * a common degree */
    int na = a.dim(), nb = b.dim();
    std::vector<std::pair<int, int>> order;  /* (source: 0=a 1=b, index) */
    order.reserve(std::size_t(na + nb));
    int ia = 0, ib = 0;
    while (ia < na || ib < nb) {
        if (ib >= nb || (ia < na && a.degree(ia) <= b.degree(ib)))
            order.push_back({0, ia++});
        else
            order.push_back({1, ib++});
    }
    std::vector<int> remap_a(std::size_t(na), 0);
    std::vector<int> remap_b(std::size_t(nb), 0);
    std::vector<int> degrees;
    for (std::size_t g = 0; g < order.size(); ++g) {
        auto [side, idx] = order[g];
        if (side == 0) {
            remap_a[std::size_t(idx)] = int(g);
            degrees.push_back(a.degree(idx));
        } else {
            remap_b[std::size_t(idx)] = int(g);
            degrees.push_back(b.degree(idx));
        }
    }
    std::map<std::pair<int, int>, std::vector<int>> actions;
    for (const auto& [key, targets] : a.actions()) {
        std::vector<int> t;
        for (int j : targets)
            t.push_back(remap_a[std::size_t(j)]);
        actions[{remap_a[std::size_t(key.first)], key.second}] = std::move(t);
    }
    for (const auto& [key, targets] : b.actions()) {
        std::vector<int> t;
        for (int j : targets)
            t.push_back(remap_b[std::size_t(j)]);
        actions[{remap_b[std::size_t(key.first)], key.second}] = std::move(t);
    }
    return GradedModule(std::move(degrees), std::move(actions));
}

GradedModule tensor(const GradedModule& a, const GradedModule& b, int max_deg)
{
    /* basis pairs ordered by (degree, i, j) */
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            if (a.degree(i) + b.degree(j) <= max_deg)
                pairs.push_back({i, j});
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
        int dp = a.degree(p.first) + b.degree(p.second);
        int dq = a.degree(q.first) + b.degree(q.second);
        if (dp != dq)
            return dp < dq;
        return p < q;
    });
    std::map<std::pair<int, int>, int> index;
    std::vector<int> degrees;
    for (std::size_t g = 0; g < pairs.size(); ++g) {
        index[pairs[g]] = int(g);
        degrees.push_back(a.degree(pairs[g].first) + b.degree(pairs[g].second));
    }

    /* Cartan: Sq^k(x (x) y) = sum_{p+q=k} Sq^p x (x) Sq^q y */
    std::map<std::pair<int, int>, std::vector<int>> actions;
    for (std::size_t g = 0; g < pairs.size(); ++g) {
        auto [i, j] = pairs[g];
        int dg = degrees[g];
        for (int k = 1; dg + k <= max_deg; ++k) {
            std::vector<int> targets;
            for (int p = 0; p <= k; ++p) {
                int q = k - p;
                /* images of g_i under Sq^p and h_j under Sq^q */
                std::vector<int> xi, yj;
                if (p == 0)
                    xi = {i};
                else if (auto it = a.actions().find({i, p}); it != a.actions().end())
                    xi = it->second;
                if (q == 0)
                    yj = {j};
                else if (auto it = b.actions().find({j, q}); it != b.actions().end())
                    yj = it->second;
                for (int x : xi)
                    for (int y : yj) {
                        auto it = index.find({x, y});
                        if (it != index.end())
                            targets.push_back(it->second);
                    }
            }
            /* F2: keep targets appearing an odd number of times */
            std::sort(targets.begin(), targets.end());
            std::vector<int> reduced;
            for (std::size_t t = 0; t < targets.size();) {
                std::size_t u = t;
                while (u < targets.size() && targets[u] == targets[t])
                    ++u;
                if ((u - t) % 2)
                    reduced.push_back(targets[t]);
                t = u;
            }
            if (!reduced.empty())
                actions[{int(g), k}] = std::move(reduced);
        }
    }
    return GradedModule(std::move(degrees), std::move(actions));
}

const F2Matrix& GradedMap::at(int d) const
{
    auto it = mats.find(d);
    if (it == mats.end())
        throw std::out_of_range(fmt::format("GradedMap: no matrix for source degree {}", d));
    return it->second;
}

GradedMap action_of_word(const GradedModule& m, const AdmissibleWord& word, int max_source_deg)
{
    int shift = 0;
    for (uint32_t k : word)
        shift += int(k);
    GradedMap out;
    out.shift = shift;
    for (int d = m.min_degree(); d <= max_source_deg; ++d) {
        std::size_t nd = m.dim_in_degree(d);
        F2Matrix acc = F2Matrix::identity(nd);
        int cur = d;
        /* apply right to left */
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            acc = acc * m.sq_matrix(int(*it), cur);
            cur += int(*it);
        }
        out.mats.emplace(d, std::move(acc));
    }
    return out;
}

GradedMap action_of(const GradedModule& m, const MilnorElement& x, const SteenrodAlgebra& full,
                    int max_source_deg)
{
    if (x.is_zero())
        throw std::invalid_argument("action_of: zero element has no well-defined degree");
    if (x.terms.size() == 1 && x.terms[0].is_unit()) {
        GradedMap out;
        out.shift = 0;
        for (int d = m.min_degree(); d <= max_source_deg; ++d)
            out.mats.emplace(d, F2Matrix::identity(m.dim_in_degree(d)));
        return out;
    }
    auto words = full.milnor_to_admissible(x);
    GradedMap out;
    out.shift = x.degree();
    for (int d = m.min_degree(); d <= max_source_deg; ++d)
        out.mats.emplace(d,
                         F2Matrix(m.dim_in_degree(d), m.dim_in_degree(d + out.shift)));
    for (const auto& w : words) {
        GradedMap part = action_of_word(m, w, max_source_deg);
        for (auto& [d, mat] : out.mats)
            mat = mat + part.at(d);
    }
    return out;
}

std::vector<AdemViolation> validate_module(const GradedModule& m, int relation_top)
{
    std::vector<AdemViolation> report;
    for (int b = 1; b <= relation_top; ++b) {
        for (int a = 1; a < 2 * b && a + b <= relation_top; ++a) {
            auto rhs_words = adem_rewrite(uint32_t(a), uint32_t(b));
            for (int d = m.min_degree(); d <= m.top_degree(); ++d) {
                std::size_t nd = m.dim_in_degree(d);
                if (nd == 0)
                    continue;
                /* lhs: Sq^b then Sq^a */
                F2Matrix lhs = m.sq_matrix(b, d) * m.sq_matrix(a, d + b);
                F2Matrix rhs(nd, m.dim_in_degree(d + a + b));
                for (const auto& w : rhs_words) {
                    if (w.size() == 1) {
                        rhs = rhs + m.sq_matrix(int(w[0]), d);
                    } else {
                        rhs = rhs + m.sq_matrix(int(w[1]), d) * m.sq_matrix(int(w[0]), d + int(w[1]));
                    }
                }
                if (lhs == rhs)
                    continue;
                const auto& gens = m.generators_in_degree(d);
                for (std::size_t i = 0; i < nd; ++i)
                    if (lhs.row(i) != rhs.row(i))
                        report.push_back({a, b, gens[i]});
            }
        }
    }
    return report;
}

}  // namespace f2ext
