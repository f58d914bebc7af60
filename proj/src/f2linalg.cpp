#include "f2ext/f2linalg.hpp"

#include <bit>
#include <fmt/format.h>
#include <stdexcept>

namespace f2ext {

std::ptrdiff_t F2Vector::first_set() const
{
    for (std::size_t k = 0; k < w_.size(); ++k)
        if (w_[k])
            return std::ptrdiff_t(k * 64 + std::countr_zero(w_[k]));
    return -1;
}

std::size_t F2Vector::popcount() const
{
    std::size_t c = 0;
    for (uint64_t w : w_)
        c += std::popcount(w);
    return c;
}

std::vector<std::size_t> F2Vector::support() const
{
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        uint64_t w = w_[k];
        while (w) {
            s.push_back(k * 64 + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return s;
}

std::string F2Vector::str() const
{
    std::string s(n_, '0');
    for (std::size_t i : support())
        s[i] = '1';
    return s;
}

F2Matrix F2Matrix::identity(std::size_t n)
{
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

F2Vector F2Matrix::row(std::size_t i) const
{
    F2Vector v(cols_);
    for (std::size_t k = 0; k < wpr_; ++k)
        v.words()[k] = bits_[i * wpr_ + k];
    return v;
}

void F2Matrix::set_row(std::size_t i, const F2Vector& v)
{
    if (v.size() != cols_)
        throw std::invalid_argument("set_row: size mismatch");
    for (std::size_t k = 0; k < wpr_; ++k)
        bits_[i * wpr_ + k] = v.words()[k];
}

void F2Matrix::swap_rows(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t k = 0; k < wpr_; ++k)
        std::swap(bits_[a * wpr_ + k], bits_[b * wpr_ + k]);
}

bool F2Matrix::row_is_zero(std::size_t i) const
{
    for (std::size_t k = 0; k < wpr_; ++k)
        if (bits_[i * wpr_ + k])
            return false;
    return true;
}

bool F2Matrix::is_zero() const
{
    for (uint64_t w : bits_)
        if (w)
            return false;
    return true;
}

F2Matrix F2Matrix::transposed() const
{
    F2Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const uint64_t* r = row_words(i);
        for (std::size_t k = 0; k < wpr_; ++k) {
            uint64_t w = r[k];
            while (w) {
                std::size_t j = k * 64 + std::size_t(std::countr_zero(w));
                t.set(j, i, true);
                w &= w - 1;
            }
        }
    }
    return t;
}

F2Vector F2Matrix::apply_row(const F2Vector& x) const
{
    if (x.size() != rows_)
        throw std::invalid_argument("apply_row: size mismatch");
    F2Vector y(cols_);
    for (std::size_t i : x.support()) {
        const uint64_t* r = row_words(i);
        for (std::size_t k = 0; k < wpr_; ++k)
            y.words()[k] ^= r[k];
    }
    return y;
}

F2Vector F2Matrix::apply_col(const F2Vector& v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("apply_col: size mismatch");
    F2Vector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        uint64_t acc = 0;
        const uint64_t* r = row_words(i);
        for (std::size_t k = 0; k < wpr_; ++k)
            acc ^= r[k] & v.words()[k];
        if (std::popcount(acc) & 1)
            y.set(i, true);
    }
    return y;
}

F2Matrix F2Matrix::operator*(const F2Matrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("matrix product: shape mismatch");
    F2Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        uint64_t* dst = out.row_words(i);
        const uint64_t* r = row_words(i);
        for (std::size_t k = 0; k < wpr_; ++k) {
            uint64_t w = r[k];
            while (w) {
                std::size_t j = k * 64 + std::size_t(std::countr_zero(w));
                const uint64_t* src = rhs.row_words(j);
                for (std::size_t t = 0; t < rhs.wpr_; ++t)
                    dst[t] ^= src[t];
                w &= w - 1;
            }
        }
    }
    return out;
}

F2Matrix F2Matrix::operator+(const F2Matrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix sum: shape mismatch");
    F2Matrix out = *this;
    for (std::size_t k = 0; k < bits_.size(); ++k)
        out.bits_[k] ^= rhs.bits_[k];
    return out;
}

F2Matrix F2Matrix::vstack(const F2Matrix& top, const F2Matrix& bottom)
{
    if (top.cols_ != bottom.cols_)
        throw std::invalid_argument("vstack: column mismatch");
    F2Matrix out(top.rows_ + bottom.rows_, top.cols_);
    std::copy(top.bits_.begin(), top.bits_.end(), out.bits_.begin());
    std::copy(bottom.bits_.begin(), bottom.bits_.end(), out.bits_.begin() + top.bits_.size());
    return out;
}

std::string F2Matrix::str() const
{
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i)
        s += row(i).str() + "\n";
    return s;
}

RrefResult rref(const F2Matrix& m)
{
    RrefResult res;
    res.reduced = m;
    F2Matrix& a = res.reduced;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && !a.get(piv, c))
            ++piv;
        if (piv == m.rows())
            continue;
        a.swap_rows(r, piv);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && a.get(i, c))
                a.row_xor(i, r);
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

Subspace Subspace::zero(std::size_t ambient)
{
    Subspace s;
    s.ambient_dim = ambient;
    s.basis = F2Matrix(0, ambient);
    return s;
}

Subspace Subspace::from_rows(const F2Matrix& rows)
{
    RrefResult r = rref(rows);
    Subspace s;
    s.ambient_dim = rows.cols();
    s.basis = F2Matrix(r.rank, rows.cols());
    for (std::size_t i = 0; i < r.rank; ++i)
        s.basis.set_row(i, r.reduced.row(i));
    return s;
}

bool Subspace::contains(const F2Vector& v) const
{
    if (v.size() != ambient_dim)
        throw std::invalid_argument("contains: size mismatch");
    F2Vector w = v;
    for (std::size_t i = 0; i < basis.rows(); ++i) {
        std::ptrdiff_t p = basis.row(i).first_set();
        if (p >= 0 && w.get(std::size_t(p))) {
            F2Vector b = basis.row(i);
            w ^= b;
        }
    }
    return w.is_zero();
}

Subspace subspace_sum(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim != b.ambient_dim)
        throw std::invalid_argument("subspace_sum: ambient mismatch");
    return Subspace::from_rows(F2Matrix::vstack(a.basis, b.basis));
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim != b.ambient_dim)
        throw std::invalid_argument("subspace_intersection: ambient mismatch");
    /* Zassenhaus: reduce [A | A; B | 0]; rows with zero left half carry the
     * intersection in the right half. */
    std::size_t n = a.ambient_dim;
    std::size_t ra = a.basis.rows(), rb = b.basis.rows();
    F2Matrix block(ra + rb, 2 * n);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (a.basis.get(i, j)) {
                block.set(i, j, true);
                block.set(i, n + j, true);
            }
    for (std::size_t i = 0; i < rb; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (b.basis.get(i, j))
                block.set(ra + i, j, true);
    RrefResult r = rref(block);
    F2Matrix rows(0, n);
    std::vector<F2Vector> keep;
    for (std::size_t i = 0; i < block.rows(); ++i) {
        bool left_zero = true;
        for (std::size_t j = 0; j < n && left_zero; ++j)
            if (r.reduced.get(i, j))
                left_zero = false;
        if (!left_zero)
            continue;
        F2Vector v(n);
        for (std::size_t j = 0; j < n; ++j)
            if (r.reduced.get(i, n + j))
                v.set(j, true);
        if (!v.is_zero())
            keep.push_back(v);
    }
    F2Matrix km(keep.size(), n);
    for (std::size_t i = 0; i < keep.size(); ++i)
        km.set_row(i, keep[i]);
    return Subspace::from_rows(km);
}

Subspace kernel_basis(const F2Matrix& m)
{
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : r.pivots)
        is_pivot[p] = true;

    Subspace ker;
    ker.ambient_dim = m.cols();
    std::size_t kdim = m.cols() - r.rank;
    F2Matrix rows(kdim, m.cols());
    std::size_t row = 0;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        rows.set(row, f, true);
        for (std::size_t i = 0; i < r.rank; ++i)
            if (r.reduced.get(i, f))
                rows.set(row, r.pivots[i], true);
        ++row;
    }
    /* re-reduce so the basis satisfies the RREF invariant */
    return Subspace::from_rows(rows);
}

std::optional<F2Vector> solve(const F2Matrix& m, const F2Vector& b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve: length(b) must equal rows");
    /* eliminate the augmented matrix [m | b] */
    F2Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t k = 0; k < m.words_per_row(); ++k) {
            uint64_t w = m.row_words(i)[k];
            while (w) {
                aug.set(i, k * 64 + std::size_t(std::countr_zero(w)), true);
                w &= w - 1;
            }
        }
        if (b.get(i))
            aug.set(i, m.cols(), true);
    }
    RrefResult r = rref(aug);
    F2Vector x(m.cols());
    for (std::size_t i = 0; i < r.rank; ++i) {
        std::size_t p = r.pivots[i];
        if (p == m.cols())
            return std::nullopt; /* pivot in the augmented column: inconsistent */
        if (r.reduced.get(i, m.cols()))
            x.set(p, true);
    }
    return x;
}

std::optional<F2Vector> Eliminator::add(F2Vector row)
{
    if (row.size() != width_)
        throw std::invalid_argument("Eliminator::add: width mismatch");
    F2Vector combo(n_added_ + 1);
    combo.set(n_added_, true);
    for (const Entry& e : entries_) {
        if (row.get(e.pivot)) {
            row ^= e.row;
            combo.resize(std::max(combo.size(), e.combo.size()));
            F2Vector ec = e.combo;
            ec.resize(combo.size());
            combo ^= ec;
        }
    }
    ++n_added_;
    if (row.is_zero()) {
        combo.resize(n_added_);
        combo.set(n_added_ - 1, false); /* report the dependency on earlier rows only */
        return combo;
    }
    Entry e;
    e.pivot = std::size_t(row.first_set());
    e.row = std::move(row);
    e.combo = std::move(combo);
    entries_.push_back(std::move(e));
    return std::nullopt;
}

std::optional<F2Vector> Eliminator::express(const F2Vector& v) const
{
    if (v.size() != width_)
        throw std::invalid_argument("Eliminator::express: width mismatch");
    F2Vector w = v;
    F2Vector combo(n_added_);
    for (const Entry& e : entries_) {
        if (w.get(e.pivot)) {
            w ^= e.row;
            F2Vector ec = e.combo;
            ec.resize(n_added_);
            combo ^= ec;
        }
    }
    if (!w.is_zero())
        return std::nullopt;
    return combo;
}

bool Eliminator::in_span(const F2Vector& v) const
{
    F2Vector w = v;
    for (const Entry& e : entries_)
        if (w.get(e.pivot))
            w ^= e.row;
    return w.is_zero();
}

}  // namespace f2ext
