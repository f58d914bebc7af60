#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace f2ext {

/* Bit-packed vector over F2. Coordinate i lives in bit (i % 64) of word (i / 64),
 * least significant bit = coordinate 0. */
class F2Vector {
public:
    F2Vector() = default;
    explicit F2Vector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static F2Vector unit(std::size_t n, std::size_t i)
    {
        F2Vector v(n);
        v.set(i, true);
        return v;
    }

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool b)
    {
        if (b)
            w_[i >> 6] |= uint64_t(1) << (i & 63);
        else
            w_[i >> 6] &= ~(uint64_t(1) << (i & 63));
    }

    void flip(std::size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    F2Vector& operator^=(const F2Vector& o)
    {
        for (std::size_t k = 0; k < w_.size() && k < o.w_.size(); ++k)
            w_[k] ^= o.w_[k];
        return *this;
    }

    bool is_zero() const
    {
        for (uint64_t w : w_)
            if (w)
                return false;
        return true;
    }

    /* index of the lowest set bit, -1 if zero */
    std::ptrdiff_t first_set() const;

    std::size_t popcount() const;

    std::vector<std::size_t> support() const;

    /* grow, preserving low coordinates */
    void resize(std::size_t n)
    {
        n_ = n;
        w_.resize((n + 63) / 64, 0);
    }

    bool operator==(const F2Vector& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const F2Vector& o) const { return !(*this == o); }

    const std::vector<uint64_t>& words() const { return w_; }
    std::vector<uint64_t>& words() { return w_; }

    std::string str() const;

private:
    std::size_t n_ = 0;
    std::vector<uint64_t> w_;
};

/* Dense matrix over F2, bit-packed row-major; within a row, bit layout matches
 * F2Vector (column 0 = least significant bit of the first word).  Bits beyond
 * `cols` in the trailing word of each row are kept zero. */
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * wpr_, 0)
    {
    }

    static F2Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t i, std::size_t j) const
    {
        return (bits_[i * wpr_ + (j >> 6)] >> (j & 63)) & 1u;
    }
    void set(std::size_t i, std::size_t j, bool b)
    {
        if (b)
            bits_[i * wpr_ + (j >> 6)] |= uint64_t(1) << (j & 63);
        else
            bits_[i * wpr_ + (j >> 6)] &= ~(uint64_t(1) << (j & 63));
    }
    void flip(std::size_t i, std::size_t j) { bits_[i * wpr_ + (j >> 6)] ^= uint64_t(1) << (j & 63); }

    const uint64_t* row_words(std::size_t i) const { return bits_.data() + i * wpr_; }
    uint64_t* row_words(std::size_t i) { return bits_.data() + i * wpr_; }

    F2Vector row(std::size_t i) const;
    void set_row(std::size_t i, const F2Vector& v);

    void row_xor(std::size_t dst, std::size_t src)
    {
        uint64_t* d = row_words(dst);
        const uint64_t* s = row_words(src);
        for (std::size_t k = 0; k < wpr_; ++k)
            d[k] ^= s[k];
    }

    void swap_rows(std::size_t a, std::size_t b);

    bool row_is_zero(std::size_t i) const;

    bool is_zero() const;

    F2Matrix transposed() const;

    /* y = x * this  (x indexed by rows, y by columns) */
    F2Vector apply_row(const F2Vector& x) const;
    /* y = this * v (v indexed by columns, y by rows) */
    F2Vector apply_col(const F2Vector& v) const;

    /* row-convention composition: (A*B) applied to x equals B applied to (A applied to x) */
    F2Matrix operator*(const F2Matrix& rhs) const;
    F2Matrix operator+(const F2Matrix& rhs) const;

    bool operator==(const F2Matrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }
    bool operator!=(const F2Matrix& o) const { return !(*this == o); }

    static F2Matrix vstack(const F2Matrix& top, const F2Matrix& bottom);

    std::string str() const;

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> bits_;
};

struct RrefResult {
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    F2Matrix reduced;
};

/* Reduced row echelon form over F2; the row space is preserved. */
RrefResult rref(const F2Matrix& m);

/* A linear subspace of F2^ambient_dim, stored as an RREF basis (rows linearly
 * independent, strictly increasing pivots, each pivot column cleared elsewhere). */
struct Subspace {
    std::size_t ambient_dim = 0;
    F2Matrix basis;  // RREF, basis.rows() == dim

    static Subspace zero(std::size_t ambient);
    static Subspace from_rows(const F2Matrix& rows);

    std::size_t dim() const { return basis.rows(); }
    bool contains(const F2Vector& v) const;
    bool operator==(const Subspace& o) const
    {
        return ambient_dim == o.ambient_dim && basis == o.basis;
    }
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);

/* Right kernel: all v with m * v = 0. */
Subspace kernel_basis(const F2Matrix& m);

/* One solution x of m * x = b, or nullopt when inconsistent. */
std::optional<F2Vector> solve(const F2Matrix& m, const F2Vector& b);

/* C(a, b) mod 2 via the digit rule: odd iff the binary digits of b are a subset
 * of those of a. */
inline bool binom_mod2(uint64_t a, uint64_t b)
{
    if (b > a)
        return false;
    return (b & (a - b)) == 0;
}

/* Incremental row reduction with combination tracking.  Rows are added one at a
 * time; a row lying in the span of the earlier ones is reported together with
 * the combination of previously added rows producing it.  Combination vectors
 * are indexed by insertion order. */
class Eliminator {
public:
    explicit Eliminator(std::size_t width) : width_(width) {}

    /* nullopt: row was independent and is now part of the span.
     * combination c: row == xor of added rows i with c.get(i). */
    std::optional<F2Vector> add(F2Vector row);

    /* express v over the added rows without adding it */
    std::optional<F2Vector> express(const F2Vector& v) const;

    bool in_span(const F2Vector& v) const;

    std::size_t rank() const { return entries_.size(); }
    std::size_t width() const { return width_; }
    std::size_t rows_added() const { return n_added_; }

    /* current reduced spanning rows (not in pivot order) */
    const F2Vector& reduced_row(std::size_t k) const { return entries_[k].row; }
    std::ptrdiff_t pivot_of(std::size_t k) const { return entries_[k].pivot; }

private:
    struct Entry {
        F2Vector row;
        F2Vector combo;
        std::size_t pivot;
    };
    std::size_t width_;
    std::size_t n_added_ = 0;
    std::vector<Entry> entries_;
};

}  // namespace f2ext
