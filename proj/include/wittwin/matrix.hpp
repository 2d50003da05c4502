#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wittwin/common.hpp"
#include "wittwin/fq.hpp"
#include "wittwin/padic.hpp"

namespace wittwin {

/// Dense matrix over FqElem or PadicElem. Dimensions may be zero; the scalar
/// ring is carried separately so empty matrices stay well-typed.
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    /// fill must belong to the scalar ring; it also supplies the ring zero
    /// so that empty matrices keep well-typed arithmetic
    Matrix(std::size_t r, std::size_t c, const T& fill)
        : rows_(r), cols_(c), zero_(fill - fill), a_(r * c, fill) {}

    static Matrix zero(std::size_t r, std::size_t c, const T& z) { return Matrix(r, c, z - z); }
    static Matrix identity(std::size_t n, const T& zero, const T& one) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const T& ring_zero() const { return zero_; }

    T& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) fail("dimension-mismatch", "matrix product");
        Matrix r(rows_, o.cols_, zero_possibly(o));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& x = at(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + x * o.at(k, j);
            }
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) fail("dimension-mismatch", "matrix sum");
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] + o.a_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) fail("dimension-mismatch", "matrix difference");
        Matrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] - o.a_[i];
        return r;
    }
    Matrix scaled(const T& s) const {
        Matrix r = *this;
        for (auto& x : r.a_) x = x * s;
        return r;
    }
    Matrix transpose() const {
        Matrix r(cols_, rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    template <class F>
    Matrix map(F&& fn) const {
        Matrix r = *this;
        for (auto& x : r.a_) x = fn(x);
        return r;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
    }

private:
    T zero_possibly(const Matrix& o) const {
        // prefer whichever operand actually carries a ring element
        if (rows_ * cols_ > 0 || zero_valid()) return zero_;
        return o.zero_;
    }
    bool zero_valid() const { return a_.size() > 0 || rows_ + cols_ > 0; }

    std::size_t rows_, cols_;
    T zero_;
    std::vector<T> a_;
};

using FqMatrix = Matrix<FqElem>;
using PadicMatrix = Matrix<PadicElem>;

inline PadicMatrix padic_identity(const PadicRingPtr& r, std::size_t n) {
    return PadicMatrix::identity(n, PadicElem::zero(r), PadicElem::one(r));
}
inline FqMatrix fq_identity(const FqFieldPtr& k, std::size_t n) {
    return FqMatrix::identity(n, FqElem::zero(k), FqElem::one(k));
}

inline PadicMatrix frobenius_pow(const PadicMatrix& m, std::int32_t s) {
    return m.map([s](const PadicElem& x) { return x.frobenius_pow(s); });
}
inline FqMatrix frobenius_pow(const FqMatrix& m, std::int32_t s) {
    return m.map([s](const FqElem& x) {
        FqElem r = x;
        std::int32_t f = static_cast<std::int32_t>(x.field()->degree());
        std::int32_t k = ((s % f) + f) % f;
        for (std::int32_t i = 0; i < k; ++i) r = r.frobenius();
        return r;
    });
}

/// Inverse over W/p^N; requires unit determinant ("not-invertible" otherwise).
inline PadicMatrix padic_inverse(const PadicMatrix& m) {
    if (m.rows() != m.cols()) fail("dimension-mismatch", "inverse of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return m;
    const PadicRingPtr r = m.at(0, 0).ring();
    PadicMatrix a = m;
    PadicMatrix inv = padic_identity(r, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && !a.at(piv, col).is_unit()) ++piv;
        if (piv == n) fail("not-invertible", "no unit pivot");
        a.swap_rows(piv, col);
        inv.swap_rows(piv, col);
        PadicElem ip = a.at(col, col).inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) = a.at(col, j) * ip;
            inv.at(col, j) = inv.at(col, j) * ip;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a.at(row, col).is_zero()) continue;
            PadicElem fct = a.at(row, col);
            for (std::size_t j = 0; j < n; ++j) {
                a.at(row, j) = a.at(row, j) - fct * a.at(col, j);
                inv.at(row, j) = inv.at(row, j) - fct * inv.at(col, j);
            }
        }
    }
    return inv;
}

inline PadicElem padic_det(const PadicMatrix& m);

/// Smith normal form over the truncation W(F_q)/p^N of a discrete valuation
/// ring. Pivots take the entry of minimal valuation, ties broken in row-major
/// order, so the output is deterministic. U m V = D with U, V invertible.
struct PadicSNF {
    PadicMatrix u, d, v;
    std::vector<std::uint32_t> pivots;  // valuations of the diagonal, length min(r,c)
};

inline PadicSNF padic_snf(const PadicMatrix& m, const PadicRingPtr& ring) {
    PadicSNF s;
    const std::size_t r = m.rows(), c = m.cols();
    s.u = padic_identity(ring, r);
    s.v = padic_identity(ring, c);
    s.d = m;
    const std::uint32_t N = ring->precision();
    for (std::size_t k = 0; k < std::min(r, c); ++k) {
        // find min-valuation entry in the remaining block
        std::uint32_t best = N + 1;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < r; ++i)
            for (std::size_t j = k; j < c; ++j) {
                std::uint32_t v = s.d.at(i, j).val();
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best > N) best = N;
        if (best == N) {
            // remaining block vanishes mod p^N
            s.pivots.resize(std::min(r, c), N);
            break;
        }
        s.pivots.push_back(best);
        s.d.swap_rows(k, bi);
        s.u.swap_rows(k, bi);
        s.d.swap_cols(k, bj);
        s.v.swap_cols(k, bj);
        // normalize pivot to exactly p^best: divide row by the unit part
        PadicElem unit = divide_exact_keep(s.d.at(k, k), best);
        PadicElem uinv = unit.inverse();
        for (std::size_t j = 0; j < c; ++j) s.d.at(k, j) = s.d.at(k, j) * uinv;
        for (std::size_t j = 0; j < r; ++j) s.u.at(k, j) = s.u.at(k, j) * uinv;
        // clear column and row; quotients are exact because pivot has min val
        for (std::size_t i = k + 1; i < r; ++i) {
            if (s.d.at(i, k).is_zero()) continue;
            PadicElem q = divide_exact_keep(s.d.at(i, k), best);
            for (std::size_t j = 0; j < c; ++j) s.d.at(i, j) = s.d.at(i, j) - q * s.d.at(k, j);
            for (std::size_t j = 0; j < r; ++j) s.u.at(i, j) = s.u.at(i, j) - q * s.u.at(k, j);
        }
        for (std::size_t j = k + 1; j < c; ++j) {
            if (s.d.at(k, j).is_zero()) continue;
            PadicElem q = divide_exact_keep(s.d.at(k, j), best);
            for (std::size_t i = 0; i < r; ++i) s.d.at(i, j) = s.d.at(i, j) - s.d.at(i, k) * q;
            for (std::size_t i = 0; i < c; ++i) s.v.at(i, j) = s.v.at(i, j) - s.v.at(i, k) * q;
        }
    }
    return s;
}

inline PadicElem padic_det(const PadicMatrix& m) {
    if (m.rows() != m.cols()) fail("dimension-mismatch", "determinant of non-square matrix");
    if (m.rows() == 0) fail("bad-argument", "determinant of empty matrix needs ring context");
    const PadicRingPtr r = m.at(0, 0).ring();
    // cofactor expansion is fine at the sizes this library works with
    const std::size_t n = m.rows();
    if (n == 1) return m.at(0, 0);
    PadicElem acc = PadicElem::zero(r);
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        PadicMatrix sub(n - 1, n - 1, PadicElem::zero(r));
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                sub.at(i - 1, cc++) = m.at(i, k);
            }
        }
        PadicElem term = m.at(0, j) * padic_det(sub);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// F_q linear algebra
// ---------------------------------------------------------------------------

/// reduced row echelon form; returns pivot column indices
inline std::vector<std::size_t> fq_rref(FqMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m.at(piv, col).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        m.swap_rows(piv, row);
        FqElem inv = m.at(row, col).inverse();
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            FqElem f = m.at(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t fq_rank(const FqMatrix& m) {
    FqMatrix c = m;
    return fq_rref(c).size();
}

/// basis of the right kernel {x : m x = 0}, columns of the returned matrix
inline FqMatrix fq_kernel(const FqMatrix& m, const FqFieldPtr& k) {
    FqMatrix r = m;
    auto pivots = fq_rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FqMatrix ker(m.cols(), free_cols.size(), FqElem::zero(k));
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        ker.at(free_cols[t], t) = FqElem::one(k);
        for (std::size_t pi = 0; pi < pivots.size(); ++pi)
            ker.at(pivots[pi], t) = -r.at(pi, free_cols[t]);
    }
    return ker;
}

/// solve m x = b; returns one solution if any
inline std::optional<FqMatrix> fq_solve(const FqMatrix& m, const FqMatrix& b,
                                        const FqFieldPtr& k) {
    if (b.cols() != 1 || b.rows() != m.rows()) fail("dimension-mismatch", "fq_solve");
    FqMatrix aug(m.rows(), m.cols() + 1, FqElem::zero(k));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b.at(i, 0);
    }
    auto pivots = fq_rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    FqMatrix x(m.cols(), 1, FqElem::zero(k));
    for (std::size_t pi = 0; pi < pivots.size(); ++pi) x.at(pivots[pi], 0) = aug.at(pi, m.cols());
    return x;
}

}  // namespace wittwin
