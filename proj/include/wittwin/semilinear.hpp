#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wittwin/matrix.hpp"
#include "wittwin/module.hpp"

namespace wittwin {

/// A phi-semilinear map v -> M phi^s(v) between coordinate modules over F_q
/// or W(F_q)/p^N. s = 0 recovers ordinary linear maps.
template <class T>
struct SemilinearMap {
    Matrix<T> m;
    std::int32_t twist = 0;

    std::size_t src_dim() const { return m.cols(); }
    std::size_t dst_dim() const { return m.rows(); }
};

using FqSemilinear = SemilinearMap<FqElem>;
using PadicSemilinear = SemilinearMap<PadicElem>;

/// (M1,s1) o (M2,s2) = (M1 phi^{s1}(M2), s1+s2)
template <class T>
SemilinearMap<T> compose(const SemilinearMap<T>& t1, const SemilinearMap<T>& t2) {
    if (t1.src_dim() != t2.dst_dim()) fail("dimension-mismatch", "semilinear composition");
    return {t1.m * frobenius_pow(t2.m, t1.twist), t1.twist + t2.twist};
}

template <class T>
Matrix<T> apply(const SemilinearMap<T>& t, const Matrix<T>& v) {
    return t.m * frobenius_pow(v, t.twist);
}

inline FqElem identity_one(const FqMatrix& m) { return FqElem::one(m.ring_zero().field()); }
inline PadicElem identity_one(const PadicMatrix& m) {
    return PadicElem::one(m.ring_zero().ring());
}

/// m-fold self-composition of a square semilinear map
template <class T>
SemilinearMap<T> self_compose(const SemilinearMap<T>& t, std::uint32_t m) {
    if (t.src_dim() != t.dst_dim()) fail("dimension-mismatch", "iterate of non-square map");
    SemilinearMap<T> acc{
        Matrix<T>::identity(t.src_dim(), t.m.ring_zero(), identity_one(t.m)), 0};
    for (std::uint32_t i = 0; i < m; ++i) acc = compose(t, acc);
    return acc;
}

// ---------------------------------------------------------------------------
// restriction of scalars to F_p
// ---------------------------------------------------------------------------

/// the F_p matrix of a semilinear map after restriction of scalars F_q -> F_p
/// (dimension h*f); evaluation agrees with the semilinear map on all basis
/// vectors by construction, and the unit test asserts it
struct FpLinearization {
    FqFieldPtr field;
    std::size_t dim_rows = 0, dim_cols = 0;  // h*f each side
    std::vector<std::vector<std::uint32_t>> m;
};

inline FpLinearization linearize(const FqSemilinear& t, const FqFieldPtr& k) {
    const std::uint32_t f = k->degree();
    FpLinearization L;
    L.field = k;
    L.dim_rows = t.dst_dim() * f;
    L.dim_cols = t.src_dim() * f;
    L.m.assign(L.dim_rows, std::vector<std::uint32_t>(L.dim_cols, 0));
    for (std::size_t j = 0; j < t.src_dim(); ++j)
        for (std::uint32_t e = 0; e < f; ++e) {
            // basis vector y^e in coordinate j
            FqMatrix v(t.src_dim(), 1, FqElem::zero(k));
            std::vector<std::uint32_t> c(f, 0);
            c[e] = 1;
            v.at(j, 0) = FqElem(k, c);
            FqMatrix w = apply(t, v);
            for (std::size_t i = 0; i < t.dst_dim(); ++i)
                for (std::uint32_t d = 0; d < f; ++d)
                    L.m[i * f + d][j * f + e] = w.at(i, 0).coeffs()[d];
        }
    return L;
}

// F_p Gaussian elimination on small dense matrices
namespace fpdetail {

struct FpMat {
    std::uint32_t p;
    std::size_t rows, cols;
    std::vector<std::vector<std::uint32_t>> a;
};

inline std::uint32_t fp_inv(std::uint32_t x, std::uint32_t p) {
    for (std::uint32_t t = 1; t < p; ++t)
        if (x * t % p == 1) return t;
    fail("not-invertible", "inverse mod p of 0");
}

inline std::vector<std::size_t> rref(FpMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t piv = row;
        while (piv < m.rows && m.a[piv][col] % m.p == 0) ++piv;
        if (piv == m.rows) continue;
        std::swap(m.a[piv], m.a[row]);
        std::uint32_t inv = fp_inv(m.a[row][col] % m.p, m.p);
        for (auto& x : m.a[row]) x = x * inv % m.p;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || m.a[i][col] % m.p == 0) continue;
            std::uint32_t f = m.a[i][col] % m.p;
            for (std::size_t jj = 0; jj < m.cols; ++jj)
                m.a[i][jj] = (m.a[i][jj] + (m.p - f) * m.a[row][jj]) % m.p;
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace fpdetail

/// F_p-basis of {v in F_{q^k}^h : T(v) = v} for a square twist-1 map T over
/// F_q; the basis vectors are columns over the extension field F_{q^k}
struct FixedPoints {
    FqFieldPtr ext;          // F_{q^k}
    std::vector<FqMatrix> basis;
};

namespace detail {

inline FqSemilinear base_change(const FqSemilinear& t, const FqEmbedding& emb) {
    FqMatrix m(t.m.rows(), t.m.cols(), FqElem::zero(emb.dst()));
    for (std::size_t i = 0; i < t.m.rows(); ++i)
        for (std::size_t j = 0; j < t.m.cols(); ++j) m.at(i, j) = emb.map(t.m.at(i, j));
    return {m, t.twist};
}

// kernel of (T - id) over F_{q^k} as F_p-space; optionally solve (T - id)v = b
inline std::pair<std::vector<FqMatrix>, std::optional<FqMatrix>> lang_solve(
    const FqSemilinear& tq, const FqFieldPtr& base, std::uint32_t k,
    const FqMatrix* rhs_base) {
    if (tq.src_dim() != tq.dst_dim()) fail("dimension-mismatch", "fixed points of non-square");
    if (tq.twist != 1) fail("bad-argument", "fixed points need twist 1");
    auto ext = FqField::make(base->p(), base->degree() * k);
    FqEmbedding emb(base, ext);
    FqSemilinear t = base_change(tq, emb);
    const std::uint32_t f = ext->degree();
    const std::size_t h = t.src_dim();
    auto L = linearize(t, ext);
    // A = L - I over F_p
    fpdetail::FpMat A{base->p(), h * f, h * f + 1, {}};
    A.a.assign(h * f, std::vector<std::uint32_t>(h * f + 1, 0));
    for (std::size_t i = 0; i < h * f; ++i)
        for (std::size_t j = 0; j < h * f; ++j) {
            std::uint32_t x = L.m[i][j];
            if (i == j) x = (x + base->p() - 1) % base->p();
            A.a[i][j] = x;
        }
    if (rhs_base) {
        for (std::size_t i = 0; i < h; ++i) {
            FqElem b = emb.map(rhs_base->at(i, 0));
            for (std::uint32_t d = 0; d < f; ++d) A.a[i * f + d][h * f] = b.coeffs()[d];
        }
    }
    auto pivots = fpdetail::rref(A);
    std::optional<FqMatrix> sol;
    if (rhs_base) {
        bool consistent = pivots.empty() || pivots.back() != h * f;
        if (consistent) {
            FqMatrix x(h, 1, FqElem::zero(ext));
            std::vector<std::uint32_t> flat(h * f, 0);
            for (std::size_t pi = 0; pi < pivots.size(); ++pi)
                flat[pivots[pi]] = A.a[pi][h * f];
            for (std::size_t i = 0; i < h; ++i) {
                std::vector<std::uint32_t> c(flat.begin() + i * f, flat.begin() + (i + 1) * f);
                x.at(i, 0) = FqElem(ext, c);
            }
            sol = x;
        }
    }
    // kernel basis of the homogeneous part
    std::vector<bool> is_piv(h * f, false);
    for (auto c : pivots)
        if (c < h * f) is_piv[c] = true;
    std::vector<FqMatrix> kernel;
    for (std::size_t free = 0; free < h * f; ++free) {
        if (is_piv[free]) continue;
        std::vector<std::uint32_t> flat(h * f, 0);
        flat[free] = 1;
        for (std::size_t pi = 0; pi < pivots.size(); ++pi)
            if (pivots[pi] < h * f)
                flat[pivots[pi]] = (base->p() - A.a[pi][free] % base->p()) % base->p();
        FqMatrix v(h, 1, FqElem::zero(ext));
        for (std::size_t i = 0; i < h; ++i) {
            std::vector<std::uint32_t> c(flat.begin() + i * f, flat.begin() + (i + 1) * f);
            v.at(i, 0) = FqElem(ext, c);
        }
        kernel.push_back(v);
    }
    return {kernel, sol};
}

}  // namespace detail

/// solve T(v) = v over F_{q^k}; returns an F_p-basis of the fixed space
inline FixedPoints fixed_points(const FqSemilinear& t, const FqFieldPtr& base,
                                std::uint32_t k) {
    auto [ker, _] = detail::lang_solve(t, base, k, nullptr);
    FixedPoints out;
    out.ext = FqField::make(base->p(), base->degree() * k);
    out.basis = std::move(ker);
    return out;
}

/// solve (T - id)(v) = b over F_{q^k}; throws "unsolvable-at-degree-k" if the
/// system is inconsistent at this extension degree (signals: extend k)
inline FqMatrix solve_inhomogeneous(const FqSemilinear& t, const FqMatrix& b,
                                    const FqFieldPtr& base, std::uint32_t k) {
    auto [_, sol] = detail::lang_solve(t, base, k, &b);
    if (!sol) fail("unsolvable-at-degree-k", "no solution at extension degree " + std::to_string(k));
    return *sol;
}

/// rank of F^m for m = dimension; equals rank(F^m) for all larger m
inline std::size_t stable_rank(const FqSemilinear& f) {
    if (f.src_dim() != f.dst_dim()) fail("dimension-mismatch", "stable rank of non-square");
    if (f.src_dim() == 0) return 0;
    auto it = self_compose(f, static_cast<std::uint32_t>(f.src_dim()));
    return fq_rank(it.m);
}

inline bool is_nilpotent_semilinear(const FqSemilinear& f) { return stable_rank(f) == 0; }

/// V = V_bij (+) V_nil with F restricting bijectively resp. nilpotently;
/// returns bases as matrix columns
struct FittingDecomposition {
    FqMatrix bijective;  // h x r
    FqMatrix nilpotent;  // h x (h-r)
};

inline FittingDecomposition fitting_decomposition(const FqSemilinear& f, const FqFieldPtr& k) {
    if (f.src_dim() != f.dst_dim()) fail("dimension-mismatch", "fitting of non-square");
    const std::size_t h = f.src_dim();
    auto it = self_compose(f, static_cast<std::uint32_t>(h));
    // image of the matrix of F^h is the bijective part
    FqMatrix img = it.m;
    auto pivots = fq_rref(img);
    FittingDecomposition out{FqMatrix(h, pivots.size(), FqElem::zero(k)),
                             FqMatrix(h, 0, FqElem::zero(k))};
    for (std::size_t t = 0; t < pivots.size(); ++t)
        for (std::size_t i = 0; i < h; ++i) out.bijective.at(i, t) = it.m.at(i, pivots[t]);
    // kernel of the semilinear iterate = phi^{-h f}(matrix kernel); the
    // composite F^h has twist h when f has twist 1
    FqMatrix ker = fq_kernel(it.m, k);
    out.nilpotent = frobenius_pow(ker, -static_cast<std::int32_t>(h) * f.twist);
    return out;
}

// ---------------------------------------------------------------------------
// kernel/cokernel sizes
// ---------------------------------------------------------------------------

/// over a field: (dim ker, dim coker) as F_q-dimensions
inline std::pair<std::size_t, std::size_t> coker_ker_dims(const FqSemilinear& t) {
    std::size_t r = fq_rank(t.m);
    return {t.src_dim() - r, t.dst_dim() - r};
}

/// over W(F_q)/p^N, viewing the matrix as a map of free W/p^N-modules:
/// (length ker, length coker) via Smith normal form at the matrix's own
/// precision; "precision-insufficient" when a pivot valuation reaches N,
/// since a residue that vanishes mod p^N cannot be told apart from a unit
/// multiple of p^{N+1}
inline std::pair<std::uint64_t, std::uint64_t> coker_ker_lengths(const PadicSemilinear& t) {
    const std::size_t rows = t.m.rows(), cols = t.m.cols();
    const PadicRingPtr ring =
        rows && cols ? t.m.at(0, 0).ring() : t.m.ring_zero().ring();
    const std::uint32_t N = ring->precision();
    auto s = padic_snf(t.m, ring);
    std::uint64_t ker = 0, coker = 0;
    const std::size_t r = std::min(rows, cols);
    for (std::size_t i = 0; i < r; ++i) {
        std::uint32_t v = s.pivots[i];
        if (v >= N) fail("precision-insufficient", "Smith pivot valuation reaches precision");
        ker += v;
        coker += v;
    }
    ker += (cols - r) * N;
    coker += (rows - r) * N;
    return {ker, coker};
}

}  // namespace wittwin
