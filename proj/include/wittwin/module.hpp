#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "wittwin/matrix.hpp"

namespace wittwin {

/// A map of finite torsion W(F_q)-modules  (+)_j W/p^{a_j} -> (+)_i W/p^{b_i},
/// given by a matrix over W/p^E at a working precision E >= max(a)+max(b).
/// Row i of the matrix only matters mod p^{b_i}; well-definedness is
/// val(m_ij) >= max(0, b_i - a_j).
struct ModuleMap {
    std::vector<std::uint32_t> src_div;
    std::vector<std::uint32_t> dst_div;
    PadicMatrix m;  // dst x src
};

inline std::uint32_t max_div(const std::vector<std::uint32_t>& d) {
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}
inline std::uint64_t length_of(const std::vector<std::uint32_t>& d) {
    return std::accumulate(d.begin(), d.end(), std::uint64_t{0});
}

/// lift/truncate all entries to the ring with precision E (zero-digit section)
inline PadicMatrix with_precision(const PadicMatrix& m, const PadicRingPtr& target) {
    return m.map([&](const PadicElem& x) {
        if (x.ring()->precision() >= target->precision())
            return x.truncate(target->precision());
        return x.lift_zero(target->precision());
    });
}

inline bool module_map_well_defined(const ModuleMap& f) {
    for (std::size_t i = 0; i < f.dst_div.size(); ++i)
        for (std::size_t j = 0; j < f.src_div.size(); ++j) {
            if (f.dst_div[i] <= f.src_div[j]) continue;
            if (f.m.at(i, j).val() < f.dst_div[i] - f.src_div[j]) return false;
        }
    return true;
}

/// equality of maps into (+) W/p^{b_i}: row i compared mod p^{b_i}
inline bool module_maps_equal(const PadicMatrix& x, const PadicMatrix& y,
                              const std::vector<std::uint32_t>& dst_div) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if ((x.at(i, j) - y.at(i, j)).val() < dst_div[i]) return false;
    return true;
}

namespace detail {

inline PadicRingPtr working_ring(const ModuleMap& f, std::uint32_t slack = 2) {
    std::uint32_t need = max_div(f.src_div) + max_div(f.dst_div) + slack;
    PadicRingPtr cur;
    if (f.m.rows() && f.m.cols())
        cur = f.m.at(0, 0).ring();
    else
        cur = f.m.ring_zero().ring();
    return cur->with_precision(std::max(need, std::uint32_t(1)));
}

inline PadicMatrix diag_p_powers(const PadicRingPtr& r, const std::vector<std::uint32_t>& d) {
    PadicMatrix m(d.size(), d.size(), PadicElem::zero(r));
    for (std::size_t i = 0; i < d.size(); ++i)
        m.at(i, i) = PadicElem::from_int(r, static_cast<std::int64_t>(pow_u64(r->p(), d[i])));
    return m;
}

inline PadicMatrix hcat(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.rows() != b.rows()) fail("dimension-mismatch", "hcat");
    PadicMatrix r(a.rows(), a.cols() + b.cols(), a.cols() ? a.ring_zero() : b.ring_zero());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
}

}  // namespace detail

/// invariant factors of the cokernel, sorted descending; exact: every pivot
/// valuation is certified below the working precision by construction
inline std::vector<std::uint32_t> module_coker_divisors(const ModuleMap& f) {
    if (f.dst_div.empty()) return {};
    auto ring = detail::working_ring(f);
    PadicMatrix M = with_precision(f.m, ring);
    PadicMatrix A = detail::hcat(M, detail::diag_p_powers(ring, f.dst_div));
    auto s = padic_snf(A, ring);
    std::vector<std::uint32_t> out;
    for (auto v : s.pivots)
        if (v > 0) out.push_back(std::min(v, max_div(f.dst_div)));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// the adjoint map between Pontryagin duals; entry (j,i) = m_ij * p^{a_j - b_i}
inline ModuleMap module_adjoint(const ModuleMap& f) {
    auto ring = detail::working_ring(f);
    ModuleMap g;
    g.src_div = f.dst_div;
    g.dst_div = f.src_div;
    g.m = PadicMatrix(f.src_div.size(), f.dst_div.size(), PadicElem::zero(ring));
    PadicMatrix M = with_precision(f.m, ring);
    for (std::size_t i = 0; i < f.dst_div.size(); ++i)
        for (std::size_t j = 0; j < f.src_div.size(); ++j) {
            PadicElem x = M.at(i, j);
            if (f.src_div[j] >= f.dst_div[i]) {
                std::uint64_t sc = pow_u64(ring->p(), f.src_div[j] - f.dst_div[i]);
                g.m.at(j, i) = x * PadicElem::from_int(ring, static_cast<std::int64_t>(sc));
            } else {
                g.m.at(j, i) = divide_exact_keep(x, f.dst_div[i] - f.src_div[j]);
            }
        }
    return g;
}

/// invariant factors of the kernel (ker f is dual to coker of the adjoint)
inline std::vector<std::uint32_t> module_ker_divisors(const ModuleMap& f) {
    if (!module_map_well_defined(f)) fail("bad-argument", "module map not well-defined");
    return module_coker_divisors(module_adjoint(f));
}

inline bool module_injective(const ModuleMap& f) { return module_ker_divisors(f).empty(); }
inline bool module_surjective(const ModuleMap& f) { return module_coker_divisors(f).empty(); }
inline bool module_bijective(const ModuleMap& f) {
    return length_of(f.src_div) == length_of(f.dst_div) && module_injective(f);
}

/// generators (columns, ambient coordinates) of ker f; not a minimal basis
inline PadicMatrix module_kernel_gens(const ModuleMap& f) {
    auto ring = detail::working_ring(f);
    const std::size_t s = f.src_div.size(), t = f.dst_div.size();
    PadicMatrix M = with_precision(f.m, ring);
    PadicMatrix A = detail::hcat(M, detail::diag_p_powers(ring, f.dst_div));
    auto sn = padic_snf(A, ring);
    const std::uint32_t E = ring->precision();
    PadicMatrix gens(s, s + t + s, PadicElem::zero(ring));
    std::size_t c = 0;
    // V columns scaled to kill the diagonal
    for (std::size_t l = 0; l < s + t; ++l) {
        std::uint32_t scale = 0;
        if (l < t) scale = E - std::min(sn.pivots[l], E);
        PadicElem sc =
            PadicElem::from_int(ring, static_cast<std::int64_t>(pow_u64(ring->p(), scale)));
        for (std::size_t i = 0; i < s; ++i) gens.at(i, c) = sn.v.at(i, l) * sc;
        ++c;
    }
    // source relations
    for (std::size_t j = 0; j < s; ++j) {
        gens.at(j, c) = PadicElem::from_int(
            ring, static_cast<std::int64_t>(pow_u64(ring->p(), f.src_div[j])));
        ++c;
    }
    return gens;
}

/// one solution x of f(x) = c (c in ambient coordinates of the target),
/// or nullopt
inline std::optional<PadicMatrix> module_solve(const ModuleMap& f, const PadicMatrix& c) {
    auto ring = detail::working_ring(f);
    const std::size_t s = f.src_div.size(), t = f.dst_div.size();
    if (c.rows() != t || c.cols() != 1) fail("dimension-mismatch", "module_solve rhs");
    PadicMatrix M = with_precision(f.m, ring);
    PadicMatrix A = detail::hcat(M, detail::diag_p_powers(ring, f.dst_div));
    auto sn = padic_snf(A, ring);
    PadicMatrix uc = sn.u * with_precision(c, ring);
    PadicMatrix y(s + t, 1, PadicElem::zero(ring));
    for (std::size_t l = 0; l < t; ++l) {
        std::uint32_t v = sn.pivots[l];
        if (uc.at(l, 0).val() < v) return std::nullopt;
        y.at(l, 0) = divide_exact_keep(uc.at(l, 0), v);
    }
    PadicMatrix z = sn.v * y;
    PadicMatrix x(s, 1, PadicElem::zero(ring));
    for (std::size_t j = 0; j < s; ++j) x.at(j, 0) = z.at(j, 0);
    return x;
}

/// matrix of the inverse module map; requires bijectivity (unique solutions)
inline PadicMatrix module_inverse_map(const ModuleMap& f) {
    if (!module_bijective(f)) fail("not-invertible", "module map is not bijective");
    auto ring = detail::working_ring(f);
    const std::size_t n = f.dst_div.size();
    PadicMatrix inv(f.src_div.size(), n, PadicElem::zero(ring));
    for (std::size_t i = 0; i < n; ++i) {
        PadicMatrix e(n, 1, PadicElem::zero(ring));
        e.at(i, 0) = PadicElem::one(ring);
        auto x = module_solve(f, e);
        if (!x) fail("not-invertible", "no preimage for basis vector");
        for (std::size_t j = 0; j < f.src_div.size(); ++j) inv.at(j, i) = x->at(j, 0);
    }
    return inv;
}

/// Basis of the submodule of (+)_i W/p^{d_i} generated by the columns of G:
/// columns b_l with orders p^{w_l} such that the submodule is the direct sum
/// of the W b_l. Orders come out descending.
struct SubmoduleBasis {
    PadicMatrix basis;                   // ambient x rank
    std::vector<std::uint32_t> orders;   // descending
};

inline SubmoduleBasis submodule_basis(const PadicMatrix& G,
                                      const std::vector<std::uint32_t>& d) {
    const std::size_t r = d.size();
    if (G.rows() != r) fail("dimension-mismatch", "submodule_basis ambient rank");
    std::uint32_t need = 2 * max_div(d) + 2;
    PadicRingPtr ring =
        (G.rows() && G.cols() ? G.at(0, 0).ring() : G.ring_zero().ring())->with_precision(need);
    PadicMatrix Gw = with_precision(G, ring);
    PadicMatrix A = detail::hcat(Gw, detail::diag_p_powers(ring, d));
    auto s = padic_snf(A, ring);
    // lattice basis B = U^{-1} diag(p^{v_l}); relations in B-coordinates:
    // X = diag(p^{-v}) U diag(p^{d_i})
    PadicMatrix uinv = padic_inverse(s.u);
    PadicMatrix B(r, r, PadicElem::zero(ring));
    for (std::size_t l = 0; l < r; ++l) {
        PadicElem sc = PadicElem::from_int(
            ring, static_cast<std::int64_t>(pow_u64(ring->p(), s.pivots[l])));
        for (std::size_t i = 0; i < r; ++i) B.at(i, l) = uinv.at(i, l) * sc;
    }
    PadicMatrix X(r, r, PadicElem::zero(ring));
    for (std::size_t l = 0; l < r; ++l)
        for (std::size_t i = 0; i < r; ++i) {
            PadicElem x = s.u.at(l, i) * PadicElem::from_int(
                ring, static_cast<std::int64_t>(pow_u64(ring->p(), d[i])));
            X.at(l, i) = divide_exact_keep(x, s.pivots[l]);
        }
    auto s2 = padic_snf(X, ring);
    PadicMatrix C = B * padic_inverse(s2.u);
    SubmoduleBasis out;
    std::vector<std::size_t> keep;
    for (std::size_t l = 0; l < r; ++l)
        if (s2.pivots[l] > 0) keep.push_back(l);
    // SNF gives ascending pivot valuations; expose descending
    std::reverse(keep.begin(), keep.end());
    out.basis = PadicMatrix(r, keep.size(), PadicElem::zero(ring));
    for (std::size_t t2 = 0; t2 < keep.size(); ++t2) {
        out.orders.push_back(std::min(s2.pivots[keep[t2]], max_div(d)));
        for (std::size_t i = 0; i < r; ++i) out.basis.at(i, t2) = C.at(i, keep[t2]);
    }
    return out;
}

}  // namespace wittwin
