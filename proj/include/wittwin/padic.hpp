#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "wittwin/common.hpp"
#include "wittwin/fq.hpp"

namespace wittwin {

class PadicRing;
using PadicRingPtr = std::shared_ptr<const PadicRing>;

/// W(F_q)/p^N, the truncated unramified extension of Z_p with residue field
/// F_q = F_p[y]/(g).
///
/// Internally elements are stored on the polynomial basis 1, y, ..., y^{f-1}
/// with coefficients in Z/p^N, where y is a root of the monic lift of g with
/// digits in {0..p-1}. For a perfect residue field this agrees with the
/// Teichmuller-digit picture of Witt vectors; digits are produced on demand
/// and are the canonical serialization (see to_digit_string).
///
/// Precision discipline: p^N < 2^31 so products of representatives never
/// overflow 64-bit intermediates. Operations never upgrade precision;
/// divide_exact_by_p moves to the ring with precision N-k.
class PadicRing : public std::enable_shared_from_this<PadicRing> {
public:
    static PadicRingPtr make(std::uint32_t p, std::uint32_t f, std::uint32_t prec);

    std::uint32_t p() const { return p_; }
    std::uint32_t degree() const { return f_; }
    std::uint32_t precision() const { return prec_; }
    std::uint64_t modulus() const { return pn_; }
    const FqFieldPtr& residue_field() const { return residue_; }

    bool same_spec(const PadicRing& o) const {
        return p_ == o.p_ && f_ == o.f_ && prec_ == o.prec_;
    }

    PadicRingPtr with_precision(std::uint32_t prec) const { return make(p_, f_, prec); }

    // frobenius matrix column j = coordinates of phi(y^j) = z^j
    const std::vector<std::vector<std::uint64_t>>& frob_matrix() const { return frob_; }
    const std::vector<std::vector<std::uint64_t>>& frob_inv_matrix() const { return frob_inv_; }
    const std::vector<std::uint64_t>& modulus_low() const { return mod_low_; }

private:
    PadicRing(std::uint32_t p, std::uint32_t f, std::uint32_t prec);
    void build_frobenius();

    std::uint32_t p_, f_, prec_;
    std::uint64_t pn_;
    FqFieldPtr residue_;
    std::vector<std::uint64_t> mod_low_;                // lift of defining poly, low coeffs
    std::vector<std::vector<std::uint64_t>> frob_;      // f x f over Z/p^N
    std::vector<std::vector<std::uint64_t>> frob_inv_;  // inverse of frob_
};

class PadicElem {
public:
    PadicElem() = default;
    PadicElem(PadicRingPtr r, std::vector<std::uint64_t> c) : r_(std::move(r)), c_(std::move(c)) {
        if (c_.size() != r_->degree()) fail("bad-argument", "coefficient vector length");
        for (auto& x : c_) x %= r_->modulus();
    }

    static PadicElem zero(const PadicRingPtr& r) {
        return PadicElem(r, std::vector<std::uint64_t>(r->degree(), 0));
    }
    static PadicElem one(const PadicRingPtr& r) {
        std::vector<std::uint64_t> c(r->degree(), 0);
        c[0] = 1;
        return PadicElem(r, c);
    }
    static PadicElem from_int(const PadicRingPtr& r, std::int64_t n) {
        std::int64_t m = n % static_cast<std::int64_t>(r->modulus());
        if (m < 0) m += static_cast<std::int64_t>(r->modulus());
        std::vector<std::uint64_t> c(r->degree(), 0);
        c[0] = static_cast<std::uint64_t>(m);
        return PadicElem(r, c);
    }
    static PadicElem gen(const PadicRingPtr& r) {
        std::vector<std::uint64_t> c(r->degree(), 0);
        if (r->degree() > 1) c[1] = 1;
        return PadicElem(r, c);
    }

    const PadicRingPtr& ring() const { return r_; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](std::uint64_t x) { return x == 0; });
    }
    bool operator==(const PadicElem& o) const {
        return r_->same_spec(*o.r_) && c_ == o.c_;
    }
    bool operator!=(const PadicElem& o) const { return !(*this == o); }

    PadicElem operator+(const PadicElem& o) const {
        check(o);
        std::vector<std::uint64_t> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = (c_[i] + o.c_[i]) % r_->modulus();
        return PadicElem(r_, std::move(r));
    }
    PadicElem operator-() const {
        std::vector<std::uint64_t> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            r[i] = (r_->modulus() - c_[i]) % r_->modulus();
        return PadicElem(r_, std::move(r));
    }
    PadicElem operator-(const PadicElem& o) const { return *this + (-o); }

    PadicElem operator*(const PadicElem& o) const {
        check(o);
        const std::uint64_t m = r_->modulus();
        const std::uint32_t f = r_->degree();
        std::vector<std::uint64_t> prod(2 * f - 1, 0);
        for (std::uint32_t i = 0; i < f; ++i) {
            if (!c_[i]) continue;
            for (std::uint32_t j = 0; j < f; ++j)
                prod[i + j] = (prod[i + j] + c_[i] * o.c_[j]) % m;
        }
        const auto& g = r_->modulus_low();
        for (std::size_t d = prod.size(); d-- > f;) {
            std::uint64_t top = prod[d];
            if (!top) continue;
            prod[d] = 0;
            for (std::uint32_t j = 0; j < f; ++j)
                prod[d - f + j] = (prod[d - f + j] + top * ((m - g[j]) % m)) % m;
        }
        prod.resize(f);
        return PadicElem(r_, std::move(prod));
    }

    PadicElem pow(std::uint64_t e) const {
        PadicElem r = one(r_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // min valuation over coordinates; precision for 0
    std::uint32_t val() const {
        std::uint32_t v = r_->precision();
        for (auto x : c_) v = std::min(v, val_u64(x, r_->p(), r_->precision()));
        return v;
    }
    bool is_unit() const { return val() == 0; }

    PadicElem inverse() const;

    /// the unique Frobenius lift (identity when f = 1)
    PadicElem frobenius() const { return apply_matrix(r_->frob_matrix()); }
    PadicElem frobenius_inverse() const { return apply_matrix(r_->frob_inv_matrix()); }
    PadicElem frobenius_pow(std::int32_t s) const {
        std::int32_t f = static_cast<std::int32_t>(r_->degree());
        std::int32_t k = ((s % f) + f) % f;
        PadicElem r = *this;
        for (std::int32_t i = 0; i < k; ++i) r = r.frobenius();
        return r;
    }

    FqElem residue() const {
        std::vector<std::uint32_t> c(r_->degree());
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = static_cast<std::uint32_t>(c_[i] % r_->p());
        return FqElem(r_->residue_field(), std::move(c));
    }

    std::vector<FqElem> teich_digits() const;
    std::string to_digit_string() const;
    static PadicElem from_digits(const PadicRingPtr& r, const std::vector<FqElem>& d);
    static PadicElem parse(const PadicRingPtr& r, const std::string& s);

    /// reduce to a lower-precision ring
    PadicElem truncate(std::uint32_t prec) const {
        if (prec > r_->precision()) fail("bad-argument", "truncate cannot raise precision");
        auto rr = r_->with_precision(prec);
        std::vector<std::uint64_t> c(c_);
        for (auto& x : c) x %= rr->modulus();
        return PadicElem(rr, std::move(c));
    }
    /// lift to a higher-precision ring via the zero-digit section
    PadicElem lift_zero(std::uint32_t prec) const {
        if (prec < r_->precision()) fail("bad-argument", "lift cannot lower precision");
        return PadicElem(r_->with_precision(prec), c_);
    }

private:
    void check(const PadicElem& o) const {
        if (!r_->same_spec(*o.r_)) fail("ring-mismatch", "W(F_q)/p^N spec differs");
    }
    PadicElem apply_matrix(const std::vector<std::vector<std::uint64_t>>& mat) const {
        const std::uint64_t m = r_->modulus();
        const std::uint32_t f = r_->degree();
        std::vector<std::uint64_t> out(f, 0);
        for (std::uint32_t j = 0; j < f; ++j) {
            if (!c_[j]) continue;
            for (std::uint32_t i = 0; i < f; ++i)
                out[i] = (out[i] + c_[j] * mat[i][j]) % m;
        }
        return PadicElem(r_, std::move(out));
    }

    PadicRingPtr r_;
    std::vector<std::uint64_t> c_;
};

/// F o V = V o F = p; V loses one digit of information but is exact as a map
/// of W/p^N
inline PadicElem verschiebung(const PadicElem& a) {
    return PadicElem::from_int(a.ring(), static_cast<std::int64_t>(a.ring()->p())) *
           a.frobenius_inverse();
}

inline PadicElem frobenius(const PadicElem& a) { return a.frobenius(); }

/// b with p^k b = a, at precision N-k; "not-divisible" if val(a) < k
inline PadicElem divide_exact_by_p(const PadicElem& a, std::uint32_t k) {
    const auto& r = a.ring();
    if (k > r->precision()) fail("precision-insufficient", "division exceeds precision");
    if (a.val() < k) fail("not-divisible", "p-adic valuation too small");
    const std::uint64_t pk = pow_u64(r->p(), k);
    auto rr = r->with_precision(r->precision() - k);
    std::vector<std::uint64_t> c(a.coeffs());
    for (auto& x : c) x = (x / pk) % rr->modulus();
    return PadicElem(rr, std::move(c));
}

/// same-ring division by p^k using the canonical zero-digit section
/// W/p^{N-k} -> W/p^N; used by the matrix kernels that work at a fixed
/// working precision
inline PadicElem divide_exact_keep(const PadicElem& a, std::uint32_t k) {
    if (k == 0) return a;
    if (a.val() < k) fail("not-divisible", "p-adic valuation too small");
    const std::uint64_t pk = pow_u64(a.ring()->p(), k);
    std::vector<std::uint64_t> c(a.coeffs());
    for (auto& x : c) x /= pk;
    return PadicElem(a.ring(), std::move(c));
}

/// delta(a) = (phi(a) - a^p)/p, exact at precision N-1
inline PadicElem delta(const PadicElem& a) {
    if (a.ring()->precision() < 2) fail("precision-exhausted", "delta needs precision >= 2");
    return divide_exact_by_p(a.frobenius() - a.pow(a.ring()->p()), 1);
}

/// the unique t with t^q = t and t = x mod p
inline PadicElem teichmuller(const FqElem& x, const PadicRingPtr& r) {
    if (!r->residue_field()->same_spec(*x.field())) fail("ring-mismatch", "residue field");
    std::vector<std::uint64_t> c(x.coeffs().begin(), x.coeffs().end());
    PadicElem t(r, std::move(c));
    for (std::uint32_t i = 0; i + 1 < r->precision(); ++i) t = t.pow(r->residue_field()->q());
    return t;
}

inline PadicElem PadicElem::inverse() const {
    if (!is_unit()) fail("not-invertible", "non-unit in W(F_q)/p^N");
    // Newton: x -> x(2 - a x), doubling precision each step
    FqElem r0 = residue().inverse();
    std::vector<std::uint64_t> c(r0.coeffs().begin(), r0.coeffs().end());
    PadicElem x(r_, std::move(c));
    PadicElem two = from_int(r_, 2);
    for (std::uint32_t k = 1; k < 2 * r_->precision(); k *= 2) x = x * (two - *this * x);
    return x;
}

inline std::vector<FqElem> PadicElem::teich_digits() const {
    std::vector<FqElem> d;
    PadicElem a = *this;
    for (std::uint32_t i = 0; i < r_->precision(); ++i) {
        d.push_back(a.residue());
        if (a.ring()->precision() == 1) break;
        a = divide_exact_by_p(a - teichmuller(d.back(), a.ring()), 1);
    }
    while (d.size() < r_->precision()) d.push_back(FqElem::zero(r_->residue_field()));
    return d;
}

inline PadicElem PadicElem::from_digits(const PadicRingPtr& r, const std::vector<FqElem>& d) {
    if (d.size() != r->precision()) fail("bad-argument", "digit count must equal precision");
    PadicElem acc = PadicElem::zero(r);
    PadicElem pk = PadicElem::one(r);
    PadicElem p = PadicElem::from_int(r, static_cast<std::int64_t>(r->p()));
    for (const auto& di : d) {
        acc = acc + pk * teichmuller(di, r);
        pk = pk * p;
    }
    return acc;
}

inline std::string PadicElem::to_digit_string() const {
    auto d = teich_digits();
    std::ostringstream os;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) os << ',';
        os << d[i].to_string();
    }
    return os.str();
}

inline PadicElem PadicElem::parse(const PadicRingPtr& r, const std::string& s) {
    std::vector<FqElem> d;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',') {
            d.push_back(FqElem::parse(r->residue_field(), cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return from_digits(r, d);
}

inline PadicRing::PadicRing(std::uint32_t p, std::uint32_t f, std::uint32_t prec)
    : p_(p), f_(f), prec_(prec) {
    if (prec < 1) fail("bad-argument", "precision must be >= 1");
    pn_ = 1;
    for (std::uint32_t i = 0; i < prec; ++i) {
        if (pn_ > (1ull << 31) / p) fail("bad-argument", "p^N exceeds 2^31");
        pn_ *= p;
    }
    residue_ = FqField::make(p, f);
    mod_low_.assign(residue_->modulus_low().begin(), residue_->modulus_low().end());
}

inline PadicRingPtr PadicRing::make(std::uint32_t p, std::uint32_t f, std::uint32_t prec) {
    auto r = PadicRingPtr(new PadicRing(p, f, prec));
    const_cast<PadicRing*>(r.get())->build_frobenius();
    return r;
}

inline void PadicRing::build_frobenius() {
    frob_.assign(f_, std::vector<std::uint64_t>(f_, 0));
    frob_inv_.assign(f_, std::vector<std::uint64_t>(f_, 0));
    auto self = shared_from_this();
    if (f_ == 1) {
        frob_[0][0] = 1;
        frob_inv_[0][0] = 1;
        return;
    }
    // Hensel-lift the root z of the defining polynomial with z = y^p mod p
    auto eval_poly = [&](const PadicElem& x) {
        PadicElem acc = PadicElem::one(self);  // leading coefficient
        for (std::uint32_t i = f_; i-- > 0;)
            acc = acc * x + PadicElem::from_int(self, static_cast<std::int64_t>(mod_low_[i]));
        return acc;
    };
    auto eval_deriv = [&](const PadicElem& x) {
        // derivative of x^f + sum g_i x^i
        PadicElem acc = PadicElem::from_int(self, static_cast<std::int64_t>(f_));
        for (std::uint32_t i = f_; i-- > 1;)
            acc = acc * x +
                  PadicElem::from_int(self, static_cast<std::int64_t>(i)) *
                      PadicElem::from_int(self, static_cast<std::int64_t>(mod_low_[i]));
        return acc;
    };
    PadicElem z = PadicElem::gen(self).pow(p_);
    for (std::uint32_t k = 1; k < 2 * prec_; k *= 2)
        z = z - eval_poly(z) * eval_deriv(z).inverse();
    // columns are coordinates of z^j
    PadicElem zj = PadicElem::one(self);
    for (std::uint32_t j = 0; j < f_; ++j) {
        for (std::uint32_t i = 0; i < f_; ++i) frob_[i][j] = zj.coeffs()[i];
        zj = zj * z;
    }
    // invert frob_ mod p^N by Gaussian elimination (unit pivots exist: the
    // matrix is invertible mod p since phi is an automorphism)
    const std::uint64_t m = pn_;
    std::vector<std::vector<std::uint64_t>> a = frob_;
    std::vector<std::vector<std::uint64_t>> inv(f_, std::vector<std::uint64_t>(f_, 0));
    for (std::uint32_t i = 0; i < f_; ++i) inv[i][i] = 1;
    auto inv_unit = [&](std::uint64_t u) {
        // inverse mod p by scan, then Newton-lift mod p^N
        std::uint64_t x = 1;
        for (std::uint64_t t = 1; t < p_; ++t)
            if ((u % p_) * t % p_ == 1) {
                x = t;
                break;
            }
        for (std::uint32_t k = 1; k < 2 * prec_; k *= 2)
            x = x * ((2 + m - u * x % m) % m) % m;
        return x;
    };
    for (std::uint32_t col = 0; col < f_; ++col) {
        std::uint32_t piv = col;
        while (piv < f_ && a[piv][col] % p_ == 0) ++piv;
        if (piv == f_) fail("not-invertible", "frobenius matrix not invertible");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        std::uint64_t ip = inv_unit(a[col][col]);
        for (std::uint32_t j = 0; j < f_; ++j) {
            a[col][j] = a[col][j] * ip % m;
            inv[col][j] = inv[col][j] * ip % m;
        }
        for (std::uint32_t row = 0; row < f_; ++row) {
            if (row == col || a[row][col] == 0) continue;
            std::uint64_t factor = a[row][col];
            for (std::uint32_t j = 0; j < f_; ++j) {
                a[row][j] = (a[row][j] + (m - factor) * a[col][j]) % m;
                inv[row][j] = (inv[row][j] + (m - factor) * inv[col][j]) % m;
            }
        }
    }
    frob_inv_ = inv;
}

}  // namespace wittwin
