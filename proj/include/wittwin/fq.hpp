#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "wittwin/common.hpp"

namespace wittwin {

class FqField;
using FqFieldPtr = std::shared_ptr<const FqField>;

/// F_q with q = p^f, realized as F_p[y]/(g) for a fixed defining polynomial g.
///
/// The defining polynomial is deterministic per (p, f): the lexicographically
/// smallest monic irreducible of degree f, scanning the non-leading coefficient
/// vector (c_{f-1},...,c_0) as a base-p counter. Serialized data records it, so
/// files are reproducible across builds.
class FqField : public std::enable_shared_from_this<FqField> {
public:
    static FqFieldPtr make(std::uint32_t p, std::uint32_t f);

    std::uint32_t p() const { return p_; }
    std::uint32_t degree() const { return f_; }
    std::uint64_t q() const { return q_; }

    // non-leading coefficients g_0..g_{f-1} of the monic defining polynomial
    const std::vector<std::uint32_t>& modulus_low() const { return mod_low_; }

    bool same_spec(const FqField& o) const { return p_ == o.p_ && f_ == o.f_; }

private:
    FqField(std::uint32_t p, std::uint32_t f, std::vector<std::uint32_t> mod_low)
        : p_(p), f_(f), q_(pow_u64(p, f)), mod_low_(std::move(mod_low)) {}

    std::uint32_t p_, f_;
    std::uint64_t q_;
    std::vector<std::uint32_t> mod_low_;
};

class FqElem {
public:
    FqElem() = default;
    FqElem(FqFieldPtr k, std::vector<std::uint32_t> c) : k_(std::move(k)), c_(std::move(c)) {
        if (c_.size() != k_->degree()) fail("bad-argument", "coefficient vector length");
        for (auto& x : c_) x %= k_->p();
    }

    static FqElem zero(const FqFieldPtr& k) {
        return FqElem(k, std::vector<std::uint32_t>(k->degree(), 0));
    }
    static FqElem one(const FqFieldPtr& k) {
        std::vector<std::uint32_t> c(k->degree(), 0);
        c[0] = 1;
        return FqElem(k, c);
    }
    // the class of y, the defining-polynomial root (for f = 1 this is 0)
    static FqElem gen(const FqFieldPtr& k) {
        std::vector<std::uint32_t> c(k->degree(), 0);
        if (k->degree() > 1) c[1] = 1;
        return FqElem(k, c);
    }
    static FqElem from_int(const FqFieldPtr& k, std::uint64_t n) {
        std::vector<std::uint32_t> c(k->degree(), 0);
        c[0] = static_cast<std::uint32_t>(n % k->p());
        return FqElem(k, c);
    }
    // element with index n = sum c_i p^i; enumeration order for oracles
    static FqElem from_index(const FqFieldPtr& k, std::uint64_t n) {
        std::vector<std::uint32_t> c(k->degree());
        for (std::uint32_t i = 0; i < k->degree(); ++i) {
            c[i] = static_cast<std::uint32_t>(n % k->p());
            n /= k->p();
        }
        return FqElem(k, c);
    }
    std::uint64_t index() const {
        std::uint64_t n = 0;
        for (std::size_t i = c_.size(); i-- > 0;) n = n * field()->p() + c_[i];
        return n;
    }

    const FqFieldPtr& field() const { return k_; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](std::uint32_t x) { return x == 0; });
    }
    bool operator==(const FqElem& o) const { return c_ == o.c_; }
    bool operator!=(const FqElem& o) const { return !(*this == o); }

    FqElem operator+(const FqElem& o) const {
        check(o);
        std::vector<std::uint32_t> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = (c_[i] + o.c_[i]) % k_->p();
        return FqElem(k_, std::move(r));
    }
    FqElem operator-() const {
        std::vector<std::uint32_t> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = (k_->p() - c_[i]) % k_->p();
        return FqElem(k_, std::move(r));
    }
    FqElem operator-(const FqElem& o) const { return *this + (-o); }

    FqElem operator*(const FqElem& o) const {
        check(o);
        const std::uint32_t p = k_->p(), f = k_->degree();
        std::vector<std::uint64_t> prod(2 * f - 1, 0);
        for (std::uint32_t i = 0; i < f; ++i)
            for (std::uint32_t j = 0; j < f; ++j)
                prod[i + j] += static_cast<std::uint64_t>(c_[i]) * o.c_[j];
        // fold down by y^f = -(g_{f-1} y^{f-1} + ... + g_0)
        const auto& g = k_->modulus_low();
        for (std::size_t d = prod.size(); d-- > f;) {
            std::uint64_t top = prod[d] % p;
            prod[d] = 0;
            for (std::uint32_t j = 0; j < f; ++j)
                prod[d - f + j] += top * ((p - g[j]) % p);
        }
        std::vector<std::uint32_t> r(f);
        for (std::uint32_t i = 0; i < f; ++i) r[i] = static_cast<std::uint32_t>(prod[i] % p);
        return FqElem(k_, std::move(r));
    }

    FqElem pow(std::uint64_t e) const {
        FqElem r = one(k_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    FqElem frobenius() const { return pow(k_->p()); }
    FqElem frobenius_inverse() const {
        // phi has order f on F_q
        FqElem r = *this;
        for (std::uint32_t i = 0; i + 1 < k_->degree(); ++i) r = r.frobenius();
        return r;
    }

    FqElem inverse() const {
        if (is_zero()) fail("not-invertible", "inverse of 0 in F_q");
        return pow(k_->q() - 2);
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) os << '|';
            os << c_[i];
        }
        return os.str();
    }
    static FqElem parse(const FqFieldPtr& k, const std::string& s);

private:
    void check(const FqElem& o) const {
        if (!k_->same_spec(*o.k_)) fail("ring-mismatch", "F_q spec differs");
    }

    FqFieldPtr k_;
    std::vector<std::uint32_t> c_;
};

namespace detail {

// polynomial arithmetic over F_p on raw coefficient vectors, for the
// irreducibility sieve that picks defining polynomials
using PPoly = std::vector<std::uint32_t>;

inline PPoly ppoly_mod(PPoly a, const PPoly& m, std::uint32_t p) {
    // m monic
    while (a.size() >= m.size()) {
        std::uint32_t lead = a.back() % p;
        if (lead) {
            std::size_t off = a.size() - m.size();
            for (std::size_t i = 0; i < m.size(); ++i)
                a[off + i] = (a[off + i] + (p - lead % p) * std::uint64_t(m[i])) % p;
        }
        a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline PPoly ppoly_mul(const PPoly& a, const PPoly& b, const PPoly& m, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += std::uint64_t(a[i]) * b[j];
    PPoly r(prod.size());
    for (std::size_t i = 0; i < prod.size(); ++i) r[i] = static_cast<std::uint32_t>(prod[i] % p);
    return ppoly_mod(std::move(r), m, p);
}

inline PPoly ppoly_powmod(PPoly base, std::uint64_t e, const PPoly& m, std::uint32_t p) {
    PPoly r{1};
    base = ppoly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = ppoly_mul(r, base, m, p);
        base = ppoly_mul(base, base, m, p);
        e >>= 1;
    }
    return r;
}

inline PPoly ppoly_gcd(PPoly a, PPoly b, std::uint32_t p) {
    auto inv_mod_p = [p](std::uint32_t x) {
        std::uint32_t r = 1, e = p - 2, bb = x;
        while (e) {
            if (e & 1) r = static_cast<std::uint32_t>(std::uint64_t(r) * bb % p);
            bb = static_cast<std::uint32_t>(std::uint64_t(bb) * bb % p);
            e >>= 1;
        }
        return r;
    };
    while (!b.empty()) {
        // normalize b monic and reduce
        std::uint32_t inv = inv_mod_p(b.back());
        PPoly bm = b;
        for (auto& c : bm) c = static_cast<std::uint32_t>(std::uint64_t(c) * inv % p);
        a = ppoly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

inline bool ppoly_irreducible(const PPoly& m, std::uint32_t p) {
    const std::uint32_t f = static_cast<std::uint32_t>(m.size()) - 1;
    // x^{p^f} == x mod m
    PPoly x{0, 1};
    PPoly xq = x;
    for (std::uint32_t i = 0; i < f; ++i) xq = ppoly_powmod(xq, p, m, p);
    PPoly diff = xq;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    while (!diff.empty() && diff.back() == 0) diff.pop_back();
    if (!diff.empty()) return false;
    // gcd(x^{p^{f/l}} - x, m) = 1 for all prime divisors l of f
    for (std::uint32_t l = 2; l <= f; ++l) {
        if (f % l) continue;
        bool is_prime = true;
        for (std::uint32_t d = 2; d * d <= l; ++d)
            if (l % d == 0) is_prime = false;
        if (!is_prime) continue;
        PPoly xe = x;
        for (std::uint32_t i = 0; i < f / l; ++i) xe = ppoly_powmod(xe, p, m, p);
        PPoly diff2 = xe;
        diff2.resize(std::max<std::size_t>(diff2.size(), 2), 0);
        diff2[1] = (diff2[1] + p - 1) % p;
        while (!diff2.empty() && diff2.back() == 0) diff2.pop_back();
        PPoly g = ppoly_gcd(m, diff2, p);
        if (g.size() > 1) return false;
    }
    return true;
}

}  // namespace detail

inline FqFieldPtr FqField::make(std::uint32_t p, std::uint32_t f) {
    if (p < 2 || f < 1) fail("bad-argument", "field spec requires p >= 2, f >= 1");
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) fail("bad-argument", "p must be prime");
    if (f == 1) {
        // F_p = F_p[y]/(y)
        return FqFieldPtr(new FqField(p, 1, {0}));
    }
    const std::uint64_t total = pow_u64(p, f);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        detail::PPoly m(f + 1, 0);
        m[f] = 1;
        std::uint64_t n = idx;
        for (std::uint32_t i = 0; i < f; ++i) {
            m[i] = static_cast<std::uint32_t>(n % p);
            n /= p;
        }
        if (detail::ppoly_irreducible(m, p)) {
            std::vector<std::uint32_t> low(m.begin(), m.end() - 1);
            return FqFieldPtr(new FqField(p, f, std::move(low)));
        }
    }
    fail("bad-argument", "no irreducible polynomial found");  // unreachable
}

inline FqElem FqElem::parse(const FqFieldPtr& k, const std::string& s) {
    std::vector<std::uint32_t> c;
    std::string cur;
    for (char ch : s + "|") {
        if (ch == '|') {
            if (cur.empty()) fail("parse-error", "empty F_q coefficient");
            c.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (c.size() != k->degree()) fail("parse-error", "F_q coefficient count mismatch");
    return FqElem(k, std::move(c));
}

/// Embedding F_q -> F_{q'} determined by the lexicographically first root of
/// the source defining polynomial in the target field. Requires f | f'.
class FqEmbedding {
public:
    FqEmbedding(FqFieldPtr src, FqFieldPtr dst) : src_(std::move(src)), dst_(std::move(dst)) {
        if (src_->p() != dst_->p() || dst_->degree() % src_->degree() != 0)
            fail("bad-argument", "no embedding: need same p and f | f'");
        if (src_->degree() == 1) {
            root_ = FqElem::zero(dst_);
            return;
        }
        for (std::uint64_t i = 0; i < dst_->q(); ++i) {
            FqElem cand = FqElem::from_index(dst_, i);
            if (eval_src_poly(cand).is_zero()) {
                root_ = cand;
                return;
            }
        }
        fail("bad-argument", "defining polynomial has no root in target field");
    }

    FqElem map(const FqElem& a) const {
        FqElem acc = FqElem::zero(dst_);
        FqElem pw = FqElem::one(dst_);
        for (std::uint32_t i = 0; i < src_->degree(); ++i) {
            acc = acc + pw * FqElem::from_int(dst_, a.coeffs()[i]);
            pw = pw * root_;
        }
        return acc;
    }

    const FqFieldPtr& src() const { return src_; }
    const FqFieldPtr& dst() const { return dst_; }

private:
    FqElem eval_src_poly(const FqElem& x) const {
        // monic defining polynomial of the source
        FqElem acc = FqElem::one(dst_);
        for (std::uint32_t i = src_->degree(); i-- > 0;) {
            acc = acc * x + FqElem::from_int(dst_, src_->modulus_low()[i]);
        }
        return acc;
    }

    FqFieldPtr src_, dst_;
    FqElem root_;
};

}  // namespace wittwin
