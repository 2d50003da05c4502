#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wittwin/padic.hpp"

using namespace wittwin;

namespace {

PadicElem random_elem(const PadicRingPtr& r, std::mt19937_64& rng) {
    std::vector<std::uint64_t> c(r->degree());
    for (auto& x : c) x = rng() % r->modulus();
    return PadicElem(r, std::move(c));
}

}  // namespace

TEST_CASE("defining polynomials are deterministic and classical") {
    auto f4 = FqField::make(2, 2);
    // smallest irreducible monic quadratic over F_2 is y^2 + y + 1
    CHECK(f4->modulus_low() == std::vector<std::uint32_t>{1, 1});
    auto f9 = FqField::make(3, 2);
    // y^2 + 1 is irreducible over F_3 and lexicographically first
    CHECK(f9->modulus_low() == std::vector<std::uint32_t>{1, 0});
    auto f8 = FqField::make(2, 3);
    CHECK(f8->modulus_low() == std::vector<std::uint32_t>{1, 1, 0});
}

TEST_CASE("F_q field axioms on random triples") {
    std::mt19937_64 rng(7);
    for (auto [p, f] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {2, 1}, {2, 2}, {3, 1}, {3, 2}, {2, 4}}) {
        auto k = FqField::make(p, f);
        for (int it = 0; it < 200; ++it) {
            FqElem a = FqElem::from_index(k, rng() % k->q());
            FqElem b = FqElem::from_index(k, rng() % k->q());
            FqElem c = FqElem::from_index(k, rng() % k->q());
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
            if (!a.is_zero()) CHECK(a * a.inverse() == FqElem::one(k));
            CHECK(a.frobenius() == a.pow(p));
            CHECK(a.frobenius().frobenius_inverse() == a);
        }
        // Frobenius is an automorphism of order dividing f
        FqElem g = FqElem::from_index(k, k->q() > 2 ? 2 : 1);
        FqElem h = g;
        for (std::uint32_t i = 0; i < f; ++i) h = h.frobenius();
        CHECK(h == g);
    }
}

TEST_CASE("W(F_q)/p^N ring axioms and units") {
    std::mt19937_64 rng(11);
    for (auto [p, f, N] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {2, 1, 6}, {2, 2, 5}, {3, 1, 4}, {3, 2, 4}}) {
        auto r = PadicRing::make(p, f, N);
        for (int it = 0; it < 200; ++it) {
            PadicElem a = random_elem(r, rng);
            PadicElem b = random_elem(r, rng);
            PadicElem c = random_elem(r, rng);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a + b) - b == a);
            if (a.is_unit()) CHECK(a * a.inverse() == PadicElem::one(r));
        }
    }
}

TEST_CASE("frobenius is a ring homomorphism lifting x -> x^p") {
    std::mt19937_64 rng(13);
    for (auto [p, f, N] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {2, 2, 6}, {3, 2, 4}, {2, 4, 4}}) {
        auto r = PadicRing::make(p, f, N);
        for (int it = 0; it < 100; ++it) {
            PadicElem a = random_elem(r, rng);
            PadicElem b = random_elem(r, rng);
            CHECK(frobenius(a * b) == frobenius(a) * frobenius(b));
            CHECK(frobenius(a + b) == frobenius(a) + frobenius(b));
            CHECK(frobenius(a).residue() == a.residue().frobenius());
            CHECK(frobenius(a).frobenius_inverse() == a);
        }
    }
    // phi = id on Z_p
    auto zp = PadicRing::make(2, 1, 3);
    CHECK(frobenius(PadicElem::from_int(zp, 3)) == PadicElem::from_int(zp, 3));
}

TEST_CASE("frobenius on Teichmuller lifts is functorial") {
    auto r = PadicRing::make(2, 2, 4);
    auto k = r->residue_field();
    FqElem w = FqElem::gen(k);
    CHECK(frobenius(teichmuller(w, r)) == teichmuller(w.frobenius(), r));
    // omega * omega^2 = omega^3 = 1 in F_4
    CHECK(teichmuller(w, r) * teichmuller(w * w, r) == PadicElem::one(r));
}

TEST_CASE("teichmuller examples") {
    auto r = PadicRing::make(3, 1, 2);
    auto k = r->residue_field();
    CHECK(teichmuller(FqElem::zero(k), r) == PadicElem::zero(r));
    CHECK(teichmuller(FqElem::one(k), r) == PadicElem::one(r));
    // t = 2 mod 3 with t^3 = t: t = 8 mod 9
    CHECK(teichmuller(FqElem::from_int(k, 2), r) == PadicElem::from_int(r, 8));
}

TEST_CASE("teichmuller digits round-trip and canonical form") {
    std::mt19937_64 rng(17);
    for (auto [p, f, N] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {2, 1, 5}, {2, 2, 4}, {3, 2, 3}}) {
        auto r = PadicRing::make(p, f, N);
        for (int it = 0; it < 50; ++it) {
            PadicElem a = random_elem(r, rng);
            CHECK(PadicElem::from_digits(r, a.teich_digits()) == a);
            // teichmuller . (mod p) is the identity on digit vectors
            auto d = a.teich_digits();
            CHECK(teichmuller(d[0], r).residue() == d[0]);
            // string round-trip
            CHECK(PadicElem::parse(r, a.to_digit_string()) == a);
        }
    }
}

TEST_CASE("verschiebung and FV = VF = p") {
    std::mt19937_64 rng(19);
    for (auto [p, f, N] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {2, 1, 6}, {2, 2, 6}, {3, 2, 5}}) {
        auto r = PadicRing::make(p, f, N);
        PadicElem pe = PadicElem::from_int(r, static_cast<std::int64_t>(p));
        for (int it = 0; it < 100; ++it) {
            PadicElem a = random_elem(r, rng);
            CHECK(frobenius(verschiebung(a)) == pe * a);
            CHECK(verschiebung(frobenius(a)) == pe * a);
        }
        CHECK(verschiebung(PadicElem::zero(r)) == PadicElem::zero(r));
    }
    // F(V(teich(w))) = 2 teich(w) on W(F_4)
    auto r4 = PadicRing::make(2, 2, 4);
    PadicElem t = teichmuller(FqElem::gen(r4->residue_field()), r4);
    CHECK(frobenius(verschiebung(t)) == PadicElem::from_int(r4, 2) * t);
}

TEST_CASE("V^k(x)^p = V^k(p^{k(p-1)} x^p)") {
    // the quoted worked instance: p=2, N=6, V(3)^2 = V(2*3^2) = 36
    auto r = PadicRing::make(2, 1, 6);
    PadicElem three = PadicElem::from_int(r, 3);
    CHECK(verschiebung(three).pow(2) == PadicElem::from_int(r, 36));
    CHECK(verschiebung(PadicElem::from_int(r, 2 * 9)) == PadicElem::from_int(r, 36));

    std::mt19937_64 rng(23);
    for (auto [p, f, N] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {2, 1, 8}, {2, 2, 6}, {3, 1, 6}, {3, 2, 5}}) {
        auto rr = PadicRing::make(p, f, N);
        for (std::uint32_t k = 1; k <= 3; ++k) {
            for (int it = 0; it < 60; ++it) {
                PadicElem x = random_elem(rr, rng);
                PadicElem lhs = x;
                for (std::uint32_t i = 0; i < k; ++i) lhs = verschiebung(lhs);
                lhs = lhs.pow(p);
                std::uint64_t sc = pow_u64(p, k * (p - 1));
                PadicElem rhs = PadicElem::from_int(rr, static_cast<std::int64_t>(sc)) * x.pow(p);
                for (std::uint32_t i = 0; i < k; ++i) rhs = verschiebung(rhs);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("delta values and delta-ring identities") {
    auto r = PadicRing::make(2, 1, 6);
    CHECK(delta(PadicElem::from_int(r, 2)) == PadicElem::from_int(PadicRing::make(2, 1, 5), -1));
    CHECK(delta(PadicElem::one(r)) == PadicElem::zero(PadicRing::make(2, 1, 5)));
    CHECK(delta(PadicElem::from_int(r, 3)) == PadicElem::from_int(PadicRing::make(2, 1, 5), -3));
    CHECK_THROWS_AS(delta(PadicElem::one(PadicRing::make(2, 1, 1))), Error);

    std::mt19937_64 rng(29);
    for (auto [p, f, N] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {2, 1, 7}, {2, 2, 6}, {3, 1, 5}, {3, 2, 4}}) {
        auto rr = PadicRing::make(p, f, N);
        for (int it = 0; it < 80; ++it) {
            PadicElem a = random_elem(rr, rng);
            PadicElem b = random_elem(rr, rng);
            // delta(ab) = a^p delta(b) + b^p delta(a) + p delta(a) delta(b)
            auto low = PadicRing::make(p, f, N - 1);
            PadicElem da = delta(a), db = delta(b);
            PadicElem ap = a.pow(p).truncate(N - 1), bp = b.pow(p).truncate(N - 1);
            PadicElem pl = PadicElem::from_int(low, static_cast<std::int64_t>(p));
            CHECK(delta(a * b) == ap * db + bp * da + pl * da * db);
            // delta(a+b) = delta(a)+delta(b) - sum_{0<i<p} (1/p) binom(p,i) a^i b^{p-i}
            PadicElem cross = PadicElem::zero(low);
            for (std::uint32_t i = 1; i < p; ++i) {
                // binom(p, i) / p stays integral
                std::uint64_t binom = 1;
                for (std::uint32_t t = 0; t < i; ++t) binom = binom * (p - t) / (t + 1);
                PadicElem coef =
                    PadicElem::from_int(low, static_cast<std::int64_t>(binom / p));
                cross = cross + coef * a.pow(i).truncate(N - 1) * b.pow(p - i).truncate(N - 1);
            }
            CHECK(delta(a + b) == da + db - cross);
        }
    }
}

TEST_CASE("delta(V^k x) = V^{k-1} x - p^{k(p-1)-1} V^k(x^p)") {
    std::mt19937_64 rng(31);
    for (auto [p, f, N] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
             {2, 1, 8}, {2, 2, 6}, {3, 1, 6}, {3, 2, 5}}) {
        auto rr = PadicRing::make(p, f, N);
        for (std::uint32_t k = 1; k <= 3; ++k) {
            for (int it = 0; it < 60; ++it) {
                PadicElem x = random_elem(rr, rng);
                PadicElem vk = x;
                for (std::uint32_t i = 0; i < k; ++i) vk = verschiebung(vk);
                PadicElem lhs = delta(vk);
                PadicElem vkm = x;
                for (std::uint32_t i = 0; i + 1 < k; ++i) vkm = verschiebung(vkm);
                std::uint64_t sc = pow_u64(p, k * (p - 1) - 1);
                PadicElem vkp = PadicElem::from_int(rr, static_cast<std::int64_t>(sc)) * x.pow(p);
                for (std::uint32_t i = 0; i < k; ++i) vkp = verschiebung(vkp);
                PadicElem rhs = (vkm - vkp).truncate(N - 1);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("divide_exact_by_p") {
    auto r = PadicRing::make(2, 1, 4);
    CHECK(divide_exact_by_p(PadicElem::from_int(r, 12), 2) ==
          PadicElem::from_int(PadicRing::make(2, 1, 2), 3));
    CHECK(divide_exact_by_p(PadicElem::zero(r), 2).is_zero());
    auto r3 = PadicRing::make(3, 1, 3);
    CHECK(divide_exact_by_p(PadicElem::from_int(r3, 6), 1) ==
          PadicElem::from_int(PadicRing::make(3, 1, 2), 2));
    CHECK_THROWS_AS(divide_exact_by_p(PadicElem::from_int(r, 3), 1), Error);
    CHECK(divide_exact_by_p(PadicElem::from_int(r, 12), 2).ring()->precision() == 2);
}

TEST_CASE("valuation behaviour: val(p a) = min(val(a)+1, N)") {
    std::mt19937_64 rng(37);
    auto r = PadicRing::make(3, 2, 4);
    for (int it = 0; it < 100; ++it) {
        PadicElem a = random_elem(r, rng);
        PadicElem pa = PadicElem::from_int(r, 3) * a;
        CHECK(pa.val() == std::min(a.val() + 1, r->precision()));
    }
}
