#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wittwin {

// Error with a stable machine-readable name, used by the CLI to map exit codes.
// Names in use: "not-divisible", "precision-insufficient", "precision-exhausted",
// "precision-budget-exceeded", "dimension-mismatch", "ring-mismatch",
// "not-invertible", "hypothesis-violated", "identity-check-failed",
// "unsolvable-at-degree-k", "determinant-not-E-power", "non-local-frame",
// "invalid-frame", "invalid-window", "non-morphism", "parse-error", "bad-argument".
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(const char* name, const std::string& what) {
    throw Error(name, what);
}

inline std::uint64_t pow_u64(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

// valuation of x mod p^prec; returns prec for x == 0
inline std::uint32_t val_u64(std::uint64_t x, std::uint32_t p, std::uint32_t prec) {
    std::uint32_t v = 0;
    while (v < prec && x % p == 0) {
        if (x == 0) return prec;
        x /= p;
        ++v;
    }
    return v;
}

}  // namespace wittwin
