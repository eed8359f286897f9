#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace grc {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Arithmetic context for the prime field GF(p).
///
/// Elements are stored as plain residues in [0, p); the context object
/// carries the modulus so that a symbol costs one machine word. All
/// operations are pure and the object is freely shareable across threads.
class PrimeField {
  public:
    explicit PrimeField(u64 p) : p_(p) {
        if (p < 2 || !is_prime(p)) {
            throw std::invalid_argument("PrimeField: modulus " + std::to_string(p) + " is not prime");
        }
        if (p > (u64(1) << 31)) {
            throw std::invalid_argument("PrimeField: modulus too large for 64-bit products");
        }
    }

    u64 modulus() const { return p_; }

    u64 add(u64 a, u64 b) const { return (a + b) % p_; }
    u64 sub(u64 a, u64 b) const { return (a + p_ - b % p_) % p_; }
    u64 neg(u64 a) const { return (p_ - a % p_) % p_; }
    u64 mul(u64 a, u64 b) const { return (a % p_) * (b % p_) % p_; }

    /// Reduce a signed integer into [0, p).
    u64 reduce(i64 v) const {
        i64 m = static_cast<i64>(p_);
        i64 r = v % m;
        return static_cast<u64>(r < 0 ? r + m : r);
    }

    /// a^e with the convention pow(0, 0) = 1.
    u64 pow(u64 a, u64 e) const {
        u64 base = a % p_;
        u64 acc = 1;
        while (e > 0) {
            if (e & 1) acc = acc * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return acc;
    }

    /// Multiplicative inverse; rejects 0.
    u64 inv(u64 a) const {
        if (a % p_ == 0) throw std::domain_error("PrimeField: division by zero");
        return pow(a, p_ - 2);
    }

    u64 div(u64 a, u64 b) const { return mul(a, inv(b)); }

    /// (-1)^e as a field element.
    u64 sign(int e) const { return (e % 2 == 0) ? 1 : p_ - 1; }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

  private:
    static bool is_prime(u64 n) {
        if (n < 2) return false;
        for (u64 q = 2; q * q <= n; ++q) {
            if (n % q == 0) return false;
        }
        return true;
    }

    u64 p_;
};

/// Default modulus used throughout: prime, fits in one 16+1 bit word,
/// and leaves room for the evaluation points and RS block lengths used
/// at the scales this library targets.
inline constexpr u64 kDefaultModulus = 65537;

}  // namespace grc
