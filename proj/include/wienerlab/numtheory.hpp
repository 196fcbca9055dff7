#pragma once

// Exact integer helpers shared by every module: residues, gcd/lcm,
// factorization of 64-bit integers and an overflow-checked fraction type.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace wienerlab {

using i128 = __int128;

/// Residue of x modulo q in [0, q). q must be positive.
constexpr std::int64_t mod_floor(std::int64_t x, std::int64_t q) {
    std::int64_t r = x % q;
    return r < 0 ? r + q : r;
}

constexpr std::int64_t mod_floor(i128 x, std::int64_t q) {
    auto r = static_cast<std::int64_t>(x % q);
    return r < 0 ? r + q : r;
}

constexpr std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t q) {
    return mod_floor(static_cast<i128>(a) * b, q);
}

std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t q);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

/// Least common multiple; throws std::overflow_error past int64.
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime64(std::int64_t n);

/// Prime factors of |n| with multiplicity, ascending. n != 0.
std::vector<std::int64_t> factorize(std::int64_t n);

/// Distinct prime factors of |n|, ascending.
std::vector<std::int64_t> prime_divisors(std::int64_t n);

/// Euler's totient.
std::int64_t totient(std::int64_t q);

/// Narrowing from 128 bits; throws std::overflow_error when out of range.
std::int64_t narrow_checked(i128 v, const char* what);

/// Reduced fraction num/den with den > 0. All arithmetic is exact and
/// throws std::overflow_error instead of wrapping.
class Fraction {
public:
    constexpr Fraction() = default;
    Fraction(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    /// Representative in [0, 1).
    Fraction frac() const;

    long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }
    double to_double() const { return static_cast<double>(to_long_double()); }

    /// "p/q" or "p" when integral.
    std::string str() const;
    /// Accepts "p", "-p", "p/q".
    static Fraction parse(const std::string& text);

    Fraction operator-() const;
    friend Fraction operator+(const Fraction& a, const Fraction& b);
    friend Fraction operator-(const Fraction& a, const Fraction& b);
    friend Fraction operator*(const Fraction& a, const Fraction& b);
    friend Fraction operator/(const Fraction& a, const Fraction& b);

    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b);

private:
    static Fraction from_wide(i128 num, i128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace wienerlab
