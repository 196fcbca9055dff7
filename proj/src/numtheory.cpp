#include "wienerlab/numtheory.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wienerlab {

namespace {

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t mulmod_u(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1U) r = mulmod_u(r, a, m);
        a = mulmod_u(a, a, m);
        e >>= 1U;
    }
    return r;
}

std::uint64_t pollard_rho(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        auto f = [&](std::uint64_t x) { return (mulmod_u(x, x, n) + c) % n; };
        std::uint64_t x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_into(std::uint64_t n, std::vector<std::int64_t>& out) {
    if (n == 1) return;
    if (is_prime64(static_cast<std::int64_t>(n))) {
        out.push_back(static_cast<std::int64_t>(n));
        return;
    }
    std::uint64_t d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t q) {
    if (q <= 0) throw std::invalid_argument("powmod: modulus must be positive");
    if (exp < 0) throw std::invalid_argument("powmod: negative exponent");
    return static_cast<std::int64_t>(
        powmod_u(static_cast<std::uint64_t>(mod_floor(base, q)), static_cast<std::uint64_t>(exp),
                 static_cast<std::uint64_t>(q)));
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(gcd128(a, b));
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    i128 l = static_cast<i128>(a / gcd64(a, b)) * b;
    if (l < 0) l = -l;
    return narrow_checked(l, "lcm");
}

bool is_prime64(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    auto un = static_cast<std::uint64_t>(n);
    std::uint64_t d = un - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                            37ULL}) {
        std::uint64_t x = powmod_u(a, d, un);
        if (x == 1 || x == un - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u(x, x, un);
            if (x == un - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::int64_t> factorize(std::int64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: zero has no factorization");
    std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    std::vector<std::int64_t> out;
    for (std::uint64_t p = 2; p < 1000 && p * p <= m; ++p) {
        while (m % p == 0) {
            out.push_back(static_cast<std::int64_t>(p));
            m /= p;
        }
    }
    if (m > 1) factor_into(m, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    auto f = factorize(n);
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

std::int64_t totient(std::int64_t q) {
    if (q < 1) throw std::invalid_argument("totient: q must be >= 1");
    std::int64_t phi = q;
    for (std::int64_t p : prime_divisors(q)) phi = phi / p * (p - 1);
    return phi;
}

std::int64_t narrow_checked(i128 v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error(std::string(what) + ": value exceeds 64-bit range");
    }
    return static_cast<std::int64_t>(v);
}

Fraction::Fraction(std::int64_t num, std::int64_t den) {
    *this = from_wide(num, den);
}

Fraction Fraction::from_wide(i128 num, i128 den) {
    if (den == 0) throw std::domain_error("fraction with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Fraction f;
    f.num_ = narrow_checked(num, "fraction numerator");
    f.den_ = narrow_checked(den, "fraction denominator");
    return f;
}

Fraction Fraction::frac() const {
    Fraction f;
    f.num_ = mod_floor(num_, den_);
    f.den_ = den_;
    return f;
}

std::string Fraction::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Fraction Fraction::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            std::int64_t n = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return Fraction(n);
        }
        std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        std::int64_t n = std::stoll(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        std::int64_t d = std::stoll(b, &used);
        if (used != b.size()) throw std::invalid_argument(text);
        return Fraction(n, d);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a fraction: '" + text + "'");
    }
}

Fraction Fraction::operator-() const {
    return from_wide(-static_cast<i128>(num_), den_);
}

Fraction operator+(const Fraction& a, const Fraction& b) {
    return Fraction::from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                               static_cast<i128>(a.den_) * b.den_);
}

Fraction operator-(const Fraction& a, const Fraction& b) {
    return a + (-b);
}

Fraction operator*(const Fraction& a, const Fraction& b) {
    std::int64_t g1 = gcd64(a.num_, b.den_), g2 = gcd64(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Fraction::from_wide(static_cast<i128>(a.num_ / g1) * (b.num_ / g2),
                               static_cast<i128>(a.den_ / g2) * (b.den_ / g1));
}

Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.num_ == 0) throw std::domain_error("fraction division by zero");
    return Fraction::from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    i128 l = static_cast<i128>(a.num_) * b.den_, r = static_cast<i128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace wienerlab
