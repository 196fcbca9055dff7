#include "wienerlab/angle.hpp"

#include <cmath>
#include <stdexcept>

namespace wienerlab {

std::string ExactReal::str() const {
    if (xi.is_zero()) return rational.str();
    std::string s = rational.is_zero() ? "" : rational.str() + "+";
    return s + xi.str() + "*xi";
}

ExactReal operator*(const ExactReal& a, const ExactReal& b) {
    if (!a.xi.is_zero() && !b.xi.is_zero()) {
        throw std::domain_error("product " + a.str() + " * " + b.str() + " leaves the q1+q2*xi form");
    }
    return {a.rational * b.rational, a.rational * b.xi + a.xi * b.rational};
}

bool rationally_dependent(const ExactReal& u, const ExactReal& v) {
    if (u.is_zero() || v.is_zero()) {
        throw std::invalid_argument("rational dependence is only defined for nonzero reals");
    }
    // u/v rational <=> (u1, u2) parallel to (v1, v2) since 1 and xi are independent over Q.
    return u.rational * v.xi == u.xi * v.rational;
}

BitStream BitStream::of_fraction(Fraction x) {
    if (x < Fraction(0) || !(x < Fraction(1))) {
        throw std::invalid_argument("bit stream source must lie in [0, 1)");
    }
    BitStream b;
    b.exact_ = x;
    return b;
}

BitStream BitStream::of_digits(std::string digits) {
    BitStream b;
    b.digits_.reserve(digits.size());
    for (char c : digits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit stream digits must be 0 or 1");
        b.digits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return b;
}

std::optional<int> BitStream::bit(std::int64_t i) const {
    if (i < 1) throw std::out_of_range("bit index starts at 1");
    if (exact_) {
        // Digit i of b/q is floor(2 * (2^(i-1) b mod q) / q).
        std::int64_t q = exact_->den();
        std::int64_t r = mulmod(powmod(2, i - 1, q), exact_->num(), q);
        return static_cast<int>((static_cast<i128>(r) * 2) / q);
    }
    if (static_cast<std::size_t>(i) > digits_.size()) return std::nullopt;
    return digits_[static_cast<std::size_t>(i - 1)];
}

bool BitStream::has_bits(std::int64_t count) const {
    return exact_.has_value() || static_cast<std::int64_t>(digits_.size()) >= count;
}

std::optional<std::int64_t> BitStream::length() const {
    if (exact_) return std::nullopt;
    return static_cast<std::int64_t>(digits_.size());
}

long double frac_part(long double x) {
    long double f = x - std::floor(x);
    return f >= 1.0L ? 0.0L : f;
}

UnitAngle UnitAngle::of(std::int64_t b, std::int64_t q) {
    if (q < 1) throw std::invalid_argument("angle denominator must be >= 1");
    return of_fraction(Fraction(mod_floor(b, q), q));
}

UnitAngle UnitAngle::of_fraction(Fraction f) {
    UnitAngle a;
    Fraction r = f.frac();
    a.rational_ = r;
    a.exact_ = ExactReal::of(r);
    a.theta_ = r.to_long_double();
    return a;
}

UnitAngle UnitAngle::irrational(long double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("angle must be finite");
    UnitAngle a;
    a.rational_.reset();
    a.exact_.reset();
    a.theta_ = frac_part(theta);
    return a;
}

UnitAngle UnitAngle::symbolic(const ExactReal& x, long double xi_value) {
    if (x.is_rational()) return of_fraction(x.rational);
    UnitAngle a;
    a.rational_.reset();
    a.exact_ = ExactReal{x.rational.frac(), x.xi};
    a.xi_value_ = xi_value;
    a.theta_ = frac_part(x.value(xi_value));
    return a;
}

UnitAngle UnitAngle::with_bits(BitStream bits) const {
    UnitAngle a = *this;
    a.bits_ = std::make_shared<const BitStream>(std::move(bits));
    return a;
}

bool UnitAngle::same_point(const UnitAngle& other) const {
    if (exact_ && other.exact_) {
        return (exact_->rational - other.exact_->rational).frac().is_zero() && exact_->xi == other.exact_->xi;
    }
    return theta_ == other.theta_;
}

UnitAngle UnitAngle::negated() const {
    if (rational_) return of_fraction(-*rational_);
    if (exact_) return symbolic(-*exact_, xi_value_);
    return irrational(-theta_);
}

UnitAngle UnitAngle::minus(const UnitAngle& other) const {
    if (exact_ && other.exact_) {
        return symbolic(*exact_ - *other.exact_, exact_->xi.is_zero() ? other.xi_value_ : xi_value_);
    }
    if (same_point(other)) return of(0, 1);
    return irrational(theta_ - other.theta_);
}

std::string UnitAngle::str() const {
    if (exact_) return exact_->str();
    return std::to_string(static_cast<double>(theta_));
}

std::complex<double> unit_root(std::int64_t r, std::int64_t q) {
    if (q < 1) throw std::invalid_argument("unit_root: q must be >= 1");
    r = mod_floor(r, q);
    if (static_cast<i128>(r) * 4 % q == 0) {
        switch (static_cast<int>(static_cast<i128>(r) * 4 / q)) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    // Reduce to (-1/2, 1/2) so e(-x) is computed as the exact conjugate of e(x).
    std::int64_t s = (static_cast<i128>(r) * 2 >= q) ? r - q : r;
    long double x = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(s) /
                    static_cast<long double>(q);
    return {static_cast<double>(std::cos(x)), static_cast<double>(std::sin(x))};
}

std::complex<double> e_turns(long double x) {
    long double f = frac_part(x);
    if (f >= 0.5L) f -= 1.0L;
    if (f == 0.0L) return {1.0, 0.0};
    if (f == 0.25L) return {0.0, 1.0};
    if (f == -0.5L) return {-1.0, 0.0};
    if (f == -0.25L) return {0.0, -1.0};
    long double a = 2.0L * std::numbers::pi_v<long double> * f;
    return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

}  // namespace wienerlab
