#pragma once

// Points on the circle T = R/Z written in turns, lambda = e(theta) with
// e(x) = exp(2*pi*i*x), and exact reals of the form q1 + q2*xi where xi is a
// single declared formal irrational.

#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wienerlab/numtheory.hpp"

namespace wienerlab {

/// Default numeric value used for the formal irrational xi.
inline constexpr long double kDefaultXi = std::numbers::sqrt2_v<long double>;

/// q1 + q2*xi with rational q1, q2. The value of xi is supplied by whoever
/// needs a number; rational-dependence questions are decided symbolically.
struct ExactReal {
    Fraction rational{};
    Fraction xi{};

    static ExactReal of(Fraction r) { return {r, Fraction(0)}; }
    static ExactReal xi_multiple(Fraction c) { return {Fraction(0), c}; }

    bool is_rational() const { return xi.is_zero(); }
    bool is_zero() const { return rational.is_zero() && xi.is_zero(); }
    long double value(long double xi_value) const {
        return rational.to_long_double() + xi.to_long_double() * xi_value;
    }
    std::string str() const;

    ExactReal operator-() const { return {-rational, -xi}; }
    friend ExactReal operator+(const ExactReal& a, const ExactReal& b) {
        return {a.rational + b.rational, a.xi + b.xi};
    }
    friend ExactReal operator-(const ExactReal& a, const ExactReal& b) { return a + (-b); }
    /// Throws std::domain_error if the product would need xi^2.
    friend ExactReal operator*(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator*(const Fraction& a, const ExactReal& b) {
        return {a * b.rational, a * b.xi};
    }
    friend bool operator==(const ExactReal&, const ExactReal&) = default;
};

/// True iff u/v is rational (both nonzero); decided exactly over the basis {1, xi}.
bool rationally_dependent(const ExactReal& u, const ExactReal& v);

/// Binary digits of a number in [0, 1): bit(1) is the first digit after the
/// point. Either an exact rational (unbounded supply) or a finite digit string.
class BitStream {
public:
    static BitStream of_fraction(Fraction x);
    /// Digits as characters '0'/'1'.
    static BitStream of_digits(std::string digits);

    std::optional<int> bit(std::int64_t i) const;
    bool has_bits(std::int64_t count) const;
    std::optional<std::int64_t> length() const;
    /// Set when the digits come from an exact rational.
    const std::optional<Fraction>& exact() const { return exact_; }

private:
    std::optional<Fraction> exact_;
    std::vector<std::uint8_t> digits_;
};

/// A point e(theta) on the unit circle, theta in [0, 1).
///
/// An angle is rational iff rational() is set; there is no floating-point
/// rationality detection. Angles built from an ExactReal with nonzero xi part
/// are irrational by declaration but still support exact differences.
class UnitAngle {
public:
    UnitAngle() : rational_(Fraction(0)), exact_(ExactReal{}) {}

    static UnitAngle of(std::int64_t b, std::int64_t q);
    static UnitAngle of_fraction(Fraction f);
    /// Irrational by declaration, with no exact form.
    static UnitAngle irrational(long double theta);
    static UnitAngle symbolic(const ExactReal& x, long double xi_value = kDefaultXi);

    long double theta() const { return theta_; }
    const std::optional<Fraction>& rational() const { return rational_; }
    const std::optional<ExactReal>& exact() const { return exact_; }
    bool is_rational() const { return rational_.has_value(); }
    long double xi_value() const { return xi_value_; }

    const std::shared_ptr<const BitStream>& bits() const { return bits_; }
    UnitAngle with_bits(BitStream bits) const;

    /// Exact point comparison when both sides carry an exact form.
    bool same_point(const UnitAngle& other) const;

    UnitAngle negated() const;
    /// this - other (mod 1); exact when both are exact.
    UnitAngle minus(const UnitAngle& other) const;

    std::string str() const;

private:
    long double theta_ = 0.0L;
    std::optional<Fraction> rational_;
    std::optional<ExactReal> exact_;
    long double xi_value_ = kDefaultXi;
    std::shared_ptr<const BitStream> bits_;
};

/// e(r/q), exact at multiples of a quarter turn and conjugation-symmetric.
std::complex<double> unit_root(std::int64_t r, std::int64_t q);

/// e(x) for x in turns; the argument is reduced mod 1 first.
std::complex<double> e_turns(long double x);

/// x mod 1 in [0, 1).
long double frac_part(long double x);

}  // namespace wienerlab
