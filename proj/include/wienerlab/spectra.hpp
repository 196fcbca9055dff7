#pragma once

// The limit function c(lambda) = lim (1/N) sum_{n<=N} lambda^{k_n}: Cesaro
// estimates along any sequence, exact closed forms along polynomials and
// polynomials of primes, spectrum scans over rational angles and detection of
// the root-of-unity group on which |c| = 1.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wienerlab/angle.hpp"
#include "wienerlab/seqcore.hpp"

namespace wienerlab {

struct CesaroEstimate {
    std::complex<double> value;
    std::int64_t N = 0;
    /// Partial averages at N_i = 10, 100, ... below N, then N itself.
    std::vector<std::pair<std::int64_t, std::complex<double>>> checkpoints;
};

/// (1/N) sum_{n<=N} e(k_n theta). Rational angles use exact residues
/// k_n mod q; irrational angles use the floating phase frac(k_n theta), or
/// the dyadic-shift route when a lacunary base-2 sequence meets an angle that
/// carries a bit stream.
CesaroEstimate empirical_c(const IntSequence& seq, const UnitAngle& angle, std::int64_t N);

/// (1/q) sum_{r=1..q} e(P(r) b/q). Requires gcd(b, q) = 1.
std::complex<double> closed_form_c_poly(std::span<const std::int64_t> coeffs, std::int64_t b, std::int64_t q);
/// Same at an arbitrary angle; 0 at irrational angles.
std::complex<double> closed_form_c_poly(std::span<const std::int64_t> coeffs, const UnitAngle& angle);

/// (1/phi(q)) sum_{r<=q, gcd(r,q)=1} e(P(r) b/q). Requires gcd(b, q) = 1.
std::complex<double> closed_form_c_poly_primes(std::span<const std::int64_t> coeffs, std::int64_t b,
                                               std::int64_t q);
std::complex<double> closed_form_c_poly_primes(std::span<const std::int64_t> coeffs, const UnitAngle& angle);

/// Exact limit function of a sequence whose c is known in closed form
/// (polynomials, primes, polynomials of primes).
class LimitFunction {
public:
    static std::optional<LimitFunction> closed_form(const IntSequence& seq);
    static LimitFunction poly(std::vector<std::int64_t> coeffs);
    static LimitFunction poly_of_primes(std::vector<std::int64_t> coeffs);

    std::complex<double> operator()(const UnitAngle& angle) const;
    std::complex<double> at(std::int64_t b, std::int64_t q) const;
    bool along_primes() const { return primes_; }
    std::span<const std::int64_t> coeffs() const { return coeffs_; }

private:
    std::vector<std::int64_t> coeffs_;
    bool primes_ = false;
};

enum class Provenance { closed_form, empirical };
std::string to_string(Provenance p);

inline constexpr double kClosedFormThreshold = 1e-9;
inline constexpr double kEmpiricalThreshold = 0.02;

struct SpectrumEntry {
    Fraction angle;  // b/q in lowest terms, 0 <= b < q
    std::complex<double> value;
    Provenance provenance = Provenance::closed_form;
};

struct SpectrumTable {
    std::vector<SpectrumEntry> entries;
    std::int64_t q_max = 1;
    double threshold = kClosedFormThreshold;
};

/// All reduced b/q with q <= q_max and |c(e(b/q))| > threshold. Closed forms
/// where available, otherwise Cesaro estimates over empirical_N terms with
/// provenance "empirical".
SpectrumTable spectrum_scan(const IntSequence& seq, std::int64_t q_max, std::optional<double> threshold = {},
                            std::int64_t empirical_N = 100'000);

/// d such that the scanned {|c| = 1} is exactly the d-th roots of unity.
/// std::domain_error if the scanned set is not such a group within q_max.
std::int64_t unimodular_group_detect(const SpectrumTable& table, double tol = 1e-9);

/// (1/N) sum_{n<=N} e(2^n theta) from the binary digits of theta; the
/// fractional part of 2^n theta is read off digits n+1 .. n+64.
CesaroEstimate lacunary_cesaro(std::int64_t base, const BitStream& theta_bits, std::int64_t N);

/// e(k * t) with exact phase reduction whenever k*t stays in the q1 + q2*xi form.
std::complex<double> e_product(const ExactReal& k, const ExactReal& t, long double xi_value);

/// (1/N) sum e(k_n t) for a real sequence.
CesaroEstimate real_empirical_c(const RealSequence& rseq, long double t, std::int64_t N);
CesaroEstimate real_empirical_c(const RealSequence& rseq, const ExactReal& t, std::int64_t N);

/// Limit function of k_n = a*Q(n) + b, Q integer polynomial (coefficients of
/// P = a*Q lie in aZ), at frequency theta:
///   e(b theta) (1/q) sum_{r=1..q} e(Q(r) d/q)  if a*theta = d/q is rational,
///   0                                           otherwise.
/// std::domain_error when a*theta cannot be decided in the q1 + q2*xi form.
std::complex<double> closed_form_c_real_affine_shift(const ExactReal& a, const ExactReal& b,
                                                     std::span<const std::int64_t> int_coeffs,
                                                     const ExactReal& theta, long double xi_value = kDefaultXi);

}  // namespace wienerlab
