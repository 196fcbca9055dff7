#pragma once

// Integer and real subsequences (k_n), n >= 1: polynomial images, primes,
// polynomials of primes, circle-rotation return times, a perturbed even
// sequence and lacunary powers. Every integer sequence evaluates residues
// exactly, also past the 64-bit range where term() itself reports overflow.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wienerlab/angle.hpp"
#include "wienerlab/numtheory.hpp"

namespace wienerlab {

/// All primes <= limit, by a segmented sieve of Eratosthenes over odd numbers.
class PrimeSieve {
public:
    explicit PrimeSieve(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    const std::vector<std::int64_t>& primes() const { return primes_; }
    std::int64_t count() const { return static_cast<std::int64_t>(primes_.size()); }

    /// n-th prime, 1-based; std::out_of_range past the sieve.
    std::int64_t nth(std::int64_t n) const;
    /// pi(x) for x <= limit.
    std::int64_t count_upto(std::int64_t x) const;
    bool contains(std::int64_t x) const;

private:
    std::int64_t limit_;
    std::vector<std::int64_t> primes_;
};

/// Sieve limit large enough for n primes (Rosser-Schoenfeld upper bound).
std::int64_t sieve_limit_for_count(std::int64_t n);

enum class SequenceKind {
    poly,
    primes,
    poly_of_primes,
    rotation_return,
    poly_return,
    insertion_perturbed,
    lacunary,
};

std::string to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(const std::string& name);

/// Evaluates P at x with overflow checking (std::overflow_error).
std::int64_t eval_poly_checked(std::span<const std::int64_t> coeffs, std::int64_t x);
/// P(x) mod q by Horner's rule on residues.
std::int64_t eval_poly_mod(std::span<const std::int64_t> coeffs, std::int64_t x, std::int64_t q);

/// Immutable generator of an integer sequence (k_n). Coefficient lists are
/// ascending by power: {c0, c1, ..., cd} is c0 + c1 x + ... + cd x^d.
class IntSequence {
public:
    SequenceKind kind() const { return kind_; }
    /// Parameters in the {kind, params} wire form.
    const nlohmann::json& spec() const { return spec_; }
    std::string describe() const;

    /// k_n for n >= 1. std::overflow_error past max_safe_index(),
    /// std::out_of_range past capacity().
    std::int64_t term(std::int64_t n) const;
    /// k_n mod q in [0, q), exact for every n within capacity.
    std::int64_t term_mod(std::int64_t n, std::int64_t q) const;

    /// Largest n whose term is representable in 64 bits.
    std::int64_t max_safe_index() const { return max_safe_index_; }
    /// Number of terms available (sieve or enumeration size); nullopt if unbounded.
    std::optional<std::int64_t> capacity() const { return capacity_; }
    /// Strictly increasing from this index on.
    std::int64_t monotone_from() const { return monotone_from_; }

    /// Polynomial for poly / poly_of_primes / poly_return (primes: P(x) = x).
    std::span<const std::int64_t> coeffs() const { return coeffs_; }
    bool along_primes() const {
        return kind_ == SequenceKind::primes || kind_ == SequenceKind::poly_of_primes;
    }
    std::int64_t lacunary_base() const { return base_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Terms 1..count as a vector (convenience for probes and output).
    std::vector<std::int64_t> head(std::int64_t count) const;

    friend struct SequenceBuilder;

private:
    IntSequence() = default;

    SequenceKind kind_ = SequenceKind::poly;
    nlohmann::json spec_;
    std::vector<std::int64_t> coeffs_;
    std::int64_t base_ = 0;
    std::shared_ptr<const PrimeSieve> sieve_;
    std::shared_ptr<const std::vector<std::int64_t>> terms_;
    std::int64_t max_safe_index_ = 0;
    std::optional<std::int64_t> capacity_;
    std::int64_t monotone_from_ = 1;
    std::vector<std::string> warnings_;
};

IntSequence poly_seq(std::vector<std::int64_t> coeffs);
IntSequence primes_seq(std::int64_t sieve_limit);
IntSequence poly_of_primes_seq(std::vector<std::int64_t> coeffs, std::int64_t sieve_limit);

inline constexpr std::int64_t kDefaultScanCap = 100'000'000;

/// Rotation x -> x + alpha on [0, 1). A rational alpha is only accepted in
/// diagnostic mode.
struct Rotation {
    long double alpha = 0.0L;
    std::optional<Fraction> rational_alpha;
    bool diagnostic = false;

    static Rotation irrational(long double alpha) { return {alpha, std::nullopt, false}; }
    static Rotation diagnostic_rational(Fraction alpha) {
        return {alpha.to_long_double(), alpha, true};
    }
};

/// Half-open arc [lo, hi) with 0 <= lo < hi <= 1.
struct Arc {
    long double lo = 0.0L;
    long double hi = 1.0L;
    long double length() const { return hi - lo; }
};

IntSequence rotation_return_times(const Rotation& rot, Arc arc, long double x0, std::int64_t count,
                                  std::int64_t scan_cap = kDefaultScanCap);
IntSequence polynomial_return_times(const Rotation& rot, std::vector<std::int64_t> coeffs, Arc arc,
                                    long double x0, std::int64_t count,
                                    std::int64_t scan_cap = kDefaultScanCap);

/// Named density-zero index sets for the perturbed even sequence.
enum class InsertSet { none, squares, primes };
std::string to_string(InsertSet set);
InsertSet insert_set_from_string(const std::string& name);

/// 2, 4, 6, ... with 2k+1 inserted right after 2k whenever k is in the set.
IntSequence insertion_perturbed_even_seq(InsertSet set, std::int64_t count);
IntSequence insertion_perturbed_even_seq(const std::function<bool(std::int64_t)>& insert_after,
                                         std::int64_t count);

IntSequence lacunary_seq(std::int64_t base);

struct GapProbe {
    std::int64_t min_gap = 0;
    std::int64_t repeat_count = 0;
};

/// Smallest gap k_{n+1} - k_n among the first `horizon` terms that occurs at
/// least twice, with its multiplicity; the smallest gap overall if none recurs.
GapProbe gap_liminf_probe(const IntSequence& seq, std::int64_t horizon);

/// |{n : k_n <= N}| / N.
double upper_density_estimate(const IntSequence& seq, std::int64_t N);

enum class RealSequenceKind { real_poly, real_poly_of_primes };

/// k_n = P(n) or P(p_n) with coefficients q1 + q2*xi.
class RealSequence {
public:
    static RealSequence poly(std::vector<ExactReal> coeffs, long double xi_value = kDefaultXi);
    static RealSequence poly_of_primes(std::vector<ExactReal> coeffs, std::int64_t sieve_limit,
                                       long double xi_value = kDefaultXi);

    RealSequenceKind kind() const { return kind_; }
    const std::vector<ExactReal>& coeffs() const { return coeffs_; }
    long double xi_value() const { return xi_value_; }
    std::optional<std::int64_t> capacity() const;

    /// Exact term; throws std::overflow_error if the rationals outgrow 64 bits.
    ExactReal term_exact(std::int64_t n) const;
    long double term(std::int64_t n) const;

private:
    RealSequenceKind kind_ = RealSequenceKind::real_poly;
    std::vector<ExactReal> coeffs_;
    long double xi_value_ = kDefaultXi;
    std::shared_ptr<const PrimeSieve> sieve_;
};

}  // namespace wienerlab
