#pragma once

// Extremality of (P(n)) and (P(p_n)) decided exactly with replayable
// certificates, finite-horizon probes for general sequences and measures, and
// the real-line (R-)extremality classification of affine polynomial families.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wienerlab/measures.hpp"
#include "wienerlab/seqcore.hpp"

namespace wienerlab {

enum class Verdict { extremal, not_extremal, inconclusive };
std::string to_string(Verdict v);

/// P(r) mod q for a witness r in [1, q].
struct Witness {
    std::int64_t q = 0;
    std::int64_t r = 0;
    std::int64_t residue = 0;
};

struct ExtremalityVerdict {
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::int64_t> coeffs;
    /// Witnesses must be units mod q (the prime-argument criterion).
    bool units_only = false;
    /// Not extremal: P(r) = 0 mod bad_q for every admissible r.
    std::optional<std::int64_t> bad_q;
    /// Extremal: an admissible r with P(r) != 0 mod q for each decisive q.
    std::vector<Witness> witnesses;
    /// Probe verdicts: per-q count or density behind the decision.
    std::vector<std::pair<std::int64_t, double>> evidence;
    /// True when a theorem turns the computation into a proof; false for
    /// finite-horizon evidence.
    bool proof = true;
    std::string method;
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
};

struct FixedDivisor {
    std::int64_t value = 1;
    std::vector<std::int64_t> sample_values;
};

/// gcd(|P(0)|, ..., |P(deg)|), the gcd of P over all integers.
/// std::invalid_argument for the zero polynomial.
FixedDivisor fixed_divisor(std::span<const std::int64_t> coeffs);

/// (P(n)) is extremal iff every q >= 2 has r with P(r) != 0 mod q, which
/// reduces to fixed_divisor(P) = 1.
ExtremalityVerdict is_extremal_poly(std::span<const std::int64_t> coeffs);

/// (P(p_n)) is extremal iff every q >= 2 has a unit r with P(r) != 0 mod q.
/// Only primes dividing the content or primes q <= deg + 1 can fail.
ExtremalityVerdict is_extremal_poly_primes(std::span<const std::int64_t> coeffs);

/// Recomputes every witness and the bad-q claim from scratch.
bool replay_certificate(const ExtremalityVerdict& v);

/// Wiener extremality coincides with extremality for these two families.
ExtremalityVerdict wiener_extremal_verdict_poly(std::span<const std::int64_t> coeffs);
ExtremalityVerdict wiener_extremal_verdict_poly_primes(std::span<const std::int64_t> coeffs);

/// Exact verdict for sequence kinds covered by the theorems above.
std::optional<ExtremalityVerdict> known_extremality(const IntSequence& seq);

struct RootOfUnityBehaviour {
    Fraction angle;
    bool converges_to_one = false;
    /// max |e(k_n b/q) - 1| over the tail.
    double max_deviation = 0.0;
};

/// For every reduced b/q with 2 <= q <= q_max: does e(k_n b/q) equal 1 over
/// the last tail_fraction of indices n <= N? Exact via residues.
std::vector<RootOfUnityBehaviour> roots_of_unity_convergence_probe(const IntSequence& seq, std::int64_t q_max,
                                                                   std::int64_t N, double tail_fraction = 0.25);

inline constexpr std::int64_t kGapCountFloor = 10;
inline constexpr double kDensityFloor = 0.01;

/// Counts n <= horizon with q not dividing k_n for 2 <= q <= q_max; evidence
/// of extremality when every count reaches `floor`.
ExtremalityVerdict bounded_gaps_extremality_check(const IntSequence& seq, std::int64_t q_max, std::int64_t horizon,
                                                  std::int64_t floor = kGapCountFloor);

/// Density of {n <= horizon : q does not divide k_n} for 2 <= q <= q_max;
/// evidence of Wiener extremality when every density exceeds `floor`.
ExtremalityVerdict pos_density_wiener_check(const IntSequence& seq, std::int64_t q_max, std::int64_t horizon,
                                            double floor = kDensityFloor);

struct MeasureProbe {
    double wiener_avg = 0.0;
    double tail_min_abs_fourier = 0.0;
    double tail_wiener_avg = 0.0;
    bool mu_is_dirac = false;
    /// "dirac-consistent" when |mu^(k_n)| stays at 1 over the tail,
    /// "witness-absent" otherwise.
    std::string classification;
    /// A non-Dirac measure that looks Dirac along the sequence.
    bool exhibits_non_extremality = false;
};

MeasureProbe measure_extremality_probe(const CircleMeasure& mu, const IntSequence& seq, std::int64_t N,
                                       double tail_fraction = 0.25, double tol = 1e-9);

struct RExtremality {
    /// "R-Wiener-extremal", "not-R-extremal" or "inconclusive".
    std::string verdict;
    std::string reason;
    /// k_n lies in a' Z for this a' when not R-extremal.
    std::optional<ExactReal> lattice_step;
    /// 1/2 (delta_{1/a'} + delta_{-1/a'}), with mu^(k_n) = 1 for all n.
    std::optional<LineMeasure> counterexample;

    nlohmann::json to_json() const;
};

/// k_n = a Q(n) + b (or a Q(p_n) + b), Q a non-constant integer polynomial.
RExtremality is_R_extremal_affine(const ExactReal& a, const ExactReal& b, std::span<const std::int64_t> q_coeffs,
                                  long double xi_value = kDefaultXi);

/// k_n = a Q(n) + b with Q an integer polynomial whose nonzero coefficients
/// are coprime; empty when the non-constant coefficients are rationally
/// independent.
struct AffineForm {
    ExactReal a;
    ExactReal b;
    std::vector<std::int64_t> Q;
};
std::optional<AffineForm> affine_form(const RealSequence& rseq);

/// Classifies a real polynomial sequence by rational dependence of its
/// coefficients.
RExtremality classify_R_extremality(const RealSequence& rseq);

}  // namespace wienerlab
