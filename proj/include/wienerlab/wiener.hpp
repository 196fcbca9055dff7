#pragma once

// Wiener averages (1/N) sum |mu^(k_n)|^2 along sequences, their exact limits
// for ergodic and countable-spectrum sequences, the coset upper bound, and
// finite-horizon density-limit (Koopman-von Neumann) utilities.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wienerlab/measures.hpp"
#include "wienerlab/seqcore.hpp"
#include "wienerlab/spectra.hpp"

namespace wienerlab {

double empirical_wiener_avg(const CircleMeasure& mu, const IntSequence& seq, std::int64_t N,
                            unsigned workers = 0);

/// (1/N) sum |mu^(k_n)|^2 for a measure on R along a real sequence.
double empirical_wiener_avg(const LineMeasure& mu, const RealSequence& rseq, std::int64_t N,
                            unsigned workers = 0);

/// sum over atoms of |mu({a})|^2.
double ergodic_limit(const CircleMeasure& mu);

/// sum over ordered atom pairs (a, b) of c(a - b) mu({a}) conj(mu({b})).
/// std::domain_error when an atom difference has no exact form.
double countable_spectrum_limit(const CircleMeasure& mu, const LimitFunction& c);

/// The closed subgroup <Lambda> generated by a spectrum, in the three shapes
/// that occur for the supported sequences.
struct SpectrumGroup {
    enum class Kind { trivial, roots, all_rationals };
    Kind kind = Kind::trivial;
    std::int64_t d = 1;

    static SpectrumGroup trivial() { return {Kind::trivial, 1}; }
    static SpectrumGroup roots(std::int64_t d) { return {Kind::roots, d}; }
    static SpectrumGroup all_rationals() { return {Kind::all_rationals, 0}; }

    /// Whether e(difference) lies in the group. std::domain_error when that
    /// cannot be decided exactly.
    bool contains(const UnitAngle& difference) const;
    std::string str() const;
};

/// Group generated by the rational points of a scanned spectrum table.
SpectrumGroup spectrum_group_from_table(const SpectrumTable& table);

/// sum over cosets a<Lambda> of |mu(a<Lambda>)|^2 (atoms only).
double wiener_upper_bound(const CircleMeasure& mu, const SpectrumGroup& group);

enum class WienerFormula { ergodic, countable_spectrum, upper_bound };
std::string to_string(WienerFormula f);

struct WienerReport {
    double empirical = 0.0;
    std::int64_t N = 0;
    std::optional<double> theoretical;
    std::optional<WienerFormula> formula_used;
    double discrepancy = 0.0;
    std::string note;

    nlohmann::json to_json() const;
};

/// Empirical average plus the exact limit where one is available: ergodic for
/// k_n = n + b, countable-spectrum for closed-form sequences, the coset bound
/// when a spectrum group is supplied. Empirical c is never used as a limit.
WienerReport wiener_report(const CircleMeasure& mu, const IntSequence& seq, std::int64_t N,
                           std::optional<SpectrumGroup> group = std::nullopt);

struct DensityEstimate {
    double mean = 0.0;
    double mean_sq = 0.0;
    /// D-lim candidate; empty when the values do not settle on one.
    std::optional<double> limit;
    /// Indices n (1-based) dropped by the threshold schedule.
    std::int64_t excluded_count = 0;
    double excluded_density = 0.0;
    /// 1 - excluded_density.
    double density_value = 1.0;
    std::int64_t horizon = 0;
};

/// Candidate = median of the second half; n in dyadic block [2^m, 2^{m+1})
/// is dropped when |a_n - candidate| > bound * 2^{-m}.
DensityEstimate dlim_estimate(const std::vector<double>& values, double bound = 1.0, double tol = 0.05);

struct KvnDiagnostic {
    double mean = 0.0;
    double mean_sq = 0.0;
    std::optional<double> dlim;
    bool flagged = false;
    std::string reason;
};

/// Compares mean(b_n), mean(b_n^2) and the D-lim candidate over the first
/// `horizon` values; flags when they are not mutually consistent within tol.
KvnDiagnostic kvn_equivalence_check(const std::vector<double>& values, std::int64_t horizon, double tol = 0.01);

}  // namespace wienerlab
