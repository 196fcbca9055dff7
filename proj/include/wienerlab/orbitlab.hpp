#pragma once

// Diagonal contractions and contraction semigroups as finite models of the
// unitary / completely non-unitary splitting: orbit averages along
// subsequences, their limits, eigenvector and identity probes.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wienerlab/angle.hpp"
#include "wienerlab/measures.hpp"
#include "wienerlab/seqcore.hpp"
#include "wienerlab/spectra.hpp"

namespace wienerlab {

using CVector = std::vector<std::complex<double>>;

/// Eigenvalue r e(theta).
struct Eigenvalue {
    double r = 1.0;
    UnitAngle angle;

    bool unimodular() const { return r == 1.0; }
    bool is_one() const { return unimodular() && angle.rational() && angle.rational()->num() == 0; }
};

class DiagonalContraction {
public:
    DiagonalContraction() = default;
    /// std::invalid_argument unless every modulus lies in [0, 1].
    explicit DiagonalContraction(std::vector<Eigenvalue> entries);

    const std::vector<Eigenvalue>& entries() const { return entries_; }
    std::size_t dim() const { return entries_.size(); }

    /// Diagonal of T^{k_n}; unimodular rational entries via exact residues.
    CVector power_along(const IntSequence& seq, std::int64_t n) const;

    /// Unimodular eigenvalues grouped by equal value, as index lists.
    std::vector<std::vector<std::size_t>> unimodular_groups() const;

    /// Atoms u_a = <P_a x, y> at each unimodular eigenvalue a: the atomic
    /// part of the spectral measure of the pair (x, y).
    CircleMeasure spectral_atoms(const CVector& x, const CVector& y) const;

private:
    std::vector<Eigenvalue> entries_;
};

/// (1/N) sum |<T^{k_n} x, y>|^2.
double orbit_inner_avg(const DiagonalContraction& T, const CVector& x, const CVector& y, const IntSequence& seq,
                       std::int64_t N, unsigned workers = 0);

/// sum over unimodular eigenvalue pairs (a, a') of c(a conj(a')) u_a conj(u_a').
/// The c.n.u. coordinates contribute nothing.
double theoretical_orbit_limit(const DiagonalContraction& T, const CVector& x, const CVector& y,
                               const LimitFunction& c);

struct EigenvectorTest {
    double average = 0.0;
    double norm4 = 0.0;
    bool attains_norm4 = false;
    bool is_eigenvector = false;
    std::optional<bool> sequence_wiener_extremal;
    /// "consistent", "inconsistent" or "non-wiener-extremal-witness".
    std::string verdict;

    nlohmann::json to_json() const;
};

/// Does (1/N) sum |<T^{k_n} x, x>|^2 reach ||x||^4 (relative tol), and does
/// that agree with x being a unimodular eigenvector?
EigenvectorTest eigenvector_extremality_test(const DiagonalContraction& T, const CVector& x, const IntSequence& seq,
                                             std::int64_t N, double tol = 1e-9);

struct ClassicalLimitTest {
    bool passes = false;
    /// min over the tail of |<T^{k_n} x, x>| / ||x||^2.
    double tail_min_ratio = 0.0;
    /// max over the tail of ||lambda_n T^{k_n} x - x||, when passing.
    std::optional<double> max_distance;
    double distance_bound = 0.0;
    /// (n, lambda_n) for the last few tail indices.
    std::vector<std::pair<std::int64_t, std::complex<double>>> phases;

    nlohmann::json to_json() const;
};

ClassicalLimitTest classical_limit_test(const DiagonalContraction& T, const CVector& x, const IntSequence& seq,
                                        std::int64_t N, double tol = 1e-9, double tail_fraction = 0.25);

struct GelfandProbe {
    bool orbit_condition = false;
    double max_tail_deviation = 0.0;
    /// "identity", "not-identity" or "inconclusive".
    std::string verdict;
    std::string explanation;

    nlohmann::json to_json() const;
};

/// T^{k_n} -> I over the tail, combined with the sequence's extremality.
GelfandProbe gelfand_probe(const DiagonalContraction& T, const IntSequence& seq, std::int64_t N, double tol = 1e-9,
                           double tail_fraction = 0.25);

/// Generator eigenvalue -rho + 2 pi i a, i.e. T(t) acts by e^{-rho t} e(a t).
struct SemigroupMode {
    double rho = 0.0;
    long double a = 0.0L;
    std::optional<ExactReal> exact_a;

    static SemigroupMode exact(double rho, const ExactReal& a, long double xi_value = kDefaultXi) {
        return {rho, a.value(xi_value), a};
    }
};

class DiagonalSemigroup {
public:
    DiagonalSemigroup() = default;
    DiagonalSemigroup(std::vector<SemigroupMode> modes, long double xi_value = kDefaultXi);

    const std::vector<SemigroupMode>& modes() const { return modes_; }
    std::size_t dim() const { return modes_.size(); }
    long double xi_value() const { return xi_value_; }

    CVector at(const ExactReal& t) const;
    CVector at(long double t) const;

private:
    std::vector<SemigroupMode> modes_;
    long double xi_value_ = kDefaultXi;
};

struct OrbitReport {
    double empirical_avg = 0.0;
    std::int64_t N = 0;
    std::optional<double> theoretical;
    /// sum_a |<P_a x, y>|^2, whether or not the sequence supports it.
    double formula_value = 0.0;
    std::vector<std::string> eigen_support;
    std::vector<std::string> verdicts;

    nlohmann::json to_json() const;
};

/// (1/N) sum |<T(k_n) x, y>|^2 along a real polynomial sequence, with the
/// limit sum_a |<P_a x, y>|^2 attached when the sequence is R-Wiener extremal.
OrbitReport semigroup_orbit_avg(const DiagonalSemigroup& S, const CVector& x, const CVector& y,
                                const RealSequence& rseq, std::int64_t N);

/// Report for a contraction: empirical average, closed-form limit when the
/// sequence has one, and the eigenvalues carrying x.
OrbitReport orbit_report(const DiagonalContraction& T, const CVector& x, const CVector& y, const IntSequence& seq,
                         std::int64_t N);

}  // namespace wienerlab
