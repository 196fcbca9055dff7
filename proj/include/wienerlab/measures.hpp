#pragma once

// Finite complex measures on the circle (atoms plus uniform arcs) and atomic
// measures on the real line, with exact Fourier coefficients
//   mu^(k) = integral of e(k theta) d mu(theta).

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wienerlab/angle.hpp"
#include "wienerlab/seqcore.hpp"

namespace wienerlab {

inline constexpr double kMassTolerance = 1e-12;

struct Atom {
    UnitAngle angle;
    std::complex<double> weight;
};

/// Uniform density on [lo, hi) carrying total mass `weight`.
struct UniformArc {
    long double lo = 0.0L;
    long double hi = 1.0L;
    double weight = 0.0;
};

class CircleMeasure {
public:
    CircleMeasure() = default;
    /// Validates distinct atoms, arc bounds and, for probability measures,
    /// nonnegative real weights of total mass 1 (within kMassTolerance).
    CircleMeasure(std::vector<Atom> atoms, std::vector<UniformArc> arcs, bool probability);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<UniformArc>& arcs() const { return arcs_; }
    bool probability() const { return probability_; }

    double total_variation() const;
    std::complex<double> total_mass() const;
    bool is_dirac() const;
    bool is_discrete() const { return arcs_.empty(); }

    /// The measure conj(mu)(E) = conj(mu(-E)) reflected through the real axis,
    /// i.e. atoms at -theta with conjugate weights.
    CircleMeasure conjugate() const;

private:
    std::vector<Atom> atoms_;
    std::vector<UniformArc> arcs_;
    bool probability_ = false;
};

CircleMeasure dirac(const UnitAngle& angle);

/// Weighted combination of measures; coinciding atoms merge. With
/// probability = true every weight must be real, nonnegative and the weights
/// must sum to 1 (std::invalid_argument otherwise).
CircleMeasure convex_mix(const std::vector<std::pair<CircleMeasure, std::complex<double>>>& parts,
                         bool probability);

std::complex<double> fourier_coeff(const CircleMeasure& mu, std::int64_t k);

/// mu^(k_n) along a sequence, using exact residues k_n mod q for rational
/// atoms so it stays exact past the 64-bit range of k_n.
std::complex<double> fourier_coeff_at(const CircleMeasure& mu, const IntSequence& seq, std::int64_t n);

struct QuotientPair {
    std::size_t first = 0;
    std::size_t second = 0;
    /// Angle of a * conj(b), i.e. theta_a - theta_b mod 1.
    UnitAngle difference;
    /// mu({a}) * conj(mu({b})).
    std::complex<double> product;
};

/// All ordered pairs of atoms (a, b).
std::vector<QuotientPair> atom_quotient_pairs(const CircleMeasure& mu);

/// Partition of atom indices into cosets of e(Q): a and b share a class iff
/// theta_a - theta_b is rational. std::domain_error for atoms without an
/// exact form.
std::vector<std::vector<std::size_t>> rational_independence_classes(const CircleMeasure& mu);

struct LineAtom {
    long double position = 0.0L;
    std::optional<ExactReal> exact;
    std::complex<double> weight;

    static LineAtom at(const ExactReal& x, std::complex<double> w, long double xi_value = kDefaultXi) {
        return {x.value(xi_value), x, w};
    }
};

/// Atomic measure on R.
class LineMeasure {
public:
    LineMeasure() = default;
    LineMeasure(std::vector<LineAtom> atoms, bool probability, long double xi_value = kDefaultXi);

    const std::vector<LineAtom>& atoms() const { return atoms_; }
    bool probability() const { return probability_; }
    long double xi_value() const { return xi_value_; }
    bool is_dirac() const;

    /// mu^(t) = sum_x w_x e(t x).
    std::complex<double> fourier(long double t) const;
    /// mu^(k) with exact phase reduction where k and the positions are exact.
    std::complex<double> fourier(const ExactReal& k) const;

private:
    std::vector<LineAtom> atoms_;
    bool probability_ = false;
    long double xi_value_ = kDefaultXi;
};

}  // namespace wienerlab
