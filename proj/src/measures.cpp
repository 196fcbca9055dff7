#include "wienerlab/measures.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "wienerlab/spectra.hpp"
#include "wienerlab/summation.hpp"

namespace wienerlab {

namespace {

void check_probability_weights(const std::vector<std::complex<double>>& weights, double arc_mass) {
    KahanSum mass;
    for (const auto& w : weights) {
        if (w.imag() != 0.0 || w.real() < 0.0) {
            throw std::invalid_argument("probability measure needs nonnegative real weights");
        }
        mass.add(w.real());
    }
    mass.add(arc_mass);
    if (std::abs(mass.value() - 1.0) > kMassTolerance) {
        throw std::invalid_argument("probability measure has total mass " + std::to_string(mass.value()));
    }
}

std::complex<double> atom_phase(const UnitAngle& angle, std::int64_t k) {
    if (const auto& r = angle.rational()) return unit_root(mulmod(mod_floor(k, r->den()), r->num(), r->den()), r->den());
    if (const auto& x = angle.exact()) return e_product(ExactReal::of(Fraction(k)), *x, angle.xi_value());
    return e_turns(static_cast<long double>(k) * angle.theta());
}

std::complex<double> arc_coeff(const UniformArc& arc, long double k) {
    if (k == 0.0L) return {arc.weight, 0.0};
    const std::complex<double> num = e_turns(k * arc.hi) - e_turns(k * arc.lo);
    const std::complex<double> den(0.0, static_cast<double>(2.0L * std::numbers::pi_v<long double> * k *
                                                            (arc.hi - arc.lo)));
    return arc.weight * num / den;
}

}  // namespace

CircleMeasure::CircleMeasure(std::vector<Atom> atoms, std::vector<UniformArc> arcs, bool probability)
    : atoms_(std::move(atoms)), arcs_(std::move(arcs)), probability_(probability) {
    std::optional<long double> xi;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (atoms_[i].angle.same_point(atoms_[j].angle)) {
                throw std::invalid_argument("atom angles must be pairwise distinct (" + atoms_[i].angle.str() + ")");
            }
        }
        const auto& e = atoms_[i].angle.exact();
        if (e && !e->is_rational()) {
            if (xi && *xi != atoms_[i].angle.xi_value()) {
                throw std::invalid_argument("atoms use two different formal irrationals");
            }
            xi = atoms_[i].angle.xi_value();
        }
    }
    double arc_mass = 0.0;
    for (const auto& a : arcs_) {
        if (!(a.lo >= 0.0L && a.lo < a.hi && a.hi <= 1.0L)) {
            throw std::invalid_argument("arc must satisfy 0 <= alpha < beta <= 1");
        }
        if (!(a.weight >= 0.0)) throw std::invalid_argument("arc weight must be nonnegative");
        arc_mass += a.weight;
    }
    if (probability_) {
        std::vector<std::complex<double>> w;
        for (const auto& a : atoms_) w.push_back(a.weight);
        check_probability_weights(w, arc_mass);
    }
}

double CircleMeasure::total_variation() const {
    KahanSum tv;
    for (const auto& a : atoms_) tv.add(std::abs(a.weight));
    for (const auto& a : arcs_) tv.add(a.weight);
    return tv.value();
}

std::complex<double> CircleMeasure::total_mass() const {
    ComplexKahanSum m;
    for (const auto& a : atoms_) m.add(a.weight);
    for (const auto& a : arcs_) m.add(a.weight);
    return m.value();
}

bool CircleMeasure::is_dirac() const {
    return arcs_.empty() && atoms_.size() == 1 && atoms_[0].weight == std::complex<double>(1.0, 0.0);
}

CircleMeasure CircleMeasure::conjugate() const {
    std::vector<Atom> atoms;
    for (const auto& a : atoms_) atoms.push_back({a.angle.negated(), std::conj(a.weight)});
    std::vector<UniformArc> arcs;
    for (const auto& a : arcs_) arcs.push_back({1.0L - a.hi, 1.0L - a.lo, a.weight});
    return CircleMeasure(std::move(atoms), std::move(arcs), probability_);
}

CircleMeasure dirac(const UnitAngle& angle) {
    return CircleMeasure({{angle, {1.0, 0.0}}}, {}, true);
}

CircleMeasure convex_mix(const std::vector<std::pair<CircleMeasure, std::complex<double>>>& parts,
                         bool probability) {
    if (probability) {
        std::vector<std::complex<double>> w;
        for (const auto& [m, c] : parts) {
            if (!m.probability()) throw std::invalid_argument("probability mix needs probability components");
            w.push_back(c);
        }
        check_probability_weights(w, 0.0);
    }
    std::vector<Atom> atoms;
    std::vector<UniformArc> arcs;
    for (const auto& [m, c] : parts) {
        for (const auto& a : m.atoms()) {
            const std::complex<double> w = c * a.weight;
            bool merged = false;
            for (auto& existing : atoms) {
                if (existing.angle.same_point(a.angle)) {
                    existing.weight += w;
                    merged = true;
                    break;
                }
            }
            if (!merged) atoms.push_back({a.angle, w});
        }
        for (const auto& a : m.arcs()) {
            if (c.imag() != 0.0 || c.real() < 0.0) {
                throw std::invalid_argument("arcs can only be scaled by nonnegative reals");
            }
            arcs.push_back({a.lo, a.hi, a.weight * c.real()});
        }
    }
    return CircleMeasure(std::move(atoms), std::move(arcs), probability);
}

std::complex<double> fourier_coeff(const CircleMeasure& mu, std::int64_t k) {
    ComplexKahanSum acc;
    for (const auto& a : mu.atoms()) acc.add(a.weight * atom_phase(a.angle, k));
    for (const auto& arc : mu.arcs()) acc.add(arc_coeff(arc, static_cast<long double>(k)));
    return acc.value();
}

std::complex<double> fourier_coeff_at(const CircleMeasure& mu, const IntSequence& seq, std::int64_t n) {
    ComplexKahanSum acc;
    std::optional<std::int64_t> k;
    auto term = [&] {
        if (!k) k = seq.term(n);
        return *k;
    };
    for (const auto& a : mu.atoms()) {
        if (const auto& r = a.angle.rational()) {
            const std::int64_t q = r->den();
            acc.add(a.weight * unit_root(mulmod(seq.term_mod(n, q), r->num(), q), q));
        } else {
            acc.add(a.weight * atom_phase(a.angle, term()));
        }
    }
    for (const auto& arc : mu.arcs()) acc.add(arc_coeff(arc, static_cast<long double>(term())));
    return acc.value();
}

std::vector<QuotientPair> atom_quotient_pairs(const CircleMeasure& mu) {
    std::vector<QuotientPair> pairs;
    const auto& atoms = mu.atoms();
    pairs.reserve(atoms.size() * atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            pairs.push_back({i, j, atoms[i].angle.minus(atoms[j].angle), atoms[i].weight * std::conj(atoms[j].weight)});
        }
    }
    return pairs;
}

std::vector<std::vector<std::size_t>> rational_independence_classes(const CircleMeasure& mu) {
    std::vector<std::vector<std::size_t>> classes;
    std::vector<Fraction> keys;
    for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
        const auto& e = mu.atoms()[i].angle.exact();
        if (!e) {
            throw std::domain_error("atom at " + mu.atoms()[i].angle.str() +
                                    " has no exact rational + rational*xi form");
        }
        // theta_a - theta_b is rational iff the xi coefficients agree.
        std::size_t c = 0;
        while (c < keys.size() && keys[c] != e->xi) ++c;
        if (c == keys.size()) {
            keys.push_back(e->xi);
            classes.emplace_back();
        }
        classes[c].push_back(i);
    }
    return classes;
}

LineMeasure::LineMeasure(std::vector<LineAtom> atoms, bool probability, long double xi_value)
    : atoms_(std::move(atoms)), probability_(probability), xi_value_(xi_value) {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const bool same = (atoms_[i].exact && atoms_[j].exact) ? *atoms_[i].exact == *atoms_[j].exact
                                                                   : atoms_[i].position == atoms_[j].position;
            if (same) throw std::invalid_argument("line atom positions must be distinct");
        }
    }
    if (probability_) {
        std::vector<std::complex<double>> w;
        for (const auto& a : atoms_) w.push_back(a.weight);
        check_probability_weights(w, 0.0);
    }
}

bool LineMeasure::is_dirac() const {
    return atoms_.size() == 1 && atoms_[0].weight == std::complex<double>(1.0, 0.0);
}

std::complex<double> LineMeasure::fourier(long double t) const {
    ComplexKahanSum acc;
    for (const auto& a : atoms_) acc.add(a.weight * e_turns(t * a.position));
    return acc.value();
}

std::complex<double> LineMeasure::fourier(const ExactReal& k) const {
    ComplexKahanSum acc;
    for (const auto& a : atoms_) {
        acc.add(a.weight * (a.exact ? e_product(k, *a.exact, xi_value_) : e_turns(k.value(xi_value_) * a.position)));
    }
    return acc.value();
}

}  // namespace wienerlab
