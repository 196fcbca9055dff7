#include "wienerlab/orbitlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wienerlab/extremality.hpp"
#include "wienerlab/summation.hpp"
#include "wienerlab/wiener.hpp"

namespace wienerlab {

namespace {

constexpr double kUnderflow = 1e-300;
constexpr std::size_t kPhasesKept = 5;

void require_dim(std::size_t dim, const CVector& v, const char* name) {
    if (v.size() != dim) {
        throw std::invalid_argument(std::string(name) + " has dimension " + std::to_string(v.size()) +
                                    ", operator has " + std::to_string(dim));
    }
}

double norm_sq(const CVector& v) {
    KahanSum s;
    for (const auto& z : v) s.add(std::norm(z));
    return s.value();
}

std::complex<double> diag_inner(const CVector& d, const CVector& x, const CVector& y) {
    ComplexKahanSum s;
    for (std::size_t j = 0; j < d.size(); ++j) s.add(d[j] * x[j] * std::conj(y[j]));
    return s.value();
}

std::int64_t tail_begin(std::int64_t N, double tail_fraction) {
    if (N < 1) throw std::invalid_argument("probe needs N >= 1");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("tail_fraction must lie in (0, 1]");
    const auto len =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(static_cast<double>(N) * tail_fraction)));
    return N - len + 1;
}

bool same_frequency(const SemigroupMode& u, const SemigroupMode& v) {
    if (u.exact_a && v.exact_a) return *u.exact_a == *v.exact_a;
    return u.a == v.a;
}

// Limit function of a real polynomial sequence at theta, exact where the
// sequence is an affine image aQ + b of an integer polynomial.
std::complex<double> real_limit_c(const RealSequence& rseq, const std::optional<AffineForm>& form,
                                  const ExactReal& theta) {
    if (theta.is_zero()) return {1.0, 0.0};
    if (!form) return {0.0, 0.0};
    if (rseq.kind() == RealSequenceKind::real_poly) {
        return closed_form_c_real_affine_shift(form->a, form->b, form->Q, theta, rseq.xi_value());
    }
    const ExactReal a_theta = form->a * theta;
    if (!a_theta.is_rational()) return {0.0, 0.0};
    const Fraction dq = a_theta.rational;
    return e_product(form->b, theta, rseq.xi_value()) *
           closed_form_c_poly_primes(form->Q, mod_floor(dq.num(), dq.den()), dq.den());
}

nlohmann::json complex_json(std::complex<double> z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

DiagonalContraction::DiagonalContraction(std::vector<Eigenvalue> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (!(e.r >= 0.0 && e.r <= 1.0)) throw std::invalid_argument("contraction moduli must lie in [0, 1]");
    }
}

CVector DiagonalContraction::power_along(const IntSequence& seq, std::int64_t n) const {
    CVector out(entries_.size());
    std::optional<std::int64_t> k;
    bool overflow = false;
    auto term = [&]() -> std::optional<std::int64_t> {
        if (!k && !overflow) {
            try {
                k = seq.term(n);
            } catch (const std::overflow_error&) {
                overflow = true;
            }
        }
        return k;
    };
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        const Eigenvalue& e = entries_[j];
        double modulus = 1.0;
        if (!e.unimodular()) {
            const auto kk = term();
            if (!kk) {
                out[j] = 0.0;
                continue;
            }
            modulus = (*kk == 0) ? 1.0 : std::pow(e.r, static_cast<double>(*kk));
            if (modulus < kUnderflow) {
                out[j] = 0.0;
                continue;
            }
        }
        std::complex<double> phase;
        if (const auto& r = e.angle.rational()) {
            phase = unit_root(mulmod(seq.term_mod(n, r->den()), r->num(), r->den()), r->den());
        } else {
            const auto kk = term();
            if (!kk) throw std::overflow_error("k_n exceeds 64 bits at an irrational eigenangle");
            phase = e.angle.exact() ? e_product(ExactReal::of(Fraction(*kk)), *e.angle.exact(), e.angle.xi_value())
                                    : e_turns(static_cast<long double>(*kk) * e.angle.theta());
        }
        out[j] = modulus * phase;
    }
    return out;
}

std::vector<std::vector<std::size_t>> DiagonalContraction::unimodular_groups() const {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        if (!entries_[j].unimodular()) continue;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
            return entries_[g.front()].angle.same_point(entries_[j].angle);
        });
        if (it == groups.end()) {
            groups.push_back({j});
        } else {
            it->push_back(j);
        }
    }
    return groups;
}

CircleMeasure DiagonalContraction::spectral_atoms(const CVector& x, const CVector& y) const {
    require_dim(dim(), x, "x");
    require_dim(dim(), y, "y");
    std::vector<Atom> atoms;
    for (const auto& g : unimodular_groups()) {
        ComplexKahanSum u;
        for (std::size_t j : g) u.add(x[j] * std::conj(y[j]));
        atoms.push_back({entries_[g.front()].angle, u.value()});
    }
    return CircleMeasure(std::move(atoms), {}, false);
}

double orbit_inner_avg(const DiagonalContraction& T, const CVector& x, const CVector& y, const IntSequence& seq,
                       std::int64_t N, unsigned workers) {
    require_dim(T.dim(), x, "x");
    require_dim(T.dim(), y, "y");
    if (N < 1) throw std::invalid_argument("orbit average needs N >= 1");
    const double sum = chunked_sum<double>(
        1, N, [&](std::int64_t n) { return std::norm(diag_inner(T.power_along(seq, n), x, y)); }, workers);
    return sum / static_cast<double>(N);
}

double theoretical_orbit_limit(const DiagonalContraction& T, const CVector& x, const CVector& y,
                               const LimitFunction& c) {
    return countable_spectrum_limit(T.spectral_atoms(x, y), c);
}

nlohmann::json EigenvectorTest::to_json() const {
    nlohmann::json j{{"average", average},
                     {"norm4", norm4},
                     {"attains_norm4", attains_norm4},
                     {"is_eigenvector", is_eigenvector},
                     {"verdict", verdict}};
    j["sequence_wiener_extremal"] =
        sequence_wiener_extremal ? nlohmann::json(*sequence_wiener_extremal) : nlohmann::json(nullptr);
    return j;
}

EigenvectorTest eigenvector_extremality_test(const DiagonalContraction& T, const CVector& x, const IntSequence& seq,
                                             std::int64_t N, double tol) {
    require_dim(T.dim(), x, "x");
    const double nx = norm_sq(x);
    if (!(nx > 0.0)) throw std::invalid_argument("eigenvector test needs x != 0");
    EigenvectorTest t;
    t.average = orbit_inner_avg(T, x, x, seq, N);
    t.norm4 = nx * nx;
    t.attains_norm4 = std::abs(t.average - t.norm4) <= tol * t.norm4;

    std::optional<std::size_t> carrier;
    t.is_eigenvector = true;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0.0) continue;
        const Eigenvalue& e = T.entries()[j];
        if (!e.unimodular()) {
            t.is_eigenvector = false;
            break;
        }
        if (!carrier) {
            carrier = j;
        } else if (!e.angle.same_point(T.entries()[*carrier].angle)) {
            t.is_eigenvector = false;
            break;
        }
    }

    if (const auto v = known_extremality(seq)) t.sequence_wiener_extremal = v->verdict == Verdict::extremal;
    if (t.attains_norm4 && !t.is_eigenvector) {
        t.verdict = (t.sequence_wiener_extremal && *t.sequence_wiener_extremal) ? "inconsistent"
                                                                                 : "non-wiener-extremal-witness";
    } else {
        t.verdict = "consistent";
    }
    return t;
}

nlohmann::json ClassicalLimitTest::to_json() const {
    nlohmann::json j{{"passes", passes}, {"tail_min_ratio", tail_min_ratio}, {"distance_bound", distance_bound}};
    j["max_distance"] = max_distance ? nlohmann::json(*max_distance) : nlohmann::json(nullptr);
    nlohmann::json ph = nlohmann::json::array();
    for (const auto& [n, z] : phases) ph.push_back({{"n", n}, {"lambda", complex_json(z)}});
    j["phases"] = ph;
    return j;
}

ClassicalLimitTest classical_limit_test(const DiagonalContraction& T, const CVector& x, const IntSequence& seq,
                                        std::int64_t N, double tol, double tail_fraction) {
    require_dim(T.dim(), x, "x");
    const double nx = norm_sq(x);
    if (!(nx > 0.0)) throw std::invalid_argument("classical limit test needs x != 0");
    const std::int64_t start = tail_begin(N, tail_fraction);
    ClassicalLimitTest t;
    t.distance_bound = std::sqrt(2.0 * tol) * std::sqrt(nx);
    t.tail_min_ratio = 1.0;
    for (std::int64_t n = start; n <= N; ++n) {
        const CVector d = T.power_along(seq, n);
        t.tail_min_ratio = std::min(t.tail_min_ratio, std::abs(diag_inner(d, x, x)) / nx);
    }
    t.passes = t.tail_min_ratio >= 1.0 - tol;
    if (!t.passes) return t;

    double worst = 0.0;
    for (std::int64_t n = start; n <= N; ++n) {
        const CVector d = T.power_along(seq, n);
        const std::complex<double> ip = diag_inner(d, x, x);
        const std::complex<double> lambda = std::conj(ip) / std::abs(ip);
        CVector diff(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) diff[j] = lambda * d[j] * x[j] - x[j];
        worst = std::max(worst, std::sqrt(norm_sq(diff)));
        if (N - n < static_cast<std::int64_t>(kPhasesKept)) t.phases.emplace_back(n, lambda);
    }
    t.max_distance = worst;
    return t;
}

nlohmann::json GelfandProbe::to_json() const {
    return {{"orbit_condition", orbit_condition},
            {"max_tail_deviation", max_tail_deviation},
            {"verdict", verdict},
            {"explanation", explanation}};
}

GelfandProbe gelfand_probe(const DiagonalContraction& T, const IntSequence& seq, std::int64_t N, double tol,
                           double tail_fraction) {
    const std::int64_t start = tail_begin(N, tail_fraction);
    GelfandProbe g;
    for (std::int64_t n = start; n <= N; ++n) {
        for (const auto& z : T.power_along(seq, n)) g.max_tail_deviation = std::max(g.max_tail_deviation, std::abs(z - 1.0));
    }
    g.orbit_condition = g.max_tail_deviation <= tol;
    if (!g.orbit_condition) {
        g.verdict = "not-identity";
        g.explanation = "T^{k_n} stays away from I over the tail";
        return g;
    }
    const auto known = known_extremality(seq);
    const bool all_one = std::all_of(T.entries().begin(), T.entries().end(), [](const Eigenvalue& e) { return e.is_one(); });
    if (known && known->verdict == Verdict::extremal) {
        g.verdict = "identity";
        g.explanation = "extremal sequence: only the eigenvalue 1 has lambda^{k_n} -> 1";
    } else if (known) {
        g.verdict = all_one ? "inconclusive" : "not-identity";
        g.explanation = "sequence not extremal";
    } else {
        g.verdict = "inconclusive";
        g.explanation = "no extremality verdict for this sequence";
    }
    return g;
}

DiagonalSemigroup::DiagonalSemigroup(std::vector<SemigroupMode> modes, long double xi_value)
    : modes_(std::move(modes)), xi_value_(xi_value) {
    for (const auto& m : modes_) {
        if (!(m.rho >= 0.0)) throw std::invalid_argument("decay rates must be nonnegative");
    }
}

CVector DiagonalSemigroup::at(const ExactReal& t) const {
    CVector out(modes_.size());
    const long double tv = t.value(xi_value_);
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        const auto& m = modes_[j];
        const double decay = m.rho == 0.0 ? 1.0 : std::exp(-m.rho * static_cast<double>(tv));
        const std::complex<double> phase = m.exact_a ? e_product(t, *m.exact_a, xi_value_) : e_turns(tv * m.a);
        out[j] = decay * phase;
    }
    return out;
}

CVector DiagonalSemigroup::at(long double t) const {
    CVector out(modes_.size());
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        const auto& m = modes_[j];
        const double decay = m.rho == 0.0 ? 1.0 : std::exp(-m.rho * static_cast<double>(t));
        out[j] = decay * e_turns(t * m.a);
    }
    return out;
}

nlohmann::json OrbitReport::to_json() const {
    nlohmann::json j;
    j["empirical_avg"] = empirical_avg;
    j["N"] = N;
    j["theoretical"] = theoretical ? nlohmann::json(*theoretical) : nlohmann::json(nullptr);
    j["formula_value"] = formula_value;
    j["eigen_support"] = eigen_support;
    j["verdicts"] = verdicts;
    return j;
}

OrbitReport semigroup_orbit_avg(const DiagonalSemigroup& S, const CVector& x, const CVector& y,
                                const RealSequence& rseq, std::int64_t N) {
    require_dim(S.dim(), x, "x");
    require_dim(S.dim(), y, "y");
    if (N < 1) throw std::invalid_argument("orbit average needs N >= 1");
    const auto& c = rseq.coeffs();
    auto lead = std::find_if(c.rbegin(), c.rend(), [](const ExactReal& v) { return !v.is_zero(); });
    if (lead == c.rend() || !(lead->value(rseq.xi_value()) > 0.0L)) {
        throw std::invalid_argument("real sequence needs a positive leading coefficient");
    }

    OrbitReport rep;
    rep.N = N;
    const double sum = chunked_sum<double>(1, N, [&](std::int64_t n) {
        CVector d;
        try {
            d = S.at(rseq.term_exact(n));
        } catch (const std::overflow_error&) {
            d = S.at(rseq.term(n));
        }
        return std::norm(diag_inner(d, x, y));
    });
    rep.empirical_avg = sum / static_cast<double>(N);

    // Eigenspaces of the generator on the imaginary axis.
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < S.dim(); ++j) {
        if (S.modes()[j].rho != 0.0) continue;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return same_frequency(S.modes()[g.front()], S.modes()[j]); });
        if (it == groups.end()) {
            groups.push_back({j});
        } else {
            it->push_back(j);
        }
    }
    std::vector<std::complex<double>> u;
    KahanSum diag;
    for (const auto& g : groups) {
        ComplexKahanSum s;
        for (std::size_t j : g) s.add(x[j] * std::conj(y[j]));
        u.push_back(s.value());
        diag.add(std::norm(u.back()));
        const auto& m = S.modes()[g.front()];
        rep.eigen_support.push_back(m.exact_a ? m.exact_a->str() : std::to_string(static_cast<double>(m.a)));
    }
    rep.formula_value = diag.value();

    const RExtremality cls = classify_R_extremality(rseq);
    rep.verdicts.push_back(cls.verdict + ": " + cls.reason);
    try {
        const auto form = affine_form(rseq);
        KahanSum s;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            for (std::size_t j = 0; j < groups.size(); ++j) {
                const auto& mi = S.modes()[groups[i].front()];
                const auto& mj = S.modes()[groups[j].front()];
                if (i == j) {
                    s.add(std::norm(u[i]));
                    continue;
                }
                if (!mi.exact_a || !mj.exact_a) throw std::domain_error("frequency without an exact form");
                s.add((real_limit_c(rseq, form, *mi.exact_a - *mj.exact_a) * u[i] * std::conj(u[j])).real());
            }
        }
        rep.theoretical = s.value();
    } catch (const std::domain_error& e) {
        rep.verdicts.push_back(std::string("no exact limit: ") + e.what());
    }
    if (rep.theoretical) {
        if (std::abs(*rep.theoretical - rep.formula_value) <= 1e-12) {
            rep.verdicts.push_back("limit equals sum_a |<P_a x, y>|^2");
        } else {
            rep.verdicts.push_back("limit differs from sum_a |<P_a x, y>|^2: the sequence spectrum meets a frequency difference");
        }
    }
    return rep;
}

OrbitReport orbit_report(const DiagonalContraction& T, const CVector& x, const CVector& y, const IntSequence& seq,
                         std::int64_t N) {
    OrbitReport rep;
    rep.N = N;
    rep.empirical_avg = orbit_inner_avg(T, x, y, seq, N);
    const CircleMeasure atoms = T.spectral_atoms(x, y);
    rep.formula_value = ergodic_limit(atoms);
    for (std::size_t j = 0; j < T.dim(); ++j) {
        if (x[j] == 0.0) continue;
        const auto& e = T.entries()[j];
        const std::string label = e.unimodular() ? e.angle.str() : "cnu r=" + std::to_string(e.r) + " theta=" + e.angle.str();
        if (std::find(rep.eigen_support.begin(), rep.eigen_support.end(), label) == rep.eigen_support.end()) {
            rep.eigen_support.push_back(label);
        }
    }
    if (const auto c = LimitFunction::closed_form(seq)) {
        try {
            rep.theoretical = countable_spectrum_limit(atoms, *c);
            rep.verdicts.push_back("closed-form limit of the countable-spectrum sequence");
        } catch (const std::domain_error& e) {
            rep.verdicts.push_back(std::string("no exact limit: ") + e.what());
        }
    } else {
        rep.verdicts.push_back("no closed-form limit function for this sequence");
    }
    return rep;
}

}  // namespace wienerlab
