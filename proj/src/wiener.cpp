#include "wienerlab/wiener.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "wienerlab/summation.hpp"

namespace wienerlab {

namespace {

Fraction exact_rational_difference(const UnitAngle& diff) {
    if (diff.rational()) return *diff.rational();
    throw std::domain_error("atom difference " + diff.str() + " is not rational");
}

bool difference_is_rational(const UnitAngle& diff) {
    if (diff.rational()) return true;
    if (diff.exact()) return false;
    throw std::domain_error("cannot decide rationality of atom difference " + diff.str());
}

// Along an integer polynomial, |mu^(P(n))|^2 has period D = lcm of the
// atom-difference denominators in n, when mu is purely atomic with rational
// differences.
std::optional<std::int64_t> wiener_period(const CircleMeasure& mu, const IntSequence& seq) {
    if (seq.kind() != SequenceKind::poly || !mu.arcs().empty()) return std::nullopt;
    std::int64_t D = 1;
    const auto& atoms = mu.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const UnitAngle diff = atoms[i].angle.minus(atoms[j].angle);
            if (!diff.rational()) return std::nullopt;
            try {
                D = lcm64(D, diff.rational()->den());
            } catch (const std::overflow_error&) {
                return std::nullopt;
            }
        }
    }
    return D;
}

}  // namespace

double empirical_wiener_avg(const CircleMeasure& mu, const IntSequence& seq, std::int64_t N, unsigned workers) {
    if (N < 1) throw std::invalid_argument("Wiener average needs N >= 1");
    auto term = [&](std::int64_t n) { return std::norm(fourier_coeff_at(mu, seq, n)); };
    if (const auto D = wiener_period(mu, seq); D && *D <= N / 2) {
        const double period = chunked_sum<double>(1, *D, term, workers);
        const double rest = chunked_sum<double>(1, N % *D, term, workers);
        return (static_cast<double>(N / *D) * period + rest) / static_cast<double>(N);
    }
    return chunked_sum<double>(1, N, term, workers) / static_cast<double>(N);
}

double empirical_wiener_avg(const LineMeasure& mu, const RealSequence& rseq, std::int64_t N, unsigned workers) {
    if (N < 1) throw std::invalid_argument("Wiener average needs N >= 1");
    const double sum = chunked_sum<double>(1, N, [&](std::int64_t n) {
        try {
            return std::norm(mu.fourier(rseq.term_exact(n)));
        } catch (const std::overflow_error&) {
            return std::norm(mu.fourier(rseq.term(n)));
        }
    }, workers);
    return sum / static_cast<double>(N);
}

double ergodic_limit(const CircleMeasure& mu) {
    KahanSum s;
    for (const auto& a : mu.atoms()) s.add(std::norm(a.weight));
    return s.value();
}

double countable_spectrum_limit(const CircleMeasure& mu, const LimitFunction& c) {
    // The continuous part never meets the countable spectrum, so only atom
    // pairs contribute.
    KahanSum s;
    for (const auto& p : atom_quotient_pairs(mu)) {
        if (p.first == p.second) {
            s.add(p.product.real());
            continue;
        }
        if (!difference_is_rational(p.difference)) continue;
        s.add((c(p.difference) * p.product).real());
    }
    return s.value();
}

bool SpectrumGroup::contains(const UnitAngle& difference) const {
    switch (kind) {
        case Kind::trivial:
            if (difference.rational()) return difference.rational()->num() == 0;
            if (difference.exact()) return false;
            throw std::domain_error("cannot decide membership of " + difference.str());
        case Kind::roots:
            if (!difference_is_rational(difference)) return false;
            return d % exact_rational_difference(difference).den() == 0;
        case Kind::all_rationals: return difference_is_rational(difference);
    }
    return false;
}

std::string SpectrumGroup::str() const {
    switch (kind) {
        case Kind::trivial: return "trivial";
        case Kind::roots: return "roots(" + std::to_string(d) + ")";
        case Kind::all_rationals: return "all-rationals";
    }
    return "";
}

SpectrumGroup spectrum_group_from_table(const SpectrumTable& table) {
    std::int64_t d = 1;
    for (const auto& e : table.entries) {
        try {
            d = lcm64(d, e.angle.den());
        } catch (const std::overflow_error&) {
            return SpectrumGroup::all_rationals();
        }
    }
    return d == 1 ? SpectrumGroup::trivial() : SpectrumGroup::roots(d);
}

double wiener_upper_bound(const CircleMeasure& mu, const SpectrumGroup& group) {
    const auto& atoms = mu.atoms();
    std::vector<std::size_t> reps;
    std::vector<std::complex<double>> mass;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        std::size_t c = 0;
        while (c < reps.size() && !group.contains(atoms[i].angle.minus(atoms[reps[c]].angle))) ++c;
        if (c == reps.size()) {
            reps.push_back(i);
            mass.emplace_back();
        }
        mass[c] += atoms[i].weight;
    }
    KahanSum s;
    for (const auto& m : mass) s.add(std::norm(m));
    return s.value();
}

std::string to_string(WienerFormula f) {
    switch (f) {
        case WienerFormula::ergodic: return "ergodic";
        case WienerFormula::countable_spectrum: return "countable-spectrum";
        case WienerFormula::upper_bound: return "upper-bound";
    }
    return "";
}

nlohmann::json WienerReport::to_json() const {
    nlohmann::json j;
    j["empirical"] = empirical;
    j["N"] = N;
    j["theoretical"] = theoretical ? nlohmann::json(*theoretical) : nlohmann::json(nullptr);
    j["discrepancy"] = theoretical ? nlohmann::json(discrepancy) : nlohmann::json(nullptr);
    j["formula_used"] = formula_used ? nlohmann::json(to_string(*formula_used)) : nlohmann::json(nullptr);
    if (!note.empty()) j["note"] = note;
    return j;
}

WienerReport wiener_report(const CircleMeasure& mu, const IntSequence& seq, std::int64_t N,
                           std::optional<SpectrumGroup> group) {
    WienerReport r;
    r.N = N;
    r.empirical = empirical_wiener_avg(mu, seq, N);
    const auto coeffs = seq.coeffs();
    const bool ergodic = seq.kind() == SequenceKind::poly && coeffs.size() == 2 && coeffs[1] == 1;
    try {
        if (ergodic) {
            r.theoretical = ergodic_limit(mu);
            r.formula_used = WienerFormula::ergodic;
        } else if (auto c = LimitFunction::closed_form(seq)) {
            r.theoretical = countable_spectrum_limit(mu, *c);
            r.formula_used = WienerFormula::countable_spectrum;
        } else if (group) {
            r.theoretical = wiener_upper_bound(mu, *group);
            r.formula_used = WienerFormula::upper_bound;
            r.note = "theoretical is an upper bound over cosets of " + group->str();
        } else {
            r.note = "no closed-form limit for this sequence";
        }
    } catch (const std::domain_error& e) {
        r.theoretical.reset();
        r.formula_used.reset();
        r.note = e.what();
    }
    if (r.theoretical) r.discrepancy = std::abs(r.empirical - *r.theoretical);
    return r;
}

DensityEstimate dlim_estimate(const std::vector<double>& values, double bound, double tol) {
    DensityEstimate est;
    est.horizon = static_cast<std::int64_t>(values.size());
    if (values.empty()) return est;
    KahanSum s, s2;
    for (double v : values) {
        s.add(v);
        s2.add(v * v);
    }
    const auto n_total = static_cast<double>(values.size());
    est.mean = s.value() / n_total;
    est.mean_sq = s2.value() / n_total;

    std::vector<double> tail(values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2), values.end());
    std::sort(tail.begin(), tail.end());
    const double candidate = tail[tail.size() / 2];
    KahanSum residual;
    for (double v : tail) residual.add(std::abs(v - candidate));
    if (residual.value() / static_cast<double>(tail.size()) <= tol) est.limit = candidate;

    for (std::size_t i = 0; i < values.size(); ++i) {
        const int m = std::bit_width(i + 1) - 1;
        const double eps = std::max(bound * std::ldexp(1.0, -m), 1e-12);
        if (std::abs(values[i] - candidate) > eps) ++est.excluded_count;
    }
    est.excluded_density = static_cast<double>(est.excluded_count) / n_total;
    est.density_value = 1.0 - est.excluded_density;
    return est;
}

KvnDiagnostic kvn_equivalence_check(const std::vector<double>& values, std::int64_t horizon, double tol) {
    KvnDiagnostic d;
    const auto h = static_cast<std::size_t>(std::clamp<std::int64_t>(horizon, 0, static_cast<std::int64_t>(values.size())));
    std::vector<double> head(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(h));
    if (head.empty()) {
        d.flagged = true;
        d.reason = "empty horizon";
        return d;
    }
    if (std::any_of(head.begin(), head.end(), [](double v) { return v < 0.0 || v > 1.0; })) {
        d.flagged = true;
        d.reason = "values outside [0, 1]";
    }
    const DensityEstimate est = dlim_estimate(head, 1.0, tol);
    d.mean = est.mean;
    d.mean_sq = est.mean_sq;
    d.dlim = est.limit;
    if (d.flagged) return d;
    if (!d.dlim) {
        d.flagged = true;
        d.reason = "no density limit";
    } else if (std::abs(d.mean - *d.dlim) > tol || std::abs(d.mean_sq - *d.dlim * *d.dlim) > tol) {
        d.flagged = true;
        d.reason = "means disagree with the density limit";
    }
    return d;
}

}  // namespace wienerlab
