#include "wienerlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "wienerlab/summation.hpp"

namespace wienerlab {

namespace {

constexpr std::int64_t kRootTableMax = 1 << 20;

// e(r/q) for r in [0, q), tabulated for moderate q.
class RootTable {
public:
    explicit RootTable(std::int64_t q) : q_(q) {
        if (q <= kRootTableMax) {
            roots_.reserve(static_cast<std::size_t>(q));
            for (std::int64_t r = 0; r < q; ++r) roots_.push_back(unit_root(r, q));
        }
    }
    std::complex<double> operator()(std::int64_t r) const {
        if (!roots_.empty()) return roots_[static_cast<std::size_t>(r)];
        return unit_root(r, q_);
    }

private:
    std::int64_t q_;
    std::vector<std::complex<double>> roots_;
};

template <typename Term>
CesaroEstimate cesaro(std::int64_t N, Term&& term) {
    if (N < 1) throw std::invalid_argument("Cesaro average needs N >= 1");
    CesaroEstimate est;
    est.N = N;
    for (std::int64_t c = 10; c < N; c *= 10) {
        est.checkpoints.emplace_back(c, chunked_sum<std::complex<double>>(1, c, term) / static_cast<double>(c));
    }
    est.value = chunked_sum<std::complex<double>>(1, N, term) / static_cast<double>(N);
    est.checkpoints.emplace_back(N, est.value);
    return est;
}

void require_coprime(std::int64_t b, std::int64_t q) {
    if (q < 1) throw std::invalid_argument("denominator q must be >= 1");
    if (gcd64(b, q) != 1) {
        throw std::invalid_argument("closed form needs gcd(b, q) = 1, got b=" + std::to_string(b) +
                                    " q=" + std::to_string(q));
    }
}

// Histogram of P(r) mod q over r = 1..q (optionally units only).
std::vector<std::int64_t> residue_histogram(std::span<const std::int64_t> coeffs, std::int64_t q, bool units_only,
                                            std::int64_t& population) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(q), 0);
    population = 0;
    for (std::int64_t r = 1; r <= q; ++r) {
        if (units_only && gcd64(r, q) != 1) continue;
        ++counts[static_cast<std::size_t>(eval_poly_mod(coeffs, r, q))];
        ++population;
    }
    return counts;
}

std::complex<double> histogram_sum(const std::vector<std::int64_t>& counts, std::int64_t population,
                                   std::int64_t b, std::int64_t q) {
    ComplexKahanSum acc;
    for (std::int64_t v = 0; v < q; ++v) {
        const std::int64_t c = counts[static_cast<std::size_t>(v)];
        if (c != 0) acc.add(static_cast<double>(c) * unit_root(mulmod(v, b, q), q));
    }
    return acc.value() / static_cast<double>(population);
}

std::complex<double> closed_form(std::span<const std::int64_t> coeffs, std::int64_t b, std::int64_t q,
                                 bool primes) {
    require_coprime(b, q);
    std::int64_t population = 0;
    auto counts = residue_histogram(coeffs, q, primes, population);
    return histogram_sum(counts, population, mod_floor(b, q), q);
}

}  // namespace

CesaroEstimate empirical_c(const IntSequence& seq, const UnitAngle& angle, std::int64_t N) {
    if (const auto& r = angle.rational()) {
        const std::int64_t q = r->den(), b = r->num();
        RootTable roots(q);
        return cesaro(N, [&](std::int64_t n) { return roots(mulmod(seq.term_mod(n, q), b, q)); });
    }
    if (angle.bits() && seq.kind() == SequenceKind::lacunary && seq.lacunary_base() == 2) {
        return lacunary_cesaro(2, *angle.bits(), N);
    }
    const long double theta = angle.theta();
    return cesaro(N, [&](std::int64_t n) { return e_turns(static_cast<long double>(seq.term(n)) * theta); });
}

std::complex<double> closed_form_c_poly(std::span<const std::int64_t> coeffs, std::int64_t b, std::int64_t q) {
    return closed_form(coeffs, b, q, false);
}

std::complex<double> closed_form_c_poly(std::span<const std::int64_t> coeffs, const UnitAngle& angle) {
    if (!angle.rational()) return {0.0, 0.0};
    return closed_form(coeffs, angle.rational()->num(), angle.rational()->den(), false);
}

std::complex<double> closed_form_c_poly_primes(std::span<const std::int64_t> coeffs, std::int64_t b,
                                               std::int64_t q) {
    return closed_form(coeffs, b, q, true);
}

std::complex<double> closed_form_c_poly_primes(std::span<const std::int64_t> coeffs, const UnitAngle& angle) {
    if (!angle.rational()) return {0.0, 0.0};
    return closed_form(coeffs, angle.rational()->num(), angle.rational()->den(), true);
}

std::optional<LimitFunction> LimitFunction::closed_form(const IntSequence& seq) {
    switch (seq.kind()) {
        case SequenceKind::poly: return poly({seq.coeffs().begin(), seq.coeffs().end()});
        case SequenceKind::primes:
        case SequenceKind::poly_of_primes: return poly_of_primes({seq.coeffs().begin(), seq.coeffs().end()});
        default: return std::nullopt;
    }
}

LimitFunction LimitFunction::poly(std::vector<std::int64_t> coeffs) {
    LimitFunction f;
    f.coeffs_ = std::move(coeffs);
    f.primes_ = false;
    return f;
}

LimitFunction LimitFunction::poly_of_primes(std::vector<std::int64_t> coeffs) {
    LimitFunction f;
    f.coeffs_ = std::move(coeffs);
    f.primes_ = true;
    return f;
}

std::complex<double> LimitFunction::operator()(const UnitAngle& angle) const {
    if (!angle.rational()) return {0.0, 0.0};
    return at(angle.rational()->num(), angle.rational()->den());
}

std::complex<double> LimitFunction::at(std::int64_t b, std::int64_t q) const {
    return wienerlab::closed_form(coeffs_, b, q, primes_);
}

std::string to_string(Provenance p) {
    return p == Provenance::closed_form ? "closed-form" : "empirical";
}

SpectrumTable spectrum_scan(const IntSequence& seq, std::int64_t q_max, std::optional<double> threshold,
                            std::int64_t empirical_N) {
    if (q_max < 1) throw std::invalid_argument("spectrum scan needs q_max >= 1");
    SpectrumTable table;
    table.q_max = q_max;
    const auto limit = LimitFunction::closed_form(seq);
    table.threshold = threshold.value_or(limit ? kClosedFormThreshold : kEmpiricalThreshold);

    std::int64_t N = empirical_N;
    if (!limit && seq.capacity()) N = std::min(N, *seq.capacity());

    for (std::int64_t q = 1; q <= q_max; ++q) {
        std::vector<std::int64_t> counts;
        std::int64_t population = 0;
        if (limit) counts = residue_histogram(limit->coeffs(), q, limit->along_primes(), population);
        for (std::int64_t b = 0; b < q; ++b) {
            if (gcd64(b, q) != 1) continue;
            SpectrumEntry entry;
            entry.angle = Fraction(b, q);
            if (limit) {
                entry.value = histogram_sum(counts, population, b, q);
                entry.provenance = Provenance::closed_form;
            } else {
                entry.value = empirical_c(seq, UnitAngle::of(b, q), N).value;
                entry.provenance = Provenance::empirical;
            }
            if (std::abs(entry.value) > table.threshold) table.entries.push_back(entry);
        }
    }
    return table;
}

std::int64_t unimodular_group_detect(const SpectrumTable& table, double tol) {
    std::set<Fraction> unimodular;
    std::int64_t d = 1;
    for (const auto& e : table.entries) {
        if (std::abs(std::abs(e.value) - 1.0) <= tol) {
            unimodular.insert(e.angle);
            d = lcm64(d, e.angle.den());
        }
    }
    if (!unimodular.contains(Fraction(0))) {
        throw std::domain_error("scanned table lacks c(1) = 1; not the table of a good sequence");
    }
    if (d > table.q_max) {
        throw std::domain_error("unimodular set generates roots of order " + std::to_string(d) +
                                " beyond the scan range " + std::to_string(table.q_max));
    }
    for (std::int64_t j = 0; j < d; ++j) {
        if (!unimodular.contains(Fraction(j, d))) {
            throw std::domain_error("unimodular set is not a group: missing " + Fraction(j, d).str());
        }
    }
    return d;
}

CesaroEstimate lacunary_cesaro(std::int64_t base, const BitStream& theta_bits, std::int64_t N) {
    if (base != 2) throw std::invalid_argument("dyadic-shift averages need base 2");
    if (N < 1) throw std::invalid_argument("Cesaro average needs N >= 1");
    if (!theta_bits.has_bits(N + 64)) {
        throw std::invalid_argument("insufficient bits: need " + std::to_string(N + 64) + ", have " +
                                    std::to_string(theta_bits.length().value_or(0)));
    }
    if (const auto& x = theta_bits.exact()) {
        // frac(2^n b/q) = (2^n b mod q)/q exactly.
        const std::int64_t q = x->den(), b = x->num();
        return cesaro(N, [&](std::int64_t n) { return unit_root(mulmod(powmod(2, n, q), b, q), q); });
    }
    return cesaro(N, [&](std::int64_t n) {
        std::uint64_t window = 0;
        for (std::int64_t j = 1; j <= 64; ++j) {
            window = (window << 1U) | static_cast<std::uint64_t>(*theta_bits.bit(n + j));
        }
        return e_turns(std::ldexp(static_cast<long double>(window), -64));
    });
}

std::complex<double> e_product(const ExactReal& k, const ExactReal& t, long double xi_value) {
    if (k.xi.is_zero() || t.xi.is_zero()) {
        try {
            const ExactReal prod = k * t;
            if (prod.is_rational()) return unit_root(prod.rational.num() % prod.rational.den(), prod.rational.den());
            return e_turns(prod.rational.frac().to_long_double() +
                           frac_part(prod.xi.to_long_double() * xi_value));
        } catch (const std::overflow_error&) {
        }
    }
    return e_turns(k.value(xi_value) * t.value(xi_value));
}

CesaroEstimate real_empirical_c(const RealSequence& rseq, long double t, std::int64_t N) {
    return cesaro(N, [&](std::int64_t n) { return e_turns(rseq.term(n) * t); });
}

CesaroEstimate real_empirical_c(const RealSequence& rseq, const ExactReal& t, std::int64_t N) {
    return cesaro(N, [&](std::int64_t n) {
        try {
            return e_product(rseq.term_exact(n), t, rseq.xi_value());
        } catch (const std::overflow_error&) {
            return e_turns(rseq.term(n) * t.value(rseq.xi_value()));
        }
    });
}

std::complex<double> closed_form_c_real_affine_shift(const ExactReal& a, const ExactReal& b,
                                                     std::span<const std::int64_t> int_coeffs,
                                                     const ExactReal& theta, long double xi_value) {
    if (a.is_zero()) throw std::invalid_argument("scale a must be nonzero");
    const ExactReal a_theta = a * theta;
    if (!a_theta.is_rational()) return {0.0, 0.0};
    const Fraction dq = a_theta.rational;
    const std::complex<double> periodic = closed_form_c_poly(int_coeffs, mod_floor(dq.num(), dq.den()), dq.den());
    if (!b.is_rational() && !theta.is_rational()) {
        throw std::domain_error("b*theta leaves the q1+q2*xi form");
    }
    return e_product(b, theta, xi_value) * periodic;
}

}  // namespace wienerlab
