#include "wienerlab/repro.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "wienerlab/extremality.hpp"
#include "wienerlab/measures.hpp"
#include "wienerlab/orbitlab.hpp"
#include "wienerlab/seqcore.hpp"
#include "wienerlab/spectra.hpp"
#include "wienerlab/wiener.hpp"

namespace wienerlab {

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "FAILED " << what << "; ";
        }
    }
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

Outcome primes_spectrum() {
    Outcome o;
    const std::int64_t N = 10'000;
    const IntSequence primes = primes_seq(130'000);
    const auto est = empirical_c(primes, UnitAngle::of(1, 2), N);
    const double expected = -1.0 + 2.0 / static_cast<double>(N);
    o.require(est.value.real() == expected && est.value.imag() == 0.0,
              "empirical c(-1) = " + fmt(est.value.real()) + " vs " + fmt(expected));
    const std::vector<std::int64_t> x{0, 1};
    const auto closed = closed_form_c_poly_primes(x, 1, 2);
    o.require(closed == std::complex<double>(-1.0, 0.0), "closed form c(-1) = " + fmt(closed.real()));
    o.detail << "c(-1) empirical " << fmt(est.value.real()) << ", closed form " << fmt(closed.real());
    return o;
}

Outcome square_closed_form() {
    Outcome o;
    const auto est = empirical_c(poly_seq({0, 0, 1}), UnitAngle::of(1, 4), 4000);
    const double err = std::abs(est.value - std::complex<double>(0.5, 0.5));
    o.require(err <= 1e-12, "|empirical - (1+i)/2| = " + fmt(err));
    o.detail << "|empirical - (1+i)/2| = " << fmt(err);
    return o;
}

Outcome wiener_along_primes() {
    Outcome o;
    const std::int64_t N = 10'000;
    const CircleMeasure mu({{UnitAngle::of(0, 1), 0.5}, {UnitAngle::of(1, 2), 0.5}}, {}, true);
    const double emp = empirical_wiener_avg(mu, primes_seq(sieve_limit_for_count(N)), N);
    const double lim = countable_spectrum_limit(mu, LimitFunction::poly_of_primes({0, 1}));
    o.require(emp == 1.0 / static_cast<double>(N), "empirical " + fmt(emp));
    o.require(lim == 0.0, "limit " + fmt(lim));
    o.detail << "empirical " << fmt(emp) << ", limit " << fmt(lim);
    return o;
}

Outcome classical_wiener_lemma() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int count = std::uniform_int_distribution<int>(1, 5)(rng);
        std::vector<Atom> atoms;
        std::vector<double> raw;
        while (static_cast<int>(atoms.size()) < count) {
            const std::int64_t q = std::uniform_int_distribution<std::int64_t>(1, 32)(rng);
            const std::int64_t b = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
            const UnitAngle a = UnitAngle::of(b, q);
            bool fresh = true;
            for (const auto& x : atoms) fresh = fresh && !x.angle.same_point(a);
            if (!fresh) continue;
            atoms.push_back({a, 0.0});
            raw.push_back(std::uniform_real_distribution<double>(0.05, 1.0)(rng));
        }
        double total = 0.0;
        for (double r : raw) total += r;
        double squares = 0.0;
        std::int64_t L = 1;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            atoms[i].weight = raw[i] / total;
            squares += std::norm(atoms[i].weight);
            for (std::size_t j = 0; j < i; ++j) L = lcm64(L, atoms[i].angle.minus(atoms[j].angle).rational()->den());
        }
        const CircleMeasure mu(atoms, {}, true);
        const double emp = empirical_wiener_avg(mu, poly_seq({0, 1}), L * 100);
        worst = std::max(worst, std::abs(emp - squares));
    }
    o.require(worst <= 1e-10, "worst deviation " + fmt(worst));
    o.detail << "100 measures, worst |empirical - sum w^2| = " << fmt(worst);
    return o;
}

Outcome extremality_table() {
    Outcome o;
    int checked = 0;
    auto expect = [&](bool got, bool want, const std::string& what) {
        ++checked;
        o.require(got == want, what);
    };
    auto poly = [](std::vector<std::int64_t> c) { return is_extremal_poly(c).verdict == Verdict::extremal; };
    auto primes = [](std::vector<std::int64_t> c) { return is_extremal_poly_primes(c).verdict == Verdict::extremal; };
    for (std::int64_t a = 0; a <= 20; ++a) expect(poly({a, 0, 1}), true, "n^2+" + std::to_string(a));
    expect(primes({4, 0, 1}), true, "p^2+4");
    expect(primes({2, 0, 1}), false, "p^2+2");
    expect(primes({5, 0, 1}), false, "p^2+5");
    for (int k = 1; k <= 9; ++k) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(k) + 1, 0);
        c[0] = 2;
        c[static_cast<std::size_t>(k)] = 1;
        expect(primes(c), k % 2 == 1, "p^" + std::to_string(k) + "+2");
    }
    for (std::int64_t a = 1; a <= 12; ++a) {
        for (std::int64_t b = 0; b <= 12; ++b) {
            const std::string tag = std::to_string(a) + "," + std::to_string(b);
            expect(poly({b, a}), std::gcd(a, b) == 1, "an+b " + tag);
            expect(primes({b, a}), std::gcd(a, b) == 1 && (a + b) % 2 == 1, "ap+b " + tag);
        }
    }
    for (std::int64_t a = 0; a <= 50; ++a) {
        bool want = true;
        for (std::int64_t p : prime_divisors(a + 1)) want = want && p > 3;
        expect(primes({a, 0, 1}), want, "p^2+" + std::to_string(a));
    }
    o.detail << checked << " verdicts compared";
    return o;
}

// Direct search: every q in [2, q_max] has an admissible r in [1, q] with
// P(r) != 0 mod q.
bool residue_search(const std::vector<std::int64_t>& c, bool units_only, std::int64_t q_max) {
    for (std::int64_t q = 2; q <= q_max; ++q) {
        bool found = false;
        for (std::int64_t r = 1; r <= q && !found; ++r) {
            if (units_only && std::gcd(r, q) != 1) continue;
            found = eval_poly_mod(c, r, q) != 0;
        }
        if (!found) return false;
    }
    return true;
}

Outcome brute_force_agreement() {
    Outcome o;
    std::int64_t total = 0, mismatches = 0;
    for (int deg = 1; deg <= 4; ++deg) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(deg) + 1, -5);
        c.back() = 1;
        while (true) {
            ++total;
            const bool a = is_extremal_poly(c).verdict == Verdict::extremal;
            const bool b = is_extremal_poly_primes(c).verdict == Verdict::extremal;
            if (a != residue_search(c, false, 200) || b != residue_search(c, true, 200)) {
                if (++mismatches <= 3) {
                    o.require(false, "mismatch at coefficients " + std::to_string(c[0]) + ".." + std::to_string(c.back()));
                }
            }
            std::size_t i = 0;
            while (i < c.size()) {
                const std::int64_t hi = 5;
                if (c[i] < hi) {
                    ++c[i];
                    break;
                }
                c[i] = (i + 1 == c.size()) ? 1 : -5;
                ++i;
            }
            if (i == c.size()) break;
        }
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    o.detail << total << " polynomials, " << mismatches << " mismatches";
    return o;
}

Outcome operator_identities() {
    Outcome o;
    const DiagonalContraction T({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 2)}});
    const double h = 1.0 / std::sqrt(2.0);
    const CVector x{h, h};

    // sum_lambda c(lambda) sum_a <P_{a conj(lambda)} x, y> <P_a y, x>, straight from the definition.
    auto theorem_sum = [&](bool primes) {
        const std::vector<std::int64_t> id{0, 1};
        const std::vector<Fraction> eig{Fraction(0), Fraction(1, 2)};
        double s = 0.0;
        for (std::size_t a = 0; a < eig.size(); ++a) {
            for (std::size_t a2 = 0; a2 < eig.size(); ++a2) {
                const Fraction lambda = (eig[a] - eig[a2]).frac();
                const auto c = primes ? closed_form_c_poly_primes(id, lambda.num(), lambda.den())
                                      : closed_form_c_poly(id, lambda.num(), lambda.den());
                const std::complex<double> pa2 = x[a2] * std::conj(x[a2]);
                const std::complex<double> pa = x[a] * std::conj(x[a]);
                s += (c * pa2 * std::conj(pa)).real();
            }
        }
        return s;
    };

    const IntSequence n = poly_seq({0, 1});
    const double avg_n = orbit_inner_avg(T, x, x, n, 1000);
    const double lim_n = theoretical_orbit_limit(T, x, x, LimitFunction::poly({0, 1}));
    o.require(std::abs(avg_n - 0.5) <= 1e-10, "orbit average along n = " + fmt(avg_n));
    o.require(lim_n == theorem_sum(false), "limit along n " + fmt(lim_n) + " vs " + fmt(theorem_sum(false)));

    const IntSequence primes = primes_seq(sieve_limit_for_count(10'000));
    const double avg_p = orbit_inner_avg(T, x, x, primes, 10'000);
    const double lim_p = theoretical_orbit_limit(T, x, x, LimitFunction::poly_of_primes({0, 1}));
    o.require(avg_p <= 1e-3, "orbit average along primes = " + fmt(avg_p));
    o.require(lim_p == 0.0 && lim_p == theorem_sum(true), "limit along primes " + fmt(lim_p));
    o.detail << "n: avg " << fmt(avg_n) << " limit " << fmt(lim_n) << "; primes: avg " << fmt(avg_p) << " limit "
             << fmt(lim_p);
    return o;
}

Outcome gelfand() {
    Outcome o;
    const std::int64_t N = 10'000;
    const IntSequence primes = primes_seq(sieve_limit_for_count(N));
    const auto third = gelfand_probe(DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 3)}}),
                                     primes, N);
    o.require(third.verdict == "not-identity", "diag(1, e(1/3)) along primes: " + third.verdict);
    const auto id = gelfand_probe(DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(0, 1)}}),
                                  primes, N);
    o.require(id.verdict == "identity", "I along primes: " + id.verdict);
    const auto even = gelfand_probe(DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 2)}}),
                                    poly_seq({0, 2}), N);
    o.require(even.verdict == "not-identity" && even.orbit_condition && even.explanation == "sequence not extremal",
              "diag(1,-1) along 2n: " + even.verdict + " / " + even.explanation);
    o.detail << "e(1/3): " << third.verdict << "; I: " << id.verdict << "; 2n: " << even.verdict << " ("
             << even.explanation << ")";
    return o;
}

Outcome return_times() {
    Outcome o;
    const long double alpha = std::sqrt(2.0L) - 1.0L;
    const std::int64_t N = 100'000;
    const IntSequence seq = rotation_return_times(Rotation::irrational(alpha), Arc{0.0L, 0.3L}, 0.0L, N);
    const double density = upper_density_estimate(seq, N);
    o.require(std::abs(density - 0.3) <= 0.01, "density " + fmt(density));

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto near = [](long double t, long double target) {
        const long double d = frac_part(t - target);
        return std::min(d, 1.0L - d) < 0.01L;
    };
    double worst_off = 0.0;
    for (int sampled = 0; sampled < 20;) {
        const long double t = unif(rng);
        bool reject = false;
        for (int k = -10; k <= 10 && !reject; ++k) reject = near(t, frac_part(k * alpha));
        for (std::int64_t q = 1; q <= 10 && !reject; ++q) {
            for (std::int64_t b = 0; b < q && !reject; ++b) reject = near(t, static_cast<long double>(b) / q);
        }
        if (reject) continue;
        ++sampled;
        worst_off = std::max(worst_off, std::abs(empirical_c(seq, UnitAngle::irrational(t), N).value));
    }
    o.require(worst_off <= 0.05, "off-spectrum |c| up to " + fmt(worst_off));

    double worst_on = 0.0;
    for (int k = -5; k <= 5; ++k) {
        const double c = std::abs(empirical_c(seq, UnitAngle::irrational(frac_part(-k * alpha)), N).value);
        const double hat = k == 0 ? 0.3 : std::abs(std::sin(std::numbers::pi * k * 0.3) / (std::numbers::pi * k));
        worst_on = std::max(worst_on, std::abs(c - hat / 0.3));
    }
    o.require(worst_on <= 0.05, "on-spectrum deviation " + fmt(worst_on));
    o.detail << "density " << fmt(density) << ", off-spectrum max |c| " << fmt(worst_off)
             << ", on-spectrum max deviation " << fmt(worst_on);
    return o;
}

Outcome copy_of_z() {
    Outcome o;
    const RealSequence rseq = RealSequence::poly({ExactReal::of(Fraction(0)), ExactReal::of(Fraction(2))});
    const LineMeasure mu({LineAtom::at(ExactReal::of(Fraction(1, 2)), 0.5), LineAtom::at(ExactReal::of(Fraction(-1, 2)), 0.5)},
                         true);
    for (std::int64_t N : {1, 7, 100, 10'000}) {
        const double avg = empirical_wiener_avg(mu, rseq, N);
        o.require(avg == 1.0, "Wiener average at N=" + std::to_string(N) + " is " + fmt(avg));
    }
    o.require(!mu.is_dirac(), "measure should not be Dirac");
    const RExtremality r = classify_R_extremality(rseq);
    o.require(r.verdict == "not-R-extremal", "verdict " + r.verdict);
    bool matches = r.counterexample.has_value() && r.counterexample->atoms().size() == 2;
    if (matches) {
        for (const auto& a : r.counterexample->atoms()) {
            matches = matches && a.exact && a.exact->is_rational() &&
                      (a.exact->rational == Fraction(1, 2) || a.exact->rational == Fraction(-1, 2)) &&
                      a.weight == std::complex<double>(0.5, 0.0);
        }
    }
    o.require(matches, "counterexample is not 1/2 (delta_{1/2} + delta_{-1/2})");
    o.detail << "Wiener average 1 at every N; " << r.verdict << " with " << r.reason;
    return o;
}

}  // namespace

std::vector<ReproResult> run_repro() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
        {"primes spectrum c(-1) = -1", primes_spectrum},
        {"closed form along n^2 at 1/4", square_closed_form},
        {"Wiener average along primes", wiener_along_primes},
        {"classical Wiener lemma along n", classical_wiener_lemma},
        {"extremality table", extremality_table},
        {"deciders vs residue search", brute_force_agreement},
        {"operator orbit identities", operator_identities},
        {"Gelfand probe", gelfand},
        {"return-time spectrum", return_times},
        {"copy of Z counterexample on R", copy_of_z},
    };
    std::vector<ReproResult> out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        ReproResult r;
        r.id = static_cast<int>(i) + 1;
        r.name = checks[i].first;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            Outcome o = checks[i].second();
            r.pass = o.pass;
            r.detail = o.detail.str();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace wienerlab
