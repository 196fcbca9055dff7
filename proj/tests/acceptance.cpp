// Acceptance table: one line per criterion, each checked against an oracle
// computed here from first principles.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "wienerlab/extremality.hpp"
#include "wienerlab/measures.hpp"
#include "wienerlab/orbitlab.hpp"
#include "wienerlab/seqcore.hpp"
#include "wienerlab/spectra.hpp"
#include "wienerlab/wiener.hpp"

using namespace wienerlab;
using cd = std::complex<double>;
using Poly = std::vector<std::int64_t>;

namespace {

struct Result {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

std::string g17(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

cd e(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

std::int64_t eval_mod(const Poly& c, std::int64_t x, std::int64_t q) {
    __int128 v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = (v * x + c[i]) % q;
    return static_cast<std::int64_t>(((v % q) + q) % q);
}

bool residue_search(const Poly& c, bool units, std::int64_t q_max) {
    for (std::int64_t q = 2; q <= q_max; ++q) {
        bool found = false;
        for (std::int64_t r = 1; r <= q && !found; ++r) {
            if (units && std::gcd(r, q) != 1) continue;
            found = eval_mod(c, r, q) != 0;
        }
        if (!found) return false;
    }
    return true;
}

std::vector<std::int64_t> plain_sieve(std::int64_t limit) {
    std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::int64_t> p;
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (comp[static_cast<std::size_t>(i)]) continue;
        p.push_back(i);
        for (std::int64_t j = i * i; j <= limit; j += i) comp[static_cast<std::size_t>(j)] = true;
    }
    return p;
}

// 1. c(-1) along the primes.
void criterion1(Result& r) {
    const std::int64_t N = 10'000;
    const IntSequence primes = primes_seq(130'000);
    const auto oracle = plain_sieve(130'000);
    double sum = 0.0;
    for (std::int64_t n = 0; n < N; ++n) sum += oracle[static_cast<std::size_t>(n)] % 2 == 0 ? 1.0 : -1.0;
    const double expected = sum / static_cast<double>(N);
    r.check(expected == -1.0 + 2.0 / static_cast<double>(N), "oracle disagrees with -1 + 2/N");
    const cd got = empirical_c(primes, UnitAngle::of(1, 2), N).value;
    r.check(got.real() == expected && got.imag() == 0.0, "empirical " + g17(got.real()));
    const Poly x{0, 1};
    r.check(closed_form_c_poly_primes(x, 1, 2) == cd(-1.0, 0.0), "closed form");
    r.detail << "empirical " << g17(got.real()) << " = -1 + 2/N";
}

// 2. (n^2) at 1/4 against a one-period brute force.
void criterion2(Result& r) {
    cd period = 0.0;
    for (std::int64_t n = 1; n <= 4; ++n) period += e(static_cast<double>(n * n % 4) / 4.0);
    period /= 4.0;
    const cd got = empirical_c(poly_seq({0, 0, 1}), UnitAngle::of(1, 4), 4000).value;
    const double err = std::abs(got - cd(0.5, 0.5));
    r.check(std::abs(period - cd(0.5, 0.5)) <= 1e-15, "period oracle");
    r.check(err <= 1e-12, "error " + g17(err));
    r.detail << "|empirical - (1+i)/2| = " << g17(err);
}

// 3. Half of delta_1 plus half of delta_{-1} along the primes.
void criterion3(Result& r) {
    const std::int64_t N = 10'000;
    const CircleMeasure mu({{UnitAngle::of(0, 1), 0.5}, {UnitAngle::of(1, 2), 0.5}}, {}, true);
    const double emp = empirical_wiener_avg(mu, primes_seq(sieve_limit_for_count(N)), N);
    const double lim = countable_spectrum_limit(mu, LimitFunction::poly_of_primes({0, 1}));
    r.check(emp == 1.0 / static_cast<double>(N), "empirical " + g17(emp));
    r.check(lim == 0.0, "limit " + g17(lim));
    r.detail << "empirical " << g17(emp) << ", limit " << g17(lim);
}

// 4. Classical Wiener lemma on 100 random rational measures.
void criterion4(Result& r) {
    std::mt19937_64 rng(4444);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int count = std::uniform_int_distribution<int>(1, 5)(rng);
        std::vector<Fraction> angles;
        while (static_cast<int>(angles.size()) < count) {
            const std::int64_t q = std::uniform_int_distribution<std::int64_t>(1, 32)(rng);
            const Fraction a(std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng), q);
            if (std::find(angles.begin(), angles.end(), a) == angles.end()) angles.push_back(a);
        }
        std::vector<double> w;
        double total = 0.0;
        for (int i = 0; i < count; ++i) {
            w.push_back(std::uniform_real_distribution<double>(0.01, 1.0)(rng));
            total += w.back();
        }
        std::vector<Atom> atoms;
        double squares = 0.0;
        std::int64_t L = 1;
        for (int i = 0; i < count; ++i) {
            w[static_cast<std::size_t>(i)] /= total;
            squares += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
            atoms.push_back({UnitAngle::of_fraction(angles[static_cast<std::size_t>(i)]), w[static_cast<std::size_t>(i)]});
            for (int j = 0; j < i; ++j) {
                L = std::lcm(L, (angles[static_cast<std::size_t>(i)] - angles[static_cast<std::size_t>(j)]).frac().den());
            }
        }
        const double emp = empirical_wiener_avg(CircleMeasure(atoms, {}, true), poly_seq({0, 1}), L * 100);
        worst = std::max(worst, std::abs(emp - squares));
    }
    r.check(worst <= 1e-10, "worst " + g17(worst));
    r.detail << "worst |empirical - sum w^2| over 100 measures = " << g17(worst);
}

// 5. The extremality table.
void criterion5(Result& r) {
    auto poly = [](Poly c) { return is_extremal_poly(c).verdict == Verdict::extremal; };
    auto primes = [](Poly c) { return is_extremal_poly_primes(c).verdict == Verdict::extremal; };
    int n = 0;
    auto expect = [&](bool got, bool want, const std::string& tag) {
        ++n;
        r.check(got == want, tag);
    };
    for (std::int64_t a = 0; a <= 20; ++a) expect(poly({a, 0, 1}), true, "n^2+" + std::to_string(a));
    expect(primes({4, 0, 1}), true, "p^2+4");
    expect(primes({2, 0, 1}), false, "p^2+2");
    expect(primes({5, 0, 1}), false, "p^2+5");
    for (int k = 1; k <= 9; ++k) {
        Poly c(static_cast<std::size_t>(k) + 1, 0);
        c[0] = 2;
        c.back() = 1;
        expect(primes(c), k % 2 == 1, "p^" + std::to_string(k) + "+2");
    }
    for (std::int64_t a = 1; a <= 12; ++a) {
        for (std::int64_t b = 0; b <= 12; ++b) {
            expect(poly({b, a}), std::gcd(a, b) == 1, "an+b");
            expect(primes({b, a}), std::gcd(a, b) == 1 && (a + b) % 2 == 1, "ap+b");
        }
    }
    for (std::int64_t a = 0; a <= 50; ++a) {
        bool want = true;
        for (std::int64_t p : {2, 3}) want = want && (a + 1) % p != 0;
        expect(primes({a, 0, 1}), want, "p^2+" + std::to_string(a));
    }
    r.detail << n << " verdicts";
}

// 6. Both deciders against the direct residue search.
void criterion6(Result& r) {
    std::int64_t total = 0, bad = 0;
    for (int deg = 1; deg <= 4; ++deg) {
        Poly c(static_cast<std::size_t>(deg) + 1, -5);
        while (true) {
            if (c.back() > 0) {
                ++total;
                const bool a = is_extremal_poly(c).verdict == Verdict::extremal;
                const bool b = is_extremal_poly_primes(c).verdict == Verdict::extremal;
                if (a != residue_search(c, false, 200) || b != residue_search(c, true, 200)) ++bad;
            }
            std::size_t i = 0;
            for (; i < c.size(); ++i) {
                if (c[i] < 5) {
                    ++c[i];
                    break;
                }
                c[i] = -5;
            }
            if (i == c.size()) break;
        }
    }
    r.check(bad == 0, std::to_string(bad) + " disagreements");
    r.detail << total << " polynomials, " << bad << " disagreements";
}

// 7. Orbit averages of diag(1, -1) and the limit formula.
void criterion7(Result& r) {
    const DiagonalContraction T({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 2)}});
    const double h = 1.0 / std::sqrt(2.0);
    const CVector x{h, h};
    const std::vector<Fraction> eig{Fraction(0), Fraction(1, 2)};
    auto formula = [&](bool primes) {
        double s = 0.0;
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) {
                const Fraction lambda = (eig[a] - eig[b]).frac();
                const Poly id{0, 1};
                const cd c = primes ? closed_form_c_poly_primes(id, lambda.num(), lambda.den())
                                    : closed_form_c_poly(id, lambda.num(), lambda.den());
                s += (c * (x[b] * std::conj(x[b])) * std::conj(x[a] * std::conj(x[a]))).real();
            }
        }
        return s;
    };
    const double avg_n = orbit_inner_avg(T, x, x, poly_seq({0, 1}), 1000);
    const double lim_n = theoretical_orbit_limit(T, x, x, LimitFunction::poly({0, 1}));
    const std::int64_t N = 10'000;
    const double avg_p = orbit_inner_avg(T, x, x, primes_seq(sieve_limit_for_count(N)), N);
    const double lim_p = theoretical_orbit_limit(T, x, x, LimitFunction::poly_of_primes({0, 1}));
    r.check(std::abs(avg_n - 0.5) <= 1e-10, "avg along n " + g17(avg_n));
    r.check(avg_p <= 1e-3, "avg along primes " + g17(avg_p));
    r.check(lim_p == 0.0, "limit along primes " + g17(lim_p));
    r.check(lim_n == formula(false), "limit along n vs formula");
    r.check(lim_p == formula(true), "limit along primes vs formula");
    r.detail << "n: " << g17(avg_n) << " (limit " << g17(lim_n) << "); primes: " << g17(avg_p) << " (limit "
             << g17(lim_p) << ")";
}

// 8. Gelfand probe outcomes.
void criterion8(Result& r) {
    const std::int64_t N = 10'000;
    const IntSequence primes = primes_seq(sieve_limit_for_count(N));
    const auto a = gelfand_probe(DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 3)}}),
                                 primes, N);
    const auto b = gelfand_probe(DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(0, 1)}}),
                                 primes, N);
    const auto c = gelfand_probe(DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 2)}}),
                                 poly_seq({0, 2}), N);
    r.check(a.verdict == "not-identity", "diag(1, e(1/3))");
    r.check(b.verdict == "identity", "identity");
    r.check(c.verdict == "not-identity" && c.explanation == "sequence not extremal", "diag(1, -1) along 2n");
    r.detail << a.verdict << " / " << b.verdict << " / " << c.verdict << " (" << c.explanation << ")";
}

// 9. Return times of an irrational rotation.
void criterion9(Result& r) {
    const long double alpha = std::sqrt(2.0L) - 1.0L;
    const long double width = 0.3L;
    const std::int64_t N = 100'000;
    const IntSequence seq = rotation_return_times(Rotation::irrational(alpha), {0.0L, width}, 0.0L, N);

    // Direct orbit oracle for the first terms and the density.
    std::int64_t hits = 0;
    std::vector<std::int64_t> first;
    for (std::int64_t n = 1; n <= N; ++n) {
        long double x = n * alpha;
        x -= std::floor(x);
        if (x < width) {
            ++hits;
            if (first.size() < 1000) first.push_back(n);
        }
    }
    r.check(seq.head(static_cast<std::int64_t>(first.size())) == first, "orbit scan mismatch");
    const double density = upper_density_estimate(seq, N);
    r.check(density == static_cast<double>(hits) / N, "density differs from direct count");
    r.check(std::abs(density - 0.3) <= 0.01, "density " + g17(density));

    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto dist = [](long double a, long double b) {
        long double d = a - b;
        d -= std::floor(d);
        return std::min(d, 1.0L - d);
    };
    double off = 0.0;
    for (int taken = 0; taken < 20;) {
        const long double t = u(rng);
        bool near = false;
        for (int k = -10; k <= 10; ++k) near = near || dist(t, k * alpha) < 0.01L;
        for (std::int64_t q = 1; q <= 10; ++q) {
            for (std::int64_t b = 0; b < q; ++b) near = near || dist(t, static_cast<long double>(b) / q) < 0.01L;
        }
        if (near) continue;
        ++taken;
        off = std::max(off, std::abs(empirical_c(seq, UnitAngle::irrational(t), N).value));
    }
    r.check(off <= 0.05, "off-spectrum " + g17(off));

    double on = 0.0;
    for (int k = -5; k <= 5; ++k) {
        long double t = -k * alpha;
        t -= std::floor(t);
        const double c = std::abs(empirical_c(seq, UnitAngle::irrational(t), N).value);
        // Fourier coefficient of the indicator of [0, 0.3) at k.
        const double hat =
            k == 0 ? 0.3 : std::abs((std::polar(1.0, -2.0 * std::numbers::pi * k * 0.3) - 1.0) / (-2.0 * std::numbers::pi * k));
        on = std::max(on, std::abs(c - hat / 0.3));
    }
    r.check(on <= 0.05, "on-spectrum " + g17(on));
    r.detail << "density " << g17(density) << ", max off-spectrum |c| " << g17(off) << ", max on-spectrum error "
             << g17(on);
}

// 10. (2n) inside a copy of Z.
void criterion10(Result& r) {
    const RealSequence rseq = RealSequence::poly({ExactReal::of(Fraction(0)), ExactReal::of(Fraction(2))});
    const LineMeasure mu({LineAtom::at(ExactReal::of(Fraction(1, 2)), 0.5), LineAtom::at(ExactReal::of(Fraction(-1, 2)), 0.5)},
                         true);
    for (std::int64_t N : {1, 2, 3, 10, 999, 10'000}) {
        r.check(empirical_wiener_avg(mu, rseq, N) == 1.0, "average at N=" + std::to_string(N));
    }
    r.check(!mu.is_dirac(), "measure is Dirac");
    const RExtremality v = classify_R_extremality(rseq);
    r.check(v.verdict == "not-R-extremal", "verdict " + v.verdict);
    bool same = v.counterexample.has_value() && v.counterexample->atoms().size() == 2 && !v.counterexample->is_dirac();
    if (same) {
        for (const auto& a : v.counterexample->atoms()) {
            same = same && a.exact && std::abs(a.exact->rational.to_double()) == 0.5 && a.exact->is_rational() &&
                   a.weight == cd(0.5, 0.0);
        }
        for (std::int64_t n = 1; n <= 1000; ++n) same = same && v.counterexample->fourier(rseq.term_exact(n)) == cd(1.0, 0.0);
    }
    r.check(same, "counterexample");
    r.detail << v.verdict << ", counterexample 1/2 (delta_{1/2} + delta_{-1/2})";
}

// 11. The CLI replay.
void criterion11(Result& r) {
    const std::string cmd = std::string(WIENERLAB_CLI) + " repro 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    r.check(pipe != nullptr, "cannot start " + cmd);
    if (!pipe) return;
    std::string out;
    char buf[4096];
    while (std::size_t k = fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.check(code == 0, "exit code " + std::to_string(code));
    const bool all = out.find("\"all_pass\": true") != std::string::npos;
    r.check(all, "report does not say all_pass");
    std::size_t checks = 0;
    for (std::size_t p = out.find("\"pass\": true"); p != std::string::npos; p = out.find("\"pass\": true", p + 1)) ++checks;
    r.check(checks == 10, std::to_string(checks) + " passing checks");
    r.detail << "exit " << code << ", " << checks << "/10 checks pass";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<void(Result&)> run;
    };
    const std::vector<Criterion> table{
        {1, "primes spectrum", 1.0, criterion1},
        {2, "polynomial closed form vs empirical", 0.1, criterion2},
        {3, "Wiener average along primes", 0.0, criterion3},
        {4, "classical Wiener lemma", 5.0, criterion4},
        {5, "extremality table", 1.0, criterion5},
        {6, "brute-force oracle agreement", 60.0, criterion6},
        {7, "operator identities", 0.0, criterion7},
        {8, "Gelfand probe", 1.0, criterion8},
        {9, "return-time ergodicity", 10.0, criterion9},
        {10, "copy of Z counterexample", 0.0, criterion10},
        {11, "repro subcommand", 120.0, criterion11},
    };
    int failures = 0;
    for (const auto& c : table) {
        Result r;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(r);
        } catch (const std::exception& ex) {
            r.check(false, std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_seconds > 0.0) r.check(secs < c.limit_seconds, "runtime " + g17(secs) + " s");
        if (!r.pass) ++failures;
        std::printf("criterion %2d  %s  %-38s %8.3f s  %s\n", c.id, r.pass ? "PASS" : "FAIL", c.name, secs,
                    r.detail.str().c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(table.size()) - failures, table.size());
    return failures == 0 ? 0 : 1;
}
