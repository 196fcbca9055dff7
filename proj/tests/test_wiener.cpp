#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "wienerlab/wiener.hpp"

using namespace wienerlab;
using cd = std::complex<double>;

namespace {

const ExactReal kXi = ExactReal::xi_multiple(Fraction(1));

CircleMeasure half_pm1() {
    return CircleMeasure({{UnitAngle::of(0, 1), 0.5}, {UnitAngle::of(1, 2), 0.5}}, {}, true);
}

CircleMeasure random_rational_measure(std::mt19937_64& rng, std::int64_t max_q, int max_atoms) {
    const int count = std::uniform_int_distribution<int>(1, max_atoms)(rng);
    std::vector<Atom> atoms;
    std::vector<double> raw;
    while (static_cast<int>(atoms.size()) < count) {
        const std::int64_t q = std::uniform_int_distribution<std::int64_t>(1, max_q)(rng);
        const UnitAngle a = UnitAngle::of(std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng), q);
        if (std::any_of(atoms.begin(), atoms.end(), [&](const Atom& x) { return x.angle.same_point(a); })) continue;
        atoms.push_back({a, 0.0});
        raw.push_back(std::uniform_real_distribution<double>(0.1, 1.0)(rng));
    }
    double total = 0.0;
    for (double r : raw) total += r;
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i].weight = raw[i] / total;
    return CircleMeasure(atoms, {}, true);
}

// Plain (1/N) sum |sum_a w_a e(k_n theta_a)|^2 straight from the definition.
double naive_wiener(const CircleMeasure& mu, const std::vector<std::int64_t>& coeffs, std::int64_t N) {
    long double s = 0.0L;
    for (std::int64_t n = 1; n <= N; ++n) {
        cd f = 0.0;
        for (const auto& a : mu.atoms()) {
            const std::int64_t q = a.angle.rational()->den();
            const std::int64_t b = a.angle.rational()->num();
            __int128 v = 0;
            for (std::size_t i = coeffs.size(); i-- > 0;) v = (v * n + coeffs[i]) % q;
            const auto r = static_cast<std::int64_t>((((v % q) + q) % q) * b % q);
            f += a.weight * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q));
        }
        s += std::norm(f);
    }
    return static_cast<double>(s / N);
}

}  // namespace

TEST_SUITE("wiener") {

TEST_CASE("empirical Wiener averages") {
    for (const IntSequence& s : {poly_seq({3, 1, 1}), primes_seq(1000), lacunary_seq(3)}) {
        CHECK(empirical_wiener_avg(dirac(UnitAngle::of(2, 7)), s, 150) == 1.0);
    }
    CHECK(empirical_wiener_avg(dirac(UnitAngle::irrational(0.3L)), poly_seq({0, 1}), 500) ==
          doctest::Approx(1.0).epsilon(1e-15));
    const std::int64_t N = 10'000;
    CHECK(empirical_wiener_avg(half_pm1(), primes_seq(sieve_limit_for_count(N)), N) == 1.0 / N);
    const CircleMeasure third({{UnitAngle::of(0, 1), 0.5}, {UnitAngle::of(1, 3), 0.5}}, {}, true);
    CHECK(std::abs(empirical_wiener_avg(third, poly_seq({0, 1}), 300) - 0.5) <= 1e-15);
}

TEST_CASE("ergodic limit") {
    CHECK(ergodic_limit(dirac(UnitAngle::of(1, 5))) == 1.0);
    CHECK(ergodic_limit(half_pm1()) == 0.5);
    CHECK(ergodic_limit(CircleMeasure({}, {{0.0L, 0.4L, 1.0}}, true)) == 0.0);
}

TEST_CASE("countable-spectrum limit") {
    CHECK(countable_spectrum_limit(half_pm1(), LimitFunction::poly_of_primes({0, 1})) == 0.0);
    CHECK(countable_spectrum_limit(dirac(UnitAngle::of(1, 4)), LimitFunction::poly({0, 0, 1})) == 1.0);
    const CircleMeasure irr({{UnitAngle::of(0, 1), 0.5}, {UnitAngle::symbolic(kXi), 0.5}}, {}, true);
    CHECK(countable_spectrum_limit(irr, LimitFunction::poly({1, 2, 1})) == 0.5);
    const CircleMeasure loose({{UnitAngle::of(0, 1), 0.5}, {UnitAngle::irrational(0.25L), 0.5}}, {}, true);
    CHECK_THROWS_AS(countable_spectrum_limit(loose, LimitFunction::poly({0, 1})), std::domain_error);
}

TEST_CASE("countable-spectrum limit is real and in [0, 1] for probability measures") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> coef(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const CircleMeasure mu = random_rational_measure(rng, 12, 4);
        std::vector<std::int64_t> c{coef(rng), coef(rng), 1 + trial % 2};
        const auto c_fn = trial % 2 ? LimitFunction::poly_of_primes(c) : LimitFunction::poly(c);
        const double v = countable_spectrum_limit(mu, c_fn);
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("coset upper bound") {
    CHECK(wiener_upper_bound(half_pm1(), SpectrumGroup::trivial()) == 0.5);
    CHECK(wiener_upper_bound(half_pm1(), SpectrumGroup::all_rationals()) == 1.0);
    CHECK(wiener_upper_bound(CircleMeasure({}, {{0.0L, 1.0L, 1.0}}, true), SpectrumGroup::roots(3)) == 0.0);
    const CircleMeasure quarters({{UnitAngle::of(0, 1), 0.25}, {UnitAngle::of(1, 4), 0.25}, {UnitAngle::of(1, 2), 0.5}},
                                 {}, true);
    CHECK(wiener_upper_bound(quarters, SpectrumGroup::roots(2)) == doctest::Approx(0.75 * 0.75 + 0.25 * 0.25));
}

TEST_CASE("ergodic case along (n) matches the sum of squared atoms") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 60; ++trial) {
        const CircleMeasure mu = random_rational_measure(rng, 20, 5);
        std::int64_t L = 1;
        for (const auto& a : mu.atoms()) L = lcm64(L, a.angle.rational()->den());
        CHECK(std::abs(empirical_wiener_avg(mu, poly_seq({0, 1}), 7 * L) - ergodic_limit(mu)) <= 1e-10);
    }
}

TEST_CASE("folded averages agree with the naive sum") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::int64_t> coef(-6, 6);
    for (int trial = 0; trial < 60; ++trial) {
        const CircleMeasure mu = random_rational_measure(rng, 15, 4);
        std::vector<std::int64_t> c{coef(rng), coef(rng), coef(rng), 1};
        const std::int64_t N = 1000 + 37 * trial;
        CHECK(std::abs(empirical_wiener_avg(mu, poly_seq(c), N) - naive_wiener(mu, c, N)) <= 1e-12);
    }
}

TEST_CASE("averages are identical for every worker count") {
    std::mt19937_64 rng(1);
    const CircleMeasure mu({{UnitAngle::of(1, 3), 0.3}, {UnitAngle::irrational(0.271828L), 0.7}}, {}, true);
    const IntSequence s = primes_seq(sieve_limit_for_count(50'000));
    const double one = empirical_wiener_avg(mu, s, 50'000, 1);
    CHECK(empirical_wiener_avg(mu, s, 50'000, 4) == one);
    CHECK(empirical_wiener_avg(mu, s, 50'000, 7) == one);
}

TEST_CASE("empirical average stays below the coset bound") {
    std::mt19937_64 rng(17);
    const std::int64_t N = 10'000;
    const std::vector<IntSequence> seqs{poly_seq({0, 2}), poly_seq({1, 0, 3}), primes_seq(sieve_limit_for_count(N)),
                                        poly_of_primes_seq({1, 1}, sieve_limit_for_count(N))};
    for (const auto& s : seqs) {
        const SpectrumGroup g = spectrum_group_from_table(spectrum_scan(s, 24));
        for (int trial = 0; trial < 10; ++trial) {
            const CircleMeasure mu = random_rational_measure(rng, 12, 4);
            CHECK(empirical_wiener_avg(mu, s, N) <= wiener_upper_bound(mu, g) + 0.05);
        }
    }
}

TEST_CASE("measures on the unimodular group have constant coefficients along the sequence") {
    std::mt19937_64 rng(4);
    const IntSequence s = poly_seq({5, 6});
    const std::int64_t d = unimodular_group_detect(spectrum_scan(s, 12));
    REQUIRE(d == 6);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Atom> atoms;
        double total = 0.0;
        cd hat = 0.0;
        for (std::int64_t b = 0; b < d; ++b) {
            const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            atoms.push_back({UnitAngle::of(b, d), w});
            hat += w * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(5 * b % d) / static_cast<double>(d));
            total += w;
        }
        for (auto& a : atoms) a.weight /= total;
        const double expected = std::norm(hat / total);
        CHECK(std::abs(empirical_wiener_avg(CircleMeasure(atoms, {}, true), s, 600) - expected) <= 1e-10);
    }
}

TEST_CASE("reports pick the exact formula") {
    const std::int64_t N = 10'000;
    const WienerReport p = wiener_report(half_pm1(), primes_seq(sieve_limit_for_count(N)), N);
    REQUIRE(p.formula_used.has_value());
    CHECK(to_string(*p.formula_used) == "countable-spectrum");
    CHECK(p.theoretical == 0.0);
    CHECK(p.empirical == 1.0 / N);
    CHECK(p.discrepancy == 1.0 / N);
    const auto j = p.to_json();
    for (const char* key : {"empirical", "theoretical", "discrepancy", "formula_used", "N"}) CHECK(j.contains(key));

    const WienerReport e = wiener_report(half_pm1(), poly_seq({3, 1}), 100);
    CHECK(to_string(*e.formula_used) == "ergodic");
    CHECK(e.theoretical == 0.5);

    const IntSequence ins = insertion_perturbed_even_seq(InsertSet::squares, 2000);
    CHECK_FALSE(wiener_report(half_pm1(), ins, 1000).theoretical.has_value());
    const WienerReport b = wiener_report(half_pm1(), ins, 1000, SpectrumGroup::roots(2));
    CHECK(to_string(*b.formula_used) == "upper-bound");
    CHECK(b.theoretical == 1.0);
}

TEST_CASE("density limits") {
    const auto zero = dlim_estimate(std::vector<double>(1000, 0.0));
    REQUIRE(zero.limit.has_value());
    CHECK(*zero.limit == 0.0);
    CHECK(zero.excluded_count == 0);
    CHECK(zero.density_value == 1.0);

    const std::int64_t N = 10'000;
    std::vector<double> squares(N, 0.0);
    for (std::int64_t k = 1; k * k <= N; ++k) squares[static_cast<std::size_t>(k * k - 1)] = 1.0;
    const auto sq = dlim_estimate(squares, 0.5);
    REQUIRE(sq.limit.has_value());
    CHECK(*sq.limit == 0.0);
    CHECK(sq.excluded_count == 100);
    CHECK(sq.excluded_density == doctest::Approx(std::sqrt(double(N)) / N));
    CHECK(sq.mean == doctest::Approx(0.01));

    std::vector<double> ones(N);
    for (std::int64_t n = 1; n <= N; ++n) ones[static_cast<std::size_t>(n - 1)] = std::abs(std::pow(-1.0, n));
    const auto one = dlim_estimate(ones);
    REQUIRE(one.limit.has_value());
    CHECK(*one.limit == 1.0);
    CHECK(one.density_value >= 0.0);
    CHECK(one.density_value <= 1.0);
}

TEST_CASE("Koopman-von Neumann diagnostic") {
    const std::int64_t N = 100'000;
    const auto c = kvn_equivalence_check(std::vector<double>(N, 1.0), N);
    CHECK(c.mean == 1.0);
    CHECK(c.mean_sq == 1.0);
    CHECK(c.dlim == 1.0);
    CHECK_FALSE(c.flagged);

    std::vector<double> h(N);
    for (std::int64_t n = 1; n <= N; ++n) h[static_cast<std::size_t>(n - 1)] = 1.0 - 1.0 / static_cast<double>(n);
    const auto hk = kvn_equivalence_check(h, N);
    CHECK(hk.mean == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(hk.mean_sq == doctest::Approx(1.0).epsilon(1e-3));
    REQUIRE(hk.dlim.has_value());
    CHECK(*hk.dlim == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_FALSE(hk.flagged);

    std::vector<double> even(N);
    for (std::int64_t n = 1; n <= N; ++n) even[static_cast<std::size_t>(n - 1)] = n % 2 == 0 ? 1.0 : 0.0;
    const auto ek = kvn_equivalence_check(even, N);
    CHECK(ek.mean == doctest::Approx(0.5));
    CHECK_FALSE(ek.dlim.has_value());
    CHECK(ek.flagged);
}

}  // TEST_SUITE
