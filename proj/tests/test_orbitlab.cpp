#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "wienerlab/extremality.hpp"
#include "wienerlab/orbitlab.hpp"
#include "wienerlab/wiener.hpp"

using namespace wienerlab;
using cd = std::complex<double>;

namespace {

const double h = 1.0 / std::sqrt(2.0);
const ExactReal kXi = ExactReal::xi_multiple(Fraction(1));
ExactReal rat(std::int64_t p, std::int64_t q = 1) { return ExactReal::of(Fraction(p, q)); }

DiagonalContraction pm1() { return DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 2)}}); }

// (1/N) sum |sum_j (r_j e(theta_j))^n x_j conj(y_j)|^2 along (n), by direct powers.
double naive_orbit_avg(const std::vector<std::pair<double, Fraction>>& eig, const CVector& x, const CVector& y,
                       std::int64_t N) {
    long double s = 0.0L;
    for (std::int64_t n = 1; n <= N; ++n) {
        cd ip = 0.0;
        for (std::size_t j = 0; j < eig.size(); ++j) {
            const Fraction a = eig[j].second;
            const double phase = static_cast<double>((static_cast<__int128>(n) * a.num()) % a.den()) / a.den();
            ip += std::pow(eig[j].first, static_cast<double>(n)) * std::polar(1.0, 2.0 * std::numbers::pi * phase) *
                  x[j] * std::conj(y[j]);
        }
        s += std::norm(ip);
    }
    return static_cast<double>(s / N);
}

}  // namespace

TEST_SUITE("orbitlab") {

TEST_CASE("orbit averages") {
    const DiagonalContraction id({{1.0, UnitAngle::of(0, 1)}});
    CHECK(orbit_inner_avg(id, {1.0}, {1.0}, primes_seq(1000), 100) == 1.0);
    CHECK(std::abs(orbit_inner_avg(pm1(), {h, h}, {h, h}, poly_seq({0, 1}), 1000) - 0.5) <= 1e-15);
    const std::int64_t N = 10'000;
    CHECK(orbit_inner_avg(pm1(), {h, h}, {h, h}, primes_seq(sieve_limit_for_count(N)), N) ==
          doctest::Approx(1.0 / N).epsilon(1e-12));
    CHECK_THROWS_AS(orbit_inner_avg(pm1(), {1.0}, {1.0}, poly_seq({0, 1}), 10), std::invalid_argument);
    CHECK_THROWS_AS(DiagonalContraction({{1.5, UnitAngle::of(0, 1)}}), std::invalid_argument);
}

TEST_CASE("tiny moduli underflow to zero") {
    const DiagonalContraction T({{1e-5, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(0, 1)}});
    const CVector d = T.power_along(poly_seq({0, 1}), 100);
    CHECK(d[0] == cd(0.0, 0.0));
    CHECK(d[1] == cd(1.0, 0.0));
}

TEST_CASE("theoretical limits") {
    const CVector x{h, h};
    CHECK(std::abs(theoretical_orbit_limit(pm1(), x, x, LimitFunction::poly({0, 1})) - 0.5) <= 1e-15);
    CHECK(theoretical_orbit_limit(pm1(), x, x, LimitFunction::poly_of_primes({0, 1})) == 0.0);
    const DiagonalContraction mixed({{1.0, UnitAngle::of(1, 3)}, {0.5, UnitAngle::of(0, 1)}});
    CHECK(theoretical_orbit_limit(mixed, {0.6, 0.8}, {0.0, 1.0}, LimitFunction::poly({0, 0, 1})) == 0.0);
}

TEST_CASE("ergodic limit formula along (n) with contracting coordinates") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::pair<double, Fraction>> eig;
        std::vector<Eigenvalue> entries;
        std::int64_t L = 1;
        double rmax = 0.0;
        for (int j = 0; j < 5; ++j) {
            const std::int64_t q = std::uniform_int_distribution<std::int64_t>(1, 8)(rng);
            const Fraction a(std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng), q);
            const double r = j < 3 ? 1.0 : std::uniform_real_distribution<double>(0.0, 0.9)(rng);
            if (r < 1.0) rmax = std::max(rmax, r);
            L = lcm64(L, a.den());
            eig.emplace_back(r, a);
            entries.push_back({r, UnitAngle::of_fraction(a)});
        }
        CVector x, y;
        double nx = 0.0, ny = 0.0;
        for (int j = 0; j < 5; ++j) {
            x.emplace_back(u(rng), u(rng));
            y.emplace_back(u(rng), u(rng));
            nx += std::norm(x.back());
            ny += std::norm(y.back());
        }
        for (auto& v : x) v /= std::sqrt(nx);
        for (auto& v : y) v /= std::sqrt(ny);
        const DiagonalContraction T(entries);
        const std::int64_t N = L * 50;
        const double avg = orbit_inner_avg(T, x, y, poly_seq({0, 1}), N);
        CHECK(std::abs(avg - naive_orbit_avg(eig, x, y, N)) <= 1e-12);
        const double limit = theoretical_orbit_limit(T, x, y, LimitFunction::poly({0, 1}));
        const double remainder = (2.0 * rmax / (1.0 - rmax) + rmax * rmax / (1.0 - rmax * rmax)) / N;
        CHECK(std::abs(avg - limit) <= 1e-10 + remainder);
    }
}

TEST_CASE("eigenvector test") {
    const DiagonalContraction T({{1.0, UnitAngle::of(1, 3)}, {1.0, UnitAngle::of(1, 2)}});
    const auto eig = eigenvector_extremality_test(T, {cd(0.0, 2.0), 0.0}, primes_seq(1000), 100);
    CHECK(std::abs(eig.average - 16.0) <= 1e-12);
    CHECK(eig.norm4 == 16.0);
    CHECK(eig.is_eigenvector);
    CHECK(eig.verdict == "consistent");

    const auto even = eigenvector_extremality_test(pm1(), {h, h}, poly_seq({0, 2}), 1000);
    CHECK(std::abs(even.average - 1.0) <= 1e-15);
    CHECK_FALSE(even.is_eigenvector);
    CHECK(even.verdict == "non-wiener-extremal-witness");

    const auto sq = eigenvector_extremality_test(pm1(), {h, h}, poly_seq({0, 0, 1}), 1000);
    CHECK(std::abs(sq.average - 0.5) <= 1e-15);
    CHECK_FALSE(sq.attains_norm4);
    CHECK(sq.verdict == "consistent");
}

TEST_CASE("classical limit test") {
    const DiagonalContraction T({{1.0, UnitAngle::of(1, 5)}, {1.0, UnitAngle::of(2, 5)}});
    const IntSequence s = poly_seq({1, 0, 1});
    const auto eig = classical_limit_test(T, {0.6, 0.0}, s, 200);
    CHECK(eig.passes);
    REQUIRE(eig.max_distance.has_value());
    CHECK(*eig.max_distance <= 1e-12);
    for (const auto& [n, lambda] : eig.phases) {
        const double phase = static_cast<double>(s.term_mod(n, 5)) / 5.0;
        CHECK(std::abs(lambda - std::conj(std::polar(1.0, 2.0 * std::numbers::pi * phase))) <= 1e-12);
    }
    CHECK_FALSE(classical_limit_test(pm1(), {h, h}, primes_seq(1000), 100).passes);
    const DiagonalContraction damped({{1.0, UnitAngle::of(0, 1)}, {0.5, UnitAngle::of(0, 1)}});
    CHECK_FALSE(classical_limit_test(damped, {h, h}, poly_seq({0, 1}), 100).passes);
}

TEST_CASE("recovered phases stay within the distance bound") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double eps = std::uniform_real_distribution<double>(0.0, 1e-4)(rng);
        const DiagonalContraction T({{1.0, UnitAngle::irrational(0.1L * trial)},
                                     {1.0 - eps, UnitAngle::irrational(0.1L * trial)},
                                     {1.0, UnitAngle::of(1, 7)}});
        const CVector x{cd(u(rng), u(rng)), cd(u(rng), u(rng)), cd(1e-4 * u(rng), 0.0)};
        const auto t = classical_limit_test(T, x, poly_seq({0, 7}), 60, 1e-3);
        if (t.passes) {
            REQUIRE(t.max_distance.has_value());
            CHECK(*t.max_distance <= t.distance_bound);
        }
    }
}

TEST_CASE("verdicts are invariant under scaling of x") {
    const cd alpha(-3.0, 0.5);
    const DiagonalContraction T({{1.0, UnitAngle::of(1, 4)}, {1.0, UnitAngle::of(3, 4)}, {0.7, UnitAngle::of(0, 1)}});
    const CVector x{0.3, cd(0.1, -0.2), 0.5};
    CVector ax;
    for (const auto& v : x) ax.push_back(alpha * v);
    for (const IntSequence& s : {poly_seq({0, 1}), poly_seq({0, 4}), primes_seq(1000)}) {
        const auto a = eigenvector_extremality_test(T, x, s, 120);
        const auto b = eigenvector_extremality_test(T, ax, s, 120);
        CHECK(a.verdict == b.verdict);
        CHECK(b.average == doctest::Approx(a.average * std::pow(std::abs(alpha), 4)));
        CHECK(classical_limit_test(T, x, s, 120).passes == classical_limit_test(T, ax, s, 120).passes);
    }
}

TEST_CASE("Gelfand probe") {
    const std::int64_t N = 10'000;
    const IntSequence primes = primes_seq(sieve_limit_for_count(N));
    const DiagonalContraction id({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(0, 1)}});
    CHECK(gelfand_probe(id, primes, N).verdict == "identity");
    const auto even = gelfand_probe(pm1(), poly_seq({0, 2}), N);
    CHECK(even.orbit_condition);
    CHECK(even.verdict == "not-identity");
    CHECK(even.explanation == "sequence not extremal");
    const auto third =
        gelfand_probe(DiagonalContraction({{1.0, UnitAngle::of(0, 1)}, {1.0, UnitAngle::of(1, 3)}}), primes, N);
    CHECK_FALSE(third.orbit_condition);
    CHECK(third.verdict == "not-identity");
    CHECK(gelfand_probe(id, lacunary_seq(2), 100).verdict == "inconclusive");
}

TEST_CASE("semigroups along real sequences") {
    const std::int64_t N = 20'000;
    const DiagonalSemigroup single({SemigroupMode::exact(0.0, kXi)});
    const auto one = semigroup_orbit_avg(single, {1.0}, {1.0}, RealSequence::poly({rat(0), rat(1)}), 100);
    CHECK(one.empirical_avg == doctest::Approx(1.0).epsilon(1e-15));

    const CVector x{h, h};
    const RealSequence shifted = RealSequence::poly({kXi, rat(1)});
    const DiagonalSemigroup halves({SemigroupMode::exact(0.0, rat(0)), SemigroupMode::exact(0.0, rat(1, 2))});
    const auto good = semigroup_orbit_avg(halves, x, x, shifted, N);
    REQUIRE(good.theoretical.has_value());
    CHECK(*good.theoretical == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(good.formula_value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(good.empirical_avg - 0.5) <= 1e-3);

    // With frequencies (0, 1), e(n + xi) = e(xi) for every n: the limit is cos^2(pi xi).
    const DiagonalSemigroup unit({SemigroupMode::exact(0.0, rat(0)), SemigroupMode::exact(0.0, rat(1))});
    const auto lattice = semigroup_orbit_avg(unit, x, x, shifted, N);
    const double c2 = std::pow(std::cos(std::numbers::pi * std::sqrt(2.0)), 2);
    REQUIRE(lattice.theoretical.has_value());
    CHECK(*lattice.theoretical == doctest::Approx(c2).epsilon(1e-12));
    CHECK(lattice.empirical_avg == doctest::Approx(c2).epsilon(1e-9));

    const auto copy = semigroup_orbit_avg(unit, x, x, RealSequence::poly({rat(0), rat(1)}), N);
    CHECK(copy.empirical_avg == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(copy.formula_value == doctest::Approx(0.5).epsilon(1e-12));
    bool flagged = false;
    for (const auto& v : copy.verdicts) flagged = flagged || v.find("not-R-extremal") != std::string::npos;
    CHECK(flagged);

    const DiagonalSemigroup decaying({SemigroupMode::exact(0.0, rat(0)), SemigroupMode::exact(1.0, rat(1, 3))});
    const auto d = semigroup_orbit_avg(decaying, x, x, RealSequence::poly({rat(0), rat(1)}), 1000);
    CHECK(d.empirical_avg == doctest::Approx(0.25).epsilon(1e-3));
    CHECK_THROWS_AS(semigroup_orbit_avg(single, {1.0}, {1.0}, RealSequence::poly({rat(0), rat(-1)}), 10),
                    std::invalid_argument);
}

TEST_CASE("orbit report") {
    const auto r = orbit_report(pm1(), {h, h}, {h, h}, primes_seq(sieve_limit_for_count(10'000)), 10'000);
    REQUIRE(r.theoretical.has_value());
    CHECK(*r.theoretical == 0.0);
    CHECK(r.eigen_support.size() == 2);
    const auto j = r.to_json();
    CHECK(j.at("N") == 10'000);
}

}  // TEST_SUITE
