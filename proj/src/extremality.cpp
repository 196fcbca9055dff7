#include "wienerlab/extremality.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "wienerlab/summation.hpp"

namespace wienerlab {

namespace {

std::vector<std::int64_t> trimmed(std::span<const std::int64_t> coeffs) {
    std::vector<std::int64_t> c(coeffs.begin(), coeffs.end());
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) throw std::invalid_argument("the zero polynomial has no extremality verdict");
    return c;
}

std::int64_t degree(const std::vector<std::int64_t>& c) { return static_cast<std::int64_t>(c.size()) - 1; }

std::vector<std::int64_t> primes_upto(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p <= n; ++p) {
        if (is_prime64(p)) out.push_back(p);
    }
    return out;
}

// Smallest admissible r in [1, q] with P(r) != 0 mod q, scanning at most
// `budget` admissible candidates.
std::optional<Witness> find_witness(const std::vector<std::int64_t>& c, std::int64_t q, bool units_only,
                                    std::int64_t budget) {
    std::int64_t tried = 0;
    for (std::int64_t r = 1; r <= q && tried < budget; ++r) {
        if (units_only && gcd64(r, q) != 1) continue;
        ++tried;
        const std::int64_t v = eval_poly_mod(c, r, q);
        if (v != 0) return Witness{q, r, v};
    }
    return std::nullopt;
}

bool vanishes_on_units(const std::vector<std::int64_t>& c, std::int64_t q) {
    for (std::int64_t r = 1; r < q; ++r) {
        if (gcd64(r, q) == 1 && eval_poly_mod(c, r, q) != 0) return false;
    }
    return true;
}

std::int64_t tail_start(std::int64_t N, double tail_fraction) {
    if (N < 1) throw std::invalid_argument("probe needs N >= 1");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("tail_fraction must lie in (0, 1]");
    const auto len = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(static_cast<double>(N) * tail_fraction)));
    return N - len + 1;
}

// r with b = r * a, if any.
std::optional<Fraction> rational_ratio(const ExactReal& b, const ExactReal& a) {
    if (b.is_zero()) return Fraction(0);
    if (!a.xi.is_zero()) {
        const Fraction r = b.xi / a.xi;
        if (b.rational == r * a.rational) return r;
        return std::nullopt;
    }
    if (!b.xi.is_zero()) return std::nullopt;
    return b.rational / a.rational;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::extremal: return "extremal";
        case Verdict::not_extremal: return "not-extremal";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "";
}

nlohmann::json ExtremalityVerdict::to_json() const {
    nlohmann::json j;
    j["verdict"] = to_string(verdict);
    j["coeffs"] = coeffs;
    j["units_only"] = units_only;
    j["method"] = method;
    j["proof"] = proof;
    nlohmann::json cert = nlohmann::json::object();
    if (bad_q) cert["bad_q"] = *bad_q;
    if (!witnesses.empty()) {
        nlohmann::json w = nlohmann::json::array();
        for (const auto& x : witnesses) w.push_back({{"q", x.q}, {"r", x.r}, {"residue", x.residue}});
        cert["witnesses"] = w;
    }
    j["certificate"] = cert;
    if (!evidence.empty()) {
        nlohmann::json e = nlohmann::json::array();
        for (const auto& [q, v] : evidence) e.push_back({{"q", q}, {"value", v}});
        j["evidence"] = e;
    }
    j["notes"] = notes;
    return j;
}

FixedDivisor fixed_divisor(std::span<const std::int64_t> coeffs) {
    const auto c = trimmed(coeffs);
    FixedDivisor fd;
    fd.value = 0;
    for (std::int64_t x = 0; x <= degree(c); ++x) {
        const std::int64_t v = eval_poly_checked(c, x);
        fd.sample_values.push_back(v);
        fd.value = gcd64(fd.value, v);
    }
    return fd;
}

ExtremalityVerdict is_extremal_poly(std::span<const std::int64_t> coeffs) {
    const auto c = trimmed(coeffs);
    const std::int64_t deg = degree(c);
    const FixedDivisor fd = fixed_divisor(c);
    ExtremalityVerdict v;
    v.coeffs = c;
    v.method = "fixed divisor gcd(P(0..deg))";
    if (fd.value != 1) {
        v.verdict = Verdict::not_extremal;
        v.bad_q = prime_divisors(fd.value).front();
        v.notes.push_back("fixed divisor " + std::to_string(fd.value) + " divides every P(n)");
        return v;
    }
    v.verdict = Verdict::extremal;
    std::size_t anchor = 0;
    while (fd.sample_values[anchor] == 0) ++anchor;
    std::set<std::int64_t> decisive;
    for (std::int64_t p : primes_upto(deg + 1)) decisive.insert(p);
    for (std::int64_t p : prime_divisors(fd.sample_values[anchor])) decisive.insert(p);
    for (std::int64_t q : decisive) {
        // Some P(r), r in 1..deg+1, escapes q because those values have gcd 1.
        auto w = find_witness(c, q, false, deg + 1);
        if (!w) throw std::logic_error("fixed divisor 1 but no witness at q=" + std::to_string(q));
        v.witnesses.push_back(*w);
    }
    v.notes.push_back("every other prime q is escaped by r = " + std::to_string(anchor) + " mod q since P(" +
                      std::to_string(anchor) + ") = " + std::to_string(fd.sample_values[anchor]));
    v.notes.push_back("a composite q inherits the witness of any prime factor");
    return v;
}

ExtremalityVerdict is_extremal_poly_primes(std::span<const std::int64_t> coeffs) {
    const auto c = trimmed(coeffs);
    const std::int64_t deg = degree(c);
    ExtremalityVerdict v;
    v.coeffs = c;
    v.units_only = true;
    v.method = "bad primes: divisors of the content and primes q <= deg+1 vanishing on all units";

    std::int64_t content = 0;
    for (std::int64_t x : c) content = gcd64(content, x);
    std::set<std::int64_t> bad;
    if (content > 1) {
        for (std::int64_t p : prime_divisors(content)) bad.insert(p);
        v.notes.push_back("content " + std::to_string(content));
    }
    for (std::int64_t p : primes_upto(deg + 1)) {
        if (vanishes_on_units(c, p)) {
            bad.insert(p);
            v.notes.push_back("P vanishes on every unit mod " + std::to_string(p));
        }
    }
    if (!bad.empty()) {
        v.verdict = Verdict::not_extremal;
        v.bad_q = *bad.begin();
        return v;
    }
    v.verdict = Verdict::extremal;
    std::set<std::int64_t> decisive;
    for (std::int64_t p : primes_upto(deg + 1)) decisive.insert(p);
    const std::int64_t at_one = eval_poly_checked(c, 1);
    if (at_one != 0) {
        for (std::int64_t p : prime_divisors(at_one)) decisive.insert(p);
    }
    for (std::int64_t q : decisive) {
        // A prime q beyond deg+1 not dividing the content has at most deg roots.
        auto w = find_witness(c, q, true, deg + 1);
        if (!w) throw std::logic_error("no unit witness at q=" + std::to_string(q));
        v.witnesses.push_back(*w);
    }
    v.notes.push_back(at_one != 0 ? "every other prime q is escaped by r = 1"
                                  : "every other prime q exceeds deg+1 and P mod q has at most deg roots");
    v.notes.push_back("a composite q inherits the witness of any prime factor");
    return v;
}

bool replay_certificate(const ExtremalityVerdict& v) {
    std::vector<std::int64_t> c;
    try {
        c = trimmed(v.coeffs);
    } catch (const std::invalid_argument&) {
        return false;
    }
    for (const auto& w : v.witnesses) {
        if (w.q < 2 || w.r < 1 || w.r > w.q) return false;
        if (v.units_only && gcd64(w.r, w.q) != 1) return false;
        const std::int64_t res = eval_poly_mod(c, w.r, w.q);
        if (res == 0 || res != w.residue) return false;
    }
    if (v.bad_q) {
        const std::int64_t q = *v.bad_q;
        if (q < 2) return false;
        // Beyond deg+1 a prime q is bad only if P vanishes identically mod q,
        // which deg+1 distinct admissible zeros already prove.
        const std::int64_t deg = degree(c);
        if (q > deg + 1 && !is_prime64(q)) return false;
        const std::int64_t upto = std::min(q, deg + 1);
        std::int64_t checked = 0;
        for (std::int64_t r = 1; r <= (q > deg + 1 ? upto : q); ++r) {
            if (v.units_only && gcd64(r, q) != 1) continue;
            ++checked;
            if (eval_poly_mod(c, r, q) != 0) return false;
        }
        if (checked == 0) return false;
    }
    if (v.verdict == Verdict::extremal && v.bad_q) return false;
    if (v.verdict == Verdict::not_extremal && !v.bad_q) return false;
    return true;
}

ExtremalityVerdict wiener_extremal_verdict_poly(std::span<const std::int64_t> coeffs) {
    auto v = is_extremal_poly(coeffs);
    v.method += "; Wiener extremal iff extremal for polynomial sequences";
    return v;
}

ExtremalityVerdict wiener_extremal_verdict_poly_primes(std::span<const std::int64_t> coeffs) {
    auto v = is_extremal_poly_primes(coeffs);
    v.method += "; Wiener extremal iff extremal for polynomials of primes";
    return v;
}

std::optional<ExtremalityVerdict> known_extremality(const IntSequence& seq) {
    switch (seq.kind()) {
        case SequenceKind::poly: return is_extremal_poly(seq.coeffs());
        case SequenceKind::primes:
        case SequenceKind::poly_of_primes: return is_extremal_poly_primes(seq.coeffs());
        default: return std::nullopt;
    }
}

std::vector<RootOfUnityBehaviour> roots_of_unity_convergence_probe(const IntSequence& seq, std::int64_t q_max,
                                                                   std::int64_t N, double tail_fraction) {
    const std::int64_t start = tail_start(N, tail_fraction);
    std::vector<RootOfUnityBehaviour> out;
    for (std::int64_t q = 2; q <= q_max; ++q) {
        std::set<std::int64_t> residues;
        for (std::int64_t n = start; n <= N; ++n) residues.insert(seq.term_mod(n, q));
        for (std::int64_t b = 1; b < q; ++b) {
            if (gcd64(b, q) != 1) continue;
            RootOfUnityBehaviour r;
            r.angle = Fraction(b, q);
            r.converges_to_one = true;
            for (std::int64_t k : residues) {
                const std::int64_t e = mulmod(k, b, q);
                if (e != 0) r.converges_to_one = false;
                r.max_deviation = std::max(r.max_deviation, std::abs(unit_root(e, q) - 1.0));
            }
            out.push_back(r);
        }
    }
    return out;
}

ExtremalityVerdict bounded_gaps_extremality_check(const IntSequence& seq, std::int64_t q_max, std::int64_t horizon,
                                                  std::int64_t floor) {
    if (horizon < 2) throw std::invalid_argument("bounded-gaps check needs horizon >= 2");
    ExtremalityVerdict v;
    v.proof = false;
    v.method = "bounded-gaps count probe: #{n <= horizon : q does not divide k_n} >= " + std::to_string(floor);
    const GapProbe gaps = gap_liminf_probe(seq, horizon);
    v.notes.push_back("smallest gap " + std::to_string(gaps.min_gap) + " seen " + std::to_string(gaps.repeat_count) +
                      " times (recurring small gaps are assumed, not proven)");
    v.verdict = Verdict::extremal;
    for (std::int64_t q = 2; q <= q_max; ++q) {
        std::int64_t count = 0;
        for (std::int64_t n = 1; n <= horizon; ++n) {
            if (seq.term_mod(n, q) != 0) ++count;
        }
        v.evidence.emplace_back(q, static_cast<double>(count));
        if (count < floor && v.verdict == Verdict::extremal) {
            v.verdict = Verdict::not_extremal;
            v.bad_q = q;
        }
    }
    return v;
}

ExtremalityVerdict pos_density_wiener_check(const IntSequence& seq, std::int64_t q_max, std::int64_t horizon,
                                            double floor) {
    if (horizon < 1) throw std::invalid_argument("density check needs horizon >= 1");
    ExtremalityVerdict v;
    v.proof = false;
    v.method = "positive-density probe: density of {n : q does not divide k_n} > " + std::to_string(floor);
    v.notes.push_back("upper density estimate of the sequence: " +
                      std::to_string(upper_density_estimate(seq, horizon)));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(std::max<std::int64_t>(q_max + 1, 2)), 0);
    for (std::int64_t n = 1; n <= horizon; ++n) {
        for (std::int64_t q = 2; q <= q_max; ++q) {
            if (seq.term_mod(n, q) != 0) ++counts[static_cast<std::size_t>(q)];
        }
    }
    v.verdict = Verdict::extremal;
    for (std::int64_t q = 2; q <= q_max; ++q) {
        const double density = static_cast<double>(counts[static_cast<std::size_t>(q)]) / static_cast<double>(horizon);
        v.evidence.emplace_back(q, density);
        if (density <= floor && v.verdict == Verdict::extremal) {
            v.verdict = Verdict::not_extremal;
            v.bad_q = q;
        }
    }
    return v;
}

MeasureProbe measure_extremality_probe(const CircleMeasure& mu, const IntSequence& seq, std::int64_t N,
                                       double tail_fraction, double tol) {
    if (!mu.probability()) throw std::invalid_argument("extremality probe needs a probability measure");
    const std::int64_t start = tail_start(N, tail_fraction);
    MeasureProbe p;
    KahanSum all, tail;
    p.tail_min_abs_fourier = 1.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double a = std::abs(fourier_coeff_at(mu, seq, n));
        all.add(a * a);
        if (n >= start) {
            tail.add(a * a);
            p.tail_min_abs_fourier = std::min(p.tail_min_abs_fourier, a);
        }
    }
    p.wiener_avg = all.value() / static_cast<double>(N);
    p.tail_wiener_avg = tail.value() / static_cast<double>(N - start + 1);
    p.mu_is_dirac = mu.is_dirac();
    const bool consistent = p.tail_min_abs_fourier >= 1.0 - tol;
    p.classification = consistent ? "dirac-consistent" : "witness-absent";
    p.exhibits_non_extremality = consistent && !p.mu_is_dirac;
    return p;
}

nlohmann::json RExtremality::to_json() const {
    nlohmann::json j;
    j["verdict"] = verdict;
    j["reason"] = reason;
    if (lattice_step) j["lattice_step"] = lattice_step->str();
    if (counterexample) {
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& a : counterexample->atoms()) {
            nlohmann::json x{{"position", static_cast<double>(a.position)},
                             {"w_re", a.weight.real()},
                             {"w_im", a.weight.imag()}};
            if (a.exact) x["exact"] = a.exact->str();
            atoms.push_back(x);
        }
        j["counterexample"] = {{"atoms", atoms}, {"probability", true}};
    }
    return j;
}

RExtremality is_R_extremal_affine(const ExactReal& a, const ExactReal& b, std::span<const std::int64_t> q_coeffs,
                                  long double xi_value) {
    if (a.is_zero()) throw std::invalid_argument("scale a must be nonzero");
    const auto Q = trimmed(q_coeffs);
    if (degree(Q) < 1) throw std::invalid_argument("Q must be non-constant");
    RExtremality out;
    const auto r = rational_ratio(b, a);
    if (!r) {
        out.verdict = "R-Wiener-extremal";
        out.reason = "non-constant part lies in aZ and the constant term is rationally independent of a";
        return out;
    }
    // k_n = (a/t) (t Q(n) + s) with b = (s/t) a, and the integer factor is
    // always divisible by its fixed divisor d.
    std::vector<std::int64_t> shifted;
    for (std::int64_t x : Q) shifted.push_back(narrow_checked(static_cast<i128>(x) * r->den(), "t*Q"));
    shifted[0] = narrow_checked(static_cast<i128>(shifted[0]) + r->num(), "t*Q+s");
    const std::int64_t d = fixed_divisor(shifted).value;
    const ExactReal step = a * ExactReal::of(Fraction(d, r->den()));
    out.lattice_step = step;
    out.verdict = "not-R-extremal";
    out.reason = "every k_n lies in " + step.str() + " Z";
    std::vector<LineAtom> atoms;
    if (step.is_rational()) {
        const Fraction inv = Fraction(1) / step.rational;
        atoms.push_back(LineAtom::at(ExactReal::of(inv), 0.5, xi_value));
        atoms.push_back(LineAtom::at(ExactReal::of(-inv), 0.5, xi_value));
    } else {
        const long double inv = 1.0L / step.value(xi_value);
        atoms.push_back({inv, std::nullopt, 0.5});
        atoms.push_back({-inv, std::nullopt, 0.5});
    }
    out.counterexample = LineMeasure(std::move(atoms), true, xi_value);
    return out;
}

std::optional<AffineForm> affine_form(const RealSequence& rseq) {
    std::vector<ExactReal> c = rseq.coeffs();
    while (!c.empty() && c.back().is_zero()) c.pop_back();
    if (c.size() < 2) throw std::invalid_argument("R-extremality needs a non-constant polynomial");
    const ExactReal base = c.back();
    std::vector<Fraction> ratios{Fraction(0)};
    for (std::size_t i = 1; i < c.size(); ++i) {
        const auto r = rational_ratio(c[i], base);
        if (!r) return std::nullopt;
        ratios.push_back(*r);
    }
    std::int64_t L = 1;
    for (const auto& r : ratios) L = lcm64(L, r.den());
    std::vector<std::int64_t> ints;
    std::int64_t g = 0;
    for (const auto& r : ratios) {
        ints.push_back(narrow_checked(static_cast<i128>(r.num()) * (L / r.den()), "coefficient ratio"));
        g = gcd64(g, ints.back());
    }
    for (auto& x : ints) x /= g;
    return AffineForm{base * ExactReal::of(Fraction(g, L)), c[0], std::move(ints)};
}

RExtremality classify_R_extremality(const RealSequence& rseq) {
    const auto form = affine_form(rseq);
    if (!form) {
        RExtremality out;
        out.verdict = "R-Wiener-extremal";
        out.reason = "rationally independent non-constant coefficients make the sequence ergodic";
        return out;
    }
    return is_R_extremal_affine(form->a, form->b, form->Q, rseq.xi_value());
}

}  // namespace wienerlab
