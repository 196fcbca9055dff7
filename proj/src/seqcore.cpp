#include "wienerlab/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wienerlab {

namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

std::int64_t isqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<i128>(r) * r > n) --r;
    while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::int64_t> trimmed(std::vector<std::int64_t> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    return coeffs;
}

void require_increasing_poly(const std::vector<std::int64_t>& coeffs) {
    if (coeffs.size() < 2) throw std::invalid_argument("polynomial sequence needs degree >= 1");
    if (coeffs.back() <= 0) throw std::invalid_argument("polynomial sequence needs a positive leading coefficient");
}

bool fits(std::span<const std::int64_t> coeffs, std::int64_t x) {
    try {
        (void)eval_poly_checked(coeffs, x);
        return true;
    } catch (const std::overflow_error&) {
        return false;
    }
}

// Largest n in [0, hi] with pred(m) true for all m <= n, assuming pred is a
// prefix property.
template <typename Pred>
std::int64_t last_true(std::int64_t hi, Pred&& pred) {
    if (hi < 1 || !pred(1)) return 0;
    std::int64_t lo = 1;
    std::int64_t step = 2;
    while (step < hi && pred(step)) {
        lo = step;
        step = step > hi / 2 ? hi : step * 2;
    }
    if (step >= hi && pred(hi)) return hi;
    std::int64_t bad = std::min(step, hi);
    while (bad - lo > 1) {
        std::int64_t mid = lo + (bad - lo) / 2;
        (pred(mid) ? lo : bad) = mid;
    }
    return lo;
}

// Index from which P(n+1) - P(n) > 0, by a Cauchy bound on the roots of the
// difference polynomial.
std::int64_t poly_monotone_from(const std::vector<std::int64_t>& c) {
    const std::size_t d = c.size() - 1;
    if (d == 1) return 1;
    std::vector<long double> diff(d, 0.0L);
    for (std::size_t i = 1; i <= d; ++i) {
        long double binom = 1.0L;
        for (std::size_t k = 0; k < i; ++k) {
            diff[k] += static_cast<long double>(c[i]) * binom;
            binom = binom * static_cast<long double>(i - k) / static_cast<long double>(k + 1);
        }
    }
    long double lead = diff[d - 1];
    long double bound = 0.0L;
    for (std::size_t k = 0; k + 1 < d; ++k) bound = std::max(bound, std::abs(diff[k] / lead));
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(1.0L + bound)));
}

nlohmann::json coeff_json(const std::vector<std::int64_t>& coeffs) {
    return nlohmann::json(coeffs);
}

}  // namespace

struct SequenceBuilder {
    static IntSequence make() { return IntSequence(); }
    static IntSequence& set(IntSequence& s, SequenceKind kind, nlohmann::json params) {
        s.kind_ = kind;
        s.spec_ = {{"kind", to_string(kind)}, {"params", std::move(params)}};
        return s;
    }
    static IntSequence enumerated(SequenceKind kind, nlohmann::json params, std::vector<std::int64_t> terms) {
        IntSequence s;
        set(s, kind, std::move(params));
        s.capacity_ = static_cast<std::int64_t>(terms.size());
        s.max_safe_index_ = *s.capacity_;
        s.terms_ = std::make_shared<const std::vector<std::int64_t>>(std::move(terms));
        return s;
    }
    static IntSequence& coeffs(IntSequence& s, std::vector<std::int64_t> c) {
        s.coeffs_ = std::move(c);
        return s;
    }
    static IntSequence& sieve(IntSequence& s, std::shared_ptr<const PrimeSieve> sv) {
        s.sieve_ = std::move(sv);
        return s;
    }
    static IntSequence& limits(IntSequence& s, std::int64_t max_safe, std::optional<std::int64_t> cap,
                               std::int64_t monotone) {
        s.max_safe_index_ = max_safe;
        s.capacity_ = cap;
        s.monotone_from_ = monotone;
        return s;
    }
    static IntSequence& base(IntSequence& s, std::int64_t b) {
        s.base_ = b;
        return s;
    }
    static IntSequence& warn(IntSequence& s, std::string w) {
        s.warnings_.push_back(std::move(w));
        return s;
    }
};

// ---------------------------------------------------------------- sieve

PrimeSieve::PrimeSieve(std::int64_t limit) : limit_(limit) {
    if (limit < 2) return;
    primes_.push_back(2);
    const std::int64_t root = isqrt(limit);

    std::vector<std::int64_t> base;
    {
        std::vector<bool> composite(static_cast<std::size_t>(root + 1), false);
        for (std::int64_t i = 3; i <= root; i += 2) {
            if (composite[static_cast<std::size_t>(i)]) continue;
            base.push_back(i);
            for (std::int64_t j = i * i; j <= root; j += 2 * i) composite[static_cast<std::size_t>(j)] = true;
        }
    }

    constexpr std::int64_t kSegmentOdds = 1 << 18;
    std::vector<std::uint8_t> mark;
    for (std::int64_t low = 3; low <= limit; low += 2 * kSegmentOdds) {
        const std::int64_t high = std::min(limit, low + 2 * kSegmentOdds - 1);
        const std::int64_t slots = (high - low) / 2 + 1;
        mark.assign(static_cast<std::size_t>(slots), 1);
        for (std::int64_t p : base) {
            if (p * p > high) break;
            std::int64_t start = std::max(p * p, (low + p - 1) / p * p);
            if (start % 2 == 0) start += p;
            for (std::int64_t j = start; j <= high; j += 2 * p) mark[static_cast<std::size_t>((j - low) / 2)] = 0;
        }
        for (std::int64_t i = 0; i < slots; ++i) {
            if (mark[static_cast<std::size_t>(i)]) primes_.push_back(low + 2 * i);
        }
    }
}

std::int64_t PrimeSieve::nth(std::int64_t n) const {
    if (n < 1 || n > count()) {
        throw std::out_of_range("prime index " + std::to_string(n) + " beyond sieve capacity " +
                                std::to_string(count()) + " (limit " + std::to_string(limit_) + ")");
    }
    return primes_[static_cast<std::size_t>(n - 1)];
}

std::int64_t PrimeSieve::count_upto(std::int64_t x) const {
    if (x > limit_) throw std::out_of_range("pi(x) requested beyond sieve limit");
    return std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin();
}

bool PrimeSieve::contains(std::int64_t x) const {
    if (x > limit_) throw std::out_of_range("primality query beyond sieve limit");
    return std::binary_search(primes_.begin(), primes_.end(), x);
}

std::int64_t sieve_limit_for_count(std::int64_t n) {
    if (n < 6) return 15;
    auto ln = std::log(static_cast<long double>(n));
    return static_cast<std::int64_t>(static_cast<long double>(n) * (ln + std::log(ln))) + 1;
}

// ---------------------------------------------------------------- names

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::poly: return "poly";
        case SequenceKind::primes: return "primes";
        case SequenceKind::poly_of_primes: return "poly-of-primes";
        case SequenceKind::rotation_return: return "rotation-return";
        case SequenceKind::poly_return: return "poly-return";
        case SequenceKind::insertion_perturbed: return "insertion-perturbed";
        case SequenceKind::lacunary: return "lacunary";
    }
    return "?";
}

SequenceKind sequence_kind_from_string(const std::string& name) {
    for (auto k : {SequenceKind::poly, SequenceKind::primes, SequenceKind::poly_of_primes,
                   SequenceKind::rotation_return, SequenceKind::poly_return, SequenceKind::insertion_perturbed,
                   SequenceKind::lacunary}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown sequence kind '" + name + "'");
}

std::string to_string(InsertSet set) {
    switch (set) {
        case InsertSet::none: return "none";
        case InsertSet::squares: return "squares";
        case InsertSet::primes: return "primes";
    }
    return "?";
}

InsertSet insert_set_from_string(const std::string& name) {
    if (name == "none") return InsertSet::none;
    if (name == "squares") return InsertSet::squares;
    if (name == "primes") return InsertSet::primes;
    throw std::invalid_argument("unknown insert set '" + name + "'");
}

// ---------------------------------------------------------------- polynomials

std::int64_t eval_poly_checked(std::span<const std::int64_t> coeffs, std::int64_t x) {
    constexpr i128 kGuard = static_cast<i128>(1) << 100;
    i128 acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * x + *it;
        if (acc > kGuard || acc < -kGuard) throw std::overflow_error("polynomial value exceeds 64-bit range");
    }
    return narrow_checked(acc, "polynomial value");
}

std::int64_t eval_poly_mod(std::span<const std::int64_t> coeffs, std::int64_t x, std::int64_t q) {
    if (q < 1) throw std::invalid_argument("modulus must be >= 1");
    const std::int64_t xr = mod_floor(x, q);
    std::int64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = mod_floor(static_cast<i128>(acc) * xr + *it, q);
    }
    return acc;
}

// ---------------------------------------------------------------- IntSequence

std::string IntSequence::describe() const {
    return spec_.dump();
}

std::int64_t IntSequence::term(std::int64_t n) const {
    if (n < 1) throw std::out_of_range("sequence index starts at 1");
    if (capacity_ && n > *capacity_) {
        throw std::out_of_range("index " + std::to_string(n) + " beyond sequence capacity " +
                                std::to_string(*capacity_));
    }
    if (n > max_safe_index_) {
        throw std::overflow_error("term " + std::to_string(n) + " exceeds 64-bit range (max_safe_index " +
                                  std::to_string(max_safe_index_) + ")");
    }
    switch (kind_) {
        case SequenceKind::poly: return eval_poly_checked(coeffs_, n);
        case SequenceKind::primes: return sieve_->nth(n);
        case SequenceKind::poly_of_primes: return eval_poly_checked(coeffs_, sieve_->nth(n));
        case SequenceKind::lacunary: {
            std::int64_t v = 1;
            for (std::int64_t i = 0; i < n; ++i) v *= base_;
            return v;
        }
        default: return (*terms_)[static_cast<std::size_t>(n - 1)];
    }
}

std::int64_t IntSequence::term_mod(std::int64_t n, std::int64_t q) const {
    if (q < 1) throw std::invalid_argument("modulus must be >= 1");
    if (n < 1) throw std::out_of_range("sequence index starts at 1");
    switch (kind_) {
        case SequenceKind::poly: return eval_poly_mod(coeffs_, n, q);
        case SequenceKind::primes: return sieve_->nth(n) % q;
        case SequenceKind::poly_of_primes: return eval_poly_mod(coeffs_, sieve_->nth(n), q);
        case SequenceKind::lacunary: return powmod(base_, n, q);
        default: return mod_floor(term(n), q);
    }
}

std::vector<std::int64_t> IntSequence::head(std::int64_t count) const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    for (std::int64_t n = 1; n <= count; ++n) out.push_back(term(n));
    return out;
}

IntSequence poly_seq(std::vector<std::int64_t> coeffs) {
    coeffs = trimmed(std::move(coeffs));
    require_increasing_poly(coeffs);
    IntSequence s = SequenceBuilder::make();
    SequenceBuilder::set(s, SequenceKind::poly, {{"coeffs", coeff_json(coeffs)}});
    const std::int64_t safe = last_true(kInt64Max / 2, [&](std::int64_t n) { return fits(coeffs, n); });
    SequenceBuilder::limits(s, safe, std::nullopt, poly_monotone_from(coeffs));
    SequenceBuilder::coeffs(s, std::move(coeffs));
    return s;
}

IntSequence primes_seq(std::int64_t sieve_limit) {
    if (sieve_limit < 2) throw std::invalid_argument("primes sequence needs sieve_limit >= 2");
    IntSequence s = SequenceBuilder::make();
    SequenceBuilder::set(s, SequenceKind::primes, {{"sieve_limit", sieve_limit}});
    auto sv = std::make_shared<const PrimeSieve>(sieve_limit);
    SequenceBuilder::limits(s, sv->count(), sv->count(), 1);
    SequenceBuilder::coeffs(s, {0, 1});
    SequenceBuilder::sieve(s, std::move(sv));
    return s;
}

IntSequence poly_of_primes_seq(std::vector<std::int64_t> coeffs, std::int64_t sieve_limit) {
    coeffs = trimmed(std::move(coeffs));
    require_increasing_poly(coeffs);
    if (sieve_limit < 2) throw std::invalid_argument("poly-of-primes sequence needs sieve_limit >= 2");
    IntSequence s = SequenceBuilder::make();
    SequenceBuilder::set(s, SequenceKind::poly_of_primes,
                         {{"coeffs", coeff_json(coeffs)}, {"sieve_limit", sieve_limit}});
    auto sv = std::make_shared<const PrimeSieve>(sieve_limit);
    const std::int64_t safe =
        last_true(sv->count(), [&](std::int64_t n) { return fits(coeffs, sv->nth(n)); });
    const std::int64_t from_value = poly_monotone_from(coeffs);
    std::int64_t monotone = 1;
    while (monotone <= sv->count() && sv->nth(monotone) < from_value) ++monotone;
    SequenceBuilder::limits(s, safe, sv->count(), monotone);
    SequenceBuilder::coeffs(s, std::move(coeffs));
    SequenceBuilder::sieve(s, std::move(sv));
    return s;
}

namespace {

void validate_arc(const Arc& arc) {
    if (!(arc.lo >= 0.0L && arc.hi <= 1.0L)) throw std::invalid_argument("arc must lie in [0, 1]");
    if (!(arc.lo < arc.hi)) throw std::invalid_argument("empty arc");
}

void validate_rotation(const Rotation& rot) {
    if (rot.rational_alpha && !rot.diagnostic) {
        throw std::invalid_argument("rational rotation angle requires diagnostic mode");
    }
    if (!std::isfinite(rot.alpha)) throw std::invalid_argument("rotation angle must be finite");
}

nlohmann::json rotation_params(const Rotation& rot, const Arc& arc, long double x0, std::int64_t count) {
    nlohmann::json p = {{"alpha", static_cast<double>(rot.alpha)},
                        {"diagnostic", rot.diagnostic},
                        {"arc", {static_cast<double>(arc.lo), static_cast<double>(arc.hi)}},
                        {"x0", static_cast<double>(x0)},
                        {"count", count}};
    if (rot.rational_alpha) p["alpha_rational"] = rot.rational_alpha->str();
    return p;
}

// Phase of T^{P(m)} x0 for the rotation; exact residues for rational alpha.
long double orbit_phase(const Rotation& rot, std::span<const std::int64_t> coeffs, long double x0,
                        std::int64_t m) {
    if (rot.rational_alpha) {
        const std::int64_t q = rot.rational_alpha->den();
        const std::int64_t r = mulmod(eval_poly_mod(coeffs, m, q), rot.rational_alpha->num(), q);
        return frac_part(x0 + static_cast<long double>(r) / static_cast<long double>(q));
    }
    const auto pm = static_cast<long double>(eval_poly_checked(coeffs, m));
    return frac_part(x0 + frac_part(pm * rot.alpha));
}

std::vector<std::int64_t> scan_returns(const Rotation& rot, std::span<const std::int64_t> coeffs,
                                       const Arc& arc, long double x0, std::int64_t count,
                                       std::int64_t scan_cap) {
    if (count < 1) throw std::invalid_argument("return-time count must be >= 1");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t m = 1; static_cast<std::int64_t>(out.size()) < count; ++m) {
        if (m > scan_cap) {
            throw std::runtime_error("only " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                     " return times found within scan cap " + std::to_string(scan_cap));
        }
        const long double phase = orbit_phase(rot, coeffs, x0, m);
        if (phase >= arc.lo && phase < arc.hi) out.push_back(m);
    }
    return out;
}

}  // namespace

IntSequence rotation_return_times(const Rotation& rot, Arc arc, long double x0, std::int64_t count,
                                  std::int64_t scan_cap) {
    validate_rotation(rot);
    validate_arc(arc);
    const std::vector<std::int64_t> identity = {0, 1};
    auto terms = scan_returns(rot, identity, arc, x0, count, scan_cap);
    return SequenceBuilder::enumerated(SequenceKind::rotation_return, rotation_params(rot, arc, x0, count),
                                       std::move(terms));
}

IntSequence polynomial_return_times(const Rotation& rot, std::vector<std::int64_t> coeffs, Arc arc,
                                    long double x0, std::int64_t count, std::int64_t scan_cap) {
    validate_rotation(rot);
    validate_arc(arc);
    coeffs = trimmed(std::move(coeffs));
    require_increasing_poly(coeffs);
    auto terms = scan_returns(rot, coeffs, arc, x0, count, scan_cap);
    auto params = rotation_params(rot, arc, x0, count);
    params["coeffs"] = coeff_json(coeffs);
    IntSequence s = SequenceBuilder::enumerated(SequenceKind::poly_return, std::move(params), std::move(terms));
    if (coeffs.size() < 3) {
        SequenceBuilder::warn(s, "polynomial degree < 2: return times along P need not behave ergodically");
    }
    SequenceBuilder::coeffs(s, std::move(coeffs));
    return s;
}

namespace {

IntSequence build_insertion(const std::function<bool(std::int64_t)>& insert_after, std::int64_t count,
                            nlohmann::json params) {
    if (count < 1) throw std::invalid_argument("insertion sequence count must be >= 1");
    std::vector<std::int64_t> terms;
    terms.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 1; static_cast<std::int64_t>(terms.size()) < count; ++k) {
        if (k > kInt64Max / 2 - 1) throw std::overflow_error("insertion sequence exceeds 64-bit range");
        terms.push_back(2 * k);
        if (static_cast<std::int64_t>(terms.size()) < count && insert_after(k)) terms.push_back(2 * k + 1);
    }
    return SequenceBuilder::enumerated(SequenceKind::insertion_perturbed, std::move(params), std::move(terms));
}

}  // namespace

IntSequence insertion_perturbed_even_seq(InsertSet set, std::int64_t count) {
    nlohmann::json params = {{"insert", to_string(set)}, {"count", count}};
    switch (set) {
        case InsertSet::none: return build_insertion([](std::int64_t) { return false; }, count, params);
        case InsertSet::squares:
            return build_insertion([](std::int64_t k) { auto r = isqrt(k); return r * r == k; }, count, params);
        case InsertSet::primes: return build_insertion([](std::int64_t k) { return is_prime64(k); }, count, params);
    }
    throw std::invalid_argument("unknown insert set");
}

IntSequence insertion_perturbed_even_seq(const std::function<bool(std::int64_t)>& insert_after,
                                         std::int64_t count) {
    return build_insertion(insert_after, count, {{"insert", "custom"}, {"count", count}});
}

IntSequence lacunary_seq(std::int64_t base) {
    if (base < 2) throw std::invalid_argument("lacunary base must be >= 2");
    IntSequence s = SequenceBuilder::make();
    SequenceBuilder::set(s, SequenceKind::lacunary, {{"base", base}});
    std::int64_t safe = 0;
    for (i128 v = base; v <= kInt64Max; v *= base) ++safe;
    SequenceBuilder::limits(s, safe, std::nullopt, 1);
    SequenceBuilder::base(s, base);
    return s;
}

// ---------------------------------------------------------------- probes

GapProbe gap_liminf_probe(const IntSequence& seq, std::int64_t horizon) {
    if (horizon < 2) throw std::invalid_argument("gap probe needs horizon >= 2");
    std::map<std::int64_t, std::int64_t> counts;
    std::int64_t prev = seq.term(1);
    for (std::int64_t n = 2; n <= horizon; ++n) {
        const std::int64_t cur = seq.term(n);
        ++counts[cur - prev];
        prev = cur;
    }
    for (const auto& [gap, count] : counts) {
        if (count >= 2) return {gap, count};
    }
    return {counts.begin()->first, counts.begin()->second};
}

double upper_density_estimate(const IntSequence& seq, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("density horizon must be >= 1");
    std::int64_t hits = 0;
    for (std::int64_t n = 1;; ++n) {
        if (seq.capacity() && n > *seq.capacity()) {
            throw std::out_of_range("sequence capacity exhausted before its terms exceed " + std::to_string(N));
        }
        std::int64_t t = 0;
        try {
            t = seq.term(n);
        } catch (const std::overflow_error&) {
            if (n > seq.monotone_from()) break;
            continue;
        }
        if (t <= N && t >= 1) ++hits;
        if (t > N && n >= seq.monotone_from()) break;
    }
    return static_cast<double>(hits) / static_cast<double>(N);
}

// ---------------------------------------------------------------- RealSequence

namespace {

std::vector<ExactReal> trimmed_real(std::vector<ExactReal> coeffs, long double xi_value) {
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.size() < 2) throw std::invalid_argument("real polynomial sequence needs degree >= 1");
    if (!(coeffs.back().value(xi_value) > 0.0L)) {
        throw std::invalid_argument("real polynomial sequence needs a positive leading coefficient");
    }
    return coeffs;
}

}  // namespace

RealSequence RealSequence::poly(std::vector<ExactReal> coeffs, long double xi_value) {
    RealSequence s;
    s.kind_ = RealSequenceKind::real_poly;
    s.coeffs_ = trimmed_real(std::move(coeffs), xi_value);
    s.xi_value_ = xi_value;
    return s;
}

RealSequence RealSequence::poly_of_primes(std::vector<ExactReal> coeffs, std::int64_t sieve_limit,
                                          long double xi_value) {
    if (sieve_limit < 2) throw std::invalid_argument("sieve_limit must be >= 2");
    RealSequence s;
    s.kind_ = RealSequenceKind::real_poly_of_primes;
    s.coeffs_ = trimmed_real(std::move(coeffs), xi_value);
    s.xi_value_ = xi_value;
    s.sieve_ = std::make_shared<const PrimeSieve>(sieve_limit);
    return s;
}

std::optional<std::int64_t> RealSequence::capacity() const {
    if (sieve_) return sieve_->count();
    return std::nullopt;
}

ExactReal RealSequence::term_exact(std::int64_t n) const {
    if (n < 1) throw std::out_of_range("sequence index starts at 1");
    const Fraction x(kind_ == RealSequenceKind::real_poly ? n : sieve_->nth(n));
    ExactReal acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = x * acc + *it;
    return acc;
}

long double RealSequence::term(std::int64_t n) const {
    if (n < 1) throw std::out_of_range("sequence index starts at 1");
    const auto x = static_cast<long double>(kind_ == RealSequenceKind::real_poly ? n : sieve_->nth(n));
    long double acc = 0.0L;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->value(xi_value_);
    return acc;
}

}  // namespace wienerlab
