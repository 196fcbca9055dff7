#include "wienerlab/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wienerlab {

namespace {

[[noreturn]] void bad(const std::string& what, const json& j) {
    throw std::invalid_argument(what + ": " + j.dump());
}

std::int64_t int_field(const json& j, const char* key, std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) bad(std::string("field '") + key + "' must be an integer", j);
    return j.at(key).get<std::int64_t>();
}

double number_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) bad(std::string("field '") + key + "' must be a number", j);
    return j.at(key).get<double>();
}

std::vector<std::int64_t> coeffs_field(const json& params) {
    if (!params.contains("coeffs") || !params.at("coeffs").is_array()) bad("missing coefficient list", params);
    std::vector<std::int64_t> c;
    for (const auto& x : params.at("coeffs")) {
        if (!x.is_number_integer()) bad("coefficients must be integers", params);
        c.push_back(x.get<std::int64_t>());
    }
    return c;
}

std::complex<double> weight_of(const json& j) {
    return {number_field(j, "w_re", 0.0), number_field(j, "w_im", 0.0)};
}

}  // namespace

Fraction fraction_from_json(const json& j) {
    if (j.is_number_integer()) return Fraction(j.get<std::int64_t>());
    if (j.is_string()) return Fraction::parse(j.get<std::string>());
    bad("expected an integer or \"p/q\"", j);
}

ExactReal exact_real_from_json(const json& j) {
    if (j.is_object()) {
        ExactReal x;
        if (j.contains("rational")) x.rational = fraction_from_json(j.at("rational"));
        if (j.contains("xi_coeff")) x.xi = fraction_from_json(j.at("xi_coeff"));
        return x;
    }
    return ExactReal::of(fraction_from_json(j));
}

json exact_real_to_json(const ExactReal& x) {
    if (x.is_rational()) return x.rational.str();
    return {{"rational", x.rational.str()}, {"xi_coeff", x.xi.str()}};
}

UnitAngle angle_from_json(const json& j, long double xi_value) {
    if (!j.is_object()) bad("angle must be an object", j);
    if (j.contains("theta")) {
        if (j.contains("b") || j.contains("xi_coeff")) bad("theta cannot be combined with an exact angle", j);
        return UnitAngle::irrational(static_cast<long double>(number_field(j, "theta", 0.0)));
    }
    const std::int64_t q = int_field(j, "q", 1);
    if (q < 1) bad("denominator q must be >= 1", j);
    const Fraction offset(int_field(j, "b", 0), q);
    if (j.contains("xi_coeff")) {
        return UnitAngle::symbolic(ExactReal{offset, fraction_from_json(j.at("xi_coeff"))}, xi_value);
    }
    return UnitAngle::of_fraction(offset);
}

json angle_to_json(const UnitAngle& a) {
    if (const auto& e = a.exact()) {
        json j{{"b", e->rational.num()}, {"q", e->rational.den()}};
        if (!e->xi.is_zero()) j["xi_coeff"] = e->xi.str();
        return j;
    }
    return {{"theta", static_cast<double>(a.theta())}};
}

CircleMeasure measure_from_json(const json& j) {
    if (!j.is_object()) bad("measure must be an object", j);
    const long double xi = j.contains("xi") ? static_cast<long double>(number_field(j, "xi", 0.0)) : kDefaultXi;
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) atoms.push_back({angle_from_json(a, xi), weight_of(a)});
    }
    std::vector<UniformArc> arcs;
    if (j.contains("arcs")) {
        for (const auto& a : j.at("arcs")) {
            arcs.push_back({static_cast<long double>(number_field(a, "a", 0.0)),
                            static_cast<long double>(number_field(a, "b", 1.0)), number_field(a, "w", 0.0)});
        }
    }
    const bool probability = j.value("probability", false);
    return CircleMeasure(std::move(atoms), std::move(arcs), probability);
}

json measure_to_json(const CircleMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms()) {
        json x = angle_to_json(a.angle);
        x["w_re"] = a.weight.real();
        x["w_im"] = a.weight.imag();
        atoms.push_back(x);
    }
    json arcs = json::array();
    for (const auto& a : mu.arcs()) {
        arcs.push_back({{"a", static_cast<double>(a.lo)}, {"b", static_cast<double>(a.hi)}, {"w", a.weight}});
    }
    return {{"atoms", atoms}, {"arcs", arcs}, {"probability", mu.probability()}};
}

LineMeasure line_measure_from_json(const json& j) {
    if (!j.is_object() || !j.contains("atoms")) bad("line measure needs an atom list", j);
    const long double xi = j.contains("xi") ? static_cast<long double>(number_field(j, "xi", 0.0)) : kDefaultXi;
    std::vector<LineAtom> atoms;
    for (const auto& a : j.at("atoms")) {
        if (!a.contains("x")) bad("line atom needs a position x", a);
        if (a.at("x").is_number_float()) {
            atoms.push_back({static_cast<long double>(a.at("x").get<double>()), std::nullopt, weight_of(a)});
        } else {
            atoms.push_back(LineAtom::at(exact_real_from_json(a.at("x")), weight_of(a), xi));
        }
    }
    return LineMeasure(std::move(atoms), j.value("probability", false), xi);
}

IntSequence sequence_from_json(const json& j, std::int64_t min_terms) {
    if (!j.is_object() || !j.contains("kind")) bad("sequence needs a kind", j);
    const SequenceKind kind = sequence_kind_from_string(j.at("kind").get<std::string>());
    const json params = j.value("params", json::object());
    const std::int64_t default_limit = sieve_limit_for_count(std::max<std::int64_t>(min_terms, 1));
    switch (kind) {
        case SequenceKind::poly: return poly_seq(coeffs_field(params));
        case SequenceKind::primes: return primes_seq(int_field(params, "sieve_limit", default_limit));
        case SequenceKind::poly_of_primes:
            return poly_of_primes_seq(coeffs_field(params), int_field(params, "sieve_limit", default_limit));
        case SequenceKind::rotation_return:
        case SequenceKind::poly_return: {
            Rotation rot;
            if (params.contains("alpha_rational")) {
                if (!params.value("diagnostic", false)) bad("rational alpha needs \"diagnostic\": true", params);
                rot = Rotation::diagnostic_rational(fraction_from_json(params.at("alpha_rational")));
            } else {
                rot = Rotation::irrational(static_cast<long double>(number_field(params, "alpha", 0.0)));
            }
            Arc arc;
            if (params.contains("arc")) {
                const auto& a = params.at("arc");
                if (!a.is_array() || a.size() != 2) bad("arc must be [lo, hi]", params);
                arc = {static_cast<long double>(a[0].get<double>()), static_cast<long double>(a[1].get<double>())};
            }
            const auto x0 = static_cast<long double>(number_field(params, "x0", 0.0));
            const std::int64_t count = int_field(params, "count", min_terms);
            const std::int64_t cap = int_field(params, "scan_cap", kDefaultScanCap);
            if (kind == SequenceKind::rotation_return) return rotation_return_times(rot, arc, x0, count, cap);
            return polynomial_return_times(rot, coeffs_field(params), arc, x0, count, cap);
        }
        case SequenceKind::insertion_perturbed:
            return insertion_perturbed_even_seq(insert_set_from_string(params.value("insert", "none")),
                                                int_field(params, "count", min_terms));
        case SequenceKind::lacunary: return lacunary_seq(int_field(params, "base", 2));
    }
    bad("unsupported sequence kind", j);
}

RealSequence real_sequence_from_json(const json& j, std::int64_t min_terms) {
    if (!j.is_object() || !j.contains("kind")) bad("real sequence needs a kind", j);
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (!params.contains("coeffs") || !params.at("coeffs").is_array()) bad("missing coefficient list", j);
    std::vector<ExactReal> coeffs;
    for (const auto& c : params.at("coeffs")) coeffs.push_back(exact_real_from_json(c));
    const long double xi = params.contains("xi") ? static_cast<long double>(number_field(params, "xi", 0.0)) : kDefaultXi;
    if (kind == "real-poly") return RealSequence::poly(std::move(coeffs), xi);
    if (kind == "real-poly-of-primes") {
        const std::int64_t limit = int_field(params, "sieve_limit", sieve_limit_for_count(std::max<std::int64_t>(min_terms, 1)));
        return RealSequence::poly_of_primes(std::move(coeffs), limit, xi);
    }
    bad("unknown real sequence kind", j);
}

DiagonalContraction contraction_from_json(const json& j) {
    if (!j.is_object() || !j.contains("entries")) bad("operator needs an entry list", j);
    std::vector<Eigenvalue> entries;
    for (const auto& e : j.at("entries")) entries.push_back({number_field(e, "r", 1.0), angle_from_json(e)});
    return DiagonalContraction(std::move(entries));
}

DiagonalSemigroup semigroup_from_json(const json& j) {
    if (!j.is_object() || !j.contains("modes")) bad("semigroup needs a mode list", j);
    const long double xi = j.contains("xi") ? static_cast<long double>(number_field(j, "xi", 0.0)) : kDefaultXi;
    std::vector<SemigroupMode> modes;
    for (const auto& m : j.at("modes")) {
        const double rho = number_field(m, "rho", 0.0);
        if (m.contains("a") && m.at("a").is_number_float()) {
            modes.push_back({rho, static_cast<long double>(m.at("a").get<double>()), std::nullopt});
        } else {
            modes.push_back(SemigroupMode::exact(rho, exact_real_from_json(m.value("a", json(0))), xi));
        }
    }
    return DiagonalSemigroup(std::move(modes), xi);
}

CVector vector_from_json(const json& j) {
    if (!j.is_array()) bad("vector must be an array", j);
    CVector v;
    for (const auto& x : j) {
        if (x.is_number()) {
            v.emplace_back(x.get<double>(), 0.0);
        } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
            v.emplace_back(x[0].get<double>(), x[1].get<double>());
        } else {
            bad("vector entries must be numbers or [re, im]", j);
        }
    }
    return v;
}

json vector_to_json(const CVector& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(json::array({z.real(), z.imag()}));
    return out;
}

json load_json_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw std::invalid_argument("cannot read " + arg.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace wienerlab
