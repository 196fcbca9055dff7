#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "wienerlab/extremality.hpp"
#include "wienerlab/io.hpp"
#include "wienerlab/orbitlab.hpp"
#include "wienerlab/polyparse.hpp"
#include "wienerlab/repro.hpp"
#include "wienerlab/spectra.hpp"
#include "wienerlab/wiener.hpp"

namespace wienerlab::cli {

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string num(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

json envelope(const std::string& command, json config, json result) {
    json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    return j;
}

json sequence_json(const IntSequence& seq) {
    json warnings = seq.warnings();
    return {{"spec", seq.spec()}, {"describe", seq.describe()}, {"warnings", warnings}};
}

LineMeasure line_measure_arg(const std::string& arg) {
    if (arg == "half-dirac-pm-half") {
        return LineMeasure({LineAtom::at(ExactReal::of(Fraction(1, 2)), 0.5),
                            LineAtom::at(ExactReal::of(Fraction(-1, 2)), 0.5)},
                           true);
    }
    return line_measure_from_json(load_json_arg(arg));
}

struct Options {
    std::string format = "json";
    std::string seq;
    std::string real_seq;
    std::string measure;
    std::string poly;
    std::string op;
    std::string semigroup;
    std::string x;
    std::string y;
    bool primes = false;
    std::int64_t count = 20;
    std::int64_t q_max = 12;
    std::int64_t N = 10'000;
    std::int64_t horizon = 10'000;
    std::int64_t group = 0;
    double threshold = -1.0;
    double tol = 1e-9;
};

int cmd_seq(const Options& o, std::ostream& out) {
    if (o.count < 1) throw std::invalid_argument("--count must be >= 1");
    const IntSequence seq = sequence_arg(o.seq, o.count);
    const auto terms = seq.head(o.count);
    if (o.format == "csv") {
        out << "n,k_n\n";
        for (std::size_t i = 0; i < terms.size(); ++i) out << i + 1 << "," << terms[i] << "\n";
        return 0;
    }
    json config{{"seq", seq.spec()}, {"count", o.count}};
    json result = sequence_json(seq);
    result["terms"] = terms;
    out << envelope("seq", config, result).dump(2) << "\n";
    return 0;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
    if (o.q_max < 1) throw std::invalid_argument("--q-max must be >= 1");
    const IntSequence seq = sequence_arg(o.seq, o.N);
    const std::optional<double> threshold = o.threshold >= 0.0 ? std::optional<double>(o.threshold) : std::nullopt;
    const SpectrumTable table = spectrum_scan(seq, o.q_max, threshold, o.N);
    if (o.format == "csv") {
        out << "b,q,re,im,abs,provenance\n";
        for (const auto& e : table.entries) {
            out << e.angle.num() << "," << e.angle.den() << "," << num(e.value.real()) << "," << num(e.value.imag())
                << "," << num(std::abs(e.value)) << "," << to_string(e.provenance) << "\n";
        }
        return 0;
    }
    json entries = json::array();
    for (const auto& e : table.entries) {
        entries.push_back({{"b", e.angle.num()},
                           {"q", e.angle.den()},
                           {"re", e.value.real()},
                           {"im", e.value.imag()},
                           {"abs", std::abs(e.value)},
                           {"provenance", to_string(e.provenance)}});
    }
    json result{{"entries", entries}, {"threshold", table.threshold}};
    try {
        result["unimodular_group"] = unimodular_group_detect(table);
    } catch (const std::domain_error& e) {
        result["unimodular_group"] = nullptr;
        result["unimodular_group_note"] = e.what();
    }
    json config{{"seq", seq.spec()}, {"q_max", o.q_max}, {"threshold", table.threshold}, {"N", o.N}};
    out << envelope("spectrum", config, result).dump(2) << "\n";
    return 0;
}

int cmd_wiener(const Options& o, std::ostream& out) {
    if (o.N < 1) throw std::invalid_argument("--N must be >= 1");
    if (!o.real_seq.empty()) {
        const RealSequence rseq = real_sequence_from_json(load_json_arg(o.real_seq), o.N);
        const LineMeasure mu = line_measure_arg(o.measure);
        json result{{"empirical", empirical_wiener_avg(mu, rseq, o.N)},
                    {"N", o.N},
                    {"mu_is_dirac", mu.is_dirac()},
                    {"R_extremality", classify_R_extremality(rseq).to_json()}};
        json config{{"real_seq", load_json_arg(o.real_seq)}, {"measure", o.measure}, {"N", o.N}};
        out << envelope("wiener", config, result).dump(2) << "\n";
        return 0;
    }
    const IntSequence seq = sequence_arg(o.seq, o.N);
    const CircleMeasure mu = measure_arg(o.measure);
    std::optional<SpectrumGroup> group;
    if (o.group > 0) group = o.group == 1 ? SpectrumGroup::trivial() : SpectrumGroup::roots(o.group);
    const WienerReport report = wiener_report(mu, seq, o.N, group);
    json config{{"seq", seq.spec()}, {"measure", measure_to_json(mu)}, {"N", o.N}};
    config["group"] = group ? json(group->str()) : json(nullptr);
    out << envelope("wiener", config, report.to_json()).dump(2) << "\n";
    return 0;
}

int cmd_extremal(const Options& o, std::ostream& out) {
    if (o.q_max < 2) throw std::invalid_argument("--q-max must be >= 2");
    if (o.horizon < 1) throw std::invalid_argument("--horizon must be >= 1");
    json config{{"q_max", o.q_max}, {"horizon", o.horizon}};
    json result;
    if (!o.real_seq.empty()) {
        const json spec = load_json_arg(o.real_seq);
        config["real_seq"] = spec;
        result = classify_R_extremality(real_sequence_from_json(spec, o.horizon)).to_json();
    } else if (!o.poly.empty()) {
        const auto coeffs = parse_polynomial(o.poly);
        config["poly"] = format_polynomial(coeffs);
        config["primes"] = o.primes;
        const ExtremalityVerdict v =
            o.primes ? wiener_extremal_verdict_poly_primes(coeffs) : wiener_extremal_verdict_poly(coeffs);
        result = v.to_json();
        result["certificate_replayed"] = replay_certificate(v);
        const IntSequence seq = o.primes ? poly_of_primes_seq(coeffs, sieve_limit_for_count(o.horizon))
                                         : poly_seq(coeffs);
        json probe = json::array();
        for (const auto& r : roots_of_unity_convergence_probe(seq, o.q_max, std::min(o.horizon, seq.max_safe_index()))) {
            if (!r.converges_to_one) continue;
            probe.push_back({{"b", r.angle.num()}, {"q", r.angle.den()}});
        }
        result["roots_fixed_along_tail"] = probe;
    } else {
        const IntSequence seq = sequence_arg(o.seq, o.horizon);
        config["seq"] = seq.spec();
        if (const auto known = known_extremality(seq)) {
            result = known->to_json();
            result["certificate_replayed"] = replay_certificate(*known);
        } else {
            result = bounded_gaps_extremality_check(seq, o.q_max, o.horizon).to_json();
            result["wiener_density_check"] = pos_density_wiener_check(seq, o.q_max, o.horizon).to_json();
        }
    }
    out << envelope("extremal", config, result).dump(2) << "\n";
    return 0;
}

int cmd_orbit(const Options& o, std::ostream& out) {
    if (o.N < 1) throw std::invalid_argument("--N must be >= 1");
    const CVector x = vector_from_json(load_json_arg(o.x));
    const CVector y = o.y.empty() ? x : vector_from_json(load_json_arg(o.y));
    json config{{"x", vector_to_json(x)}, {"y", vector_to_json(y)}, {"N", o.N}, {"tol", o.tol}};
    json result;
    if (!o.semigroup.empty()) {
        const json sg = load_json_arg(o.semigroup);
        const json rs = load_json_arg(o.real_seq);
        config["semigroup"] = sg;
        config["real_seq"] = rs;
        result = semigroup_orbit_avg(semigroup_from_json(sg), x, y, real_sequence_from_json(rs, o.N), o.N).to_json();
    } else {
        const json op = load_json_arg(o.op);
        const DiagonalContraction T = contraction_from_json(op);
        const IntSequence seq = sequence_arg(o.seq, o.N);
        config["operator"] = op;
        config["seq"] = seq.spec();
        result = orbit_report(T, x, y, seq, o.N).to_json();
        result["eigenvector_test"] = eigenvector_extremality_test(T, x, seq, o.N, o.tol).to_json();
        result["classical_limit_test"] = classical_limit_test(T, x, seq, o.N, o.tol).to_json();
        result["gelfand_probe"] = gelfand_probe(T, seq, o.N, o.tol).to_json();
    }
    out << envelope("orbit", config, result).dump(2) << "\n";
    return 0;
}

int cmd_repro(const Options& o, std::ostream& out, std::ostream& err) {
    const auto results = run_repro();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        err << "check " << r.id << ": " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
    }
    if (o.format == "text") {
        for (const auto& r : results) {
            out << std::setw(2) << r.id << "  " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.detail
                << "\n";
        }
        out << (all ? "all checks passed" : "some checks failed") << "\n";
    } else {
        json matrix = json::array();
        for (const auto& r : results) {
            matrix.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        }
        out << envelope("repro", json::object(), {{"checks", matrix}, {"all_pass", all}}).dump(2) << "\n";
    }
    return all ? 0 : 1;
}

}  // namespace

IntSequence sequence_arg(const std::string& arg, std::int64_t min_terms) {
    const std::int64_t limit = sieve_limit_for_count(std::max<std::int64_t>(min_terms, 1));
    if (arg.empty()) throw std::invalid_argument("missing sequence");
    if (arg == "primes") return primes_seq(limit);
    if (arg == "n") return poly_seq({0, 1});
    if (starts_with(arg, "poly:")) return poly_seq(parse_polynomial(arg.substr(5)));
    if (starts_with(arg, "poly-primes:")) return poly_of_primes_seq(parse_polynomial(arg.substr(12)), limit);
    if (starts_with(arg, "lacunary:")) {
        std::size_t used = 0;
        const std::string b = arg.substr(9);
        const long long base = std::stoll(b, &used);
        if (used != b.size()) throw std::invalid_argument("bad lacunary base: " + b);
        return lacunary_seq(base);
    }
    return sequence_from_json(load_json_arg(arg), min_terms);
}

CircleMeasure measure_arg(const std::string& arg) {
    if (arg.empty()) throw std::invalid_argument("missing measure");
    if (arg == "half-dirac-pm1") {
        return CircleMeasure({{UnitAngle::of(0, 1), 0.5}, {UnitAngle::of(1, 2), 0.5}}, {}, true);
    }
    if (starts_with(arg, "dirac:")) return dirac(UnitAngle::of_fraction(Fraction::parse(arg.substr(6))));
    return measure_from_json(load_json_arg(arg));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral limits, Wiener averages and extremality of integer subsequences", "wienerlab"};
    app.require_subcommand(1);
    Options o;

    auto* seq = app.add_subcommand("seq", "print the first terms of a sequence");
    seq->add_option("--seq", o.seq, "sequence")->required();
    seq->add_option("--count", o.count, "number of terms");
    seq->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* spectrum = app.add_subcommand("spectrum", "tabulate c(b/q) for q <= q-max");
    spectrum->add_option("--seq", o.seq, "sequence")->required();
    spectrum->add_option("--q-max", o.q_max, "largest denominator");
    spectrum->add_option("--threshold", o.threshold, "minimum |c| to report");
    spectrum->add_option("--N", o.N, "terms for empirical entries");
    spectrum->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* wiener = app.add_subcommand("wiener", "Wiener average of a measure along a sequence");
    wiener->add_option("--measure", o.measure, "measure")->required();
    auto* wseq = wiener->add_option("--seq", o.seq, "integer sequence");
    auto* wreal = wiener->add_option("--real-seq", o.real_seq, "real sequence (JSON)");
    wseq->excludes(wreal);
    wiener->add_option("--N", o.N, "number of terms");
    wiener->add_option("--group", o.group, "spectrum group of d-th roots of unity for the coset bound");

    auto* extremal = app.add_subcommand("extremal", "decide or probe extremality");
    auto* epoly = extremal->add_option("--poly", o.poly, "integer polynomial in x: signed terms joined by + or -, each term a product\n"
                                          "of integers and x with optional ^exponent ('*' optional), e.g. \"x^2+4\",\n"
                                          "\"3*x - 1\", \"2x^3 + x\"");
    extremal->add_flag("--primes", o.primes, "evaluate the polynomial along the primes");
    auto* eseq = extremal->add_option("--seq", o.seq, "general sequence");
    auto* ereal = extremal->add_option("--real-seq", o.real_seq, "real polynomial sequence (JSON)");
    epoly->excludes(eseq)->excludes(ereal);
    eseq->excludes(ereal);
    extremal->add_option("--q-max", o.q_max, "largest modulus probed");
    extremal->add_option("--horizon", o.horizon, "terms used by probes");

    auto* orbit = app.add_subcommand("orbit", "orbit averages of a diagonal contraction or semigroup");
    auto* oop = orbit->add_option("--operator", o.op, "contraction (JSON)");
    auto* osg = orbit->add_option("--semigroup", o.semigroup, "semigroup (JSON)");
    oop->excludes(osg);
    orbit->add_option("--seq", o.seq, "sequence for --operator");
    orbit->add_option("--real-seq", o.real_seq, "real sequence for --semigroup (JSON)");
    orbit->add_option("--x", o.x, "vector x (JSON)")->required();
    orbit->add_option("--y", o.y, "vector y (JSON), defaults to x");
    orbit->add_option("--N", o.N, "number of terms");
    orbit->add_option("--tol", o.tol, "tolerance for the probes");

    auto* repro = app.add_subcommand("repro", "replay the reference examples and print a pass/fail matrix");
    repro->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*seq) return cmd_seq(o, out);
        if (*spectrum) return cmd_spectrum(o, out);
        if (*wiener) {
            if (o.seq.empty() && o.real_seq.empty()) throw std::invalid_argument("wiener needs --seq or --real-seq");
            return cmd_wiener(o, out);
        }
        if (*extremal) {
            if (o.poly.empty() && o.seq.empty() && o.real_seq.empty()) {
                throw std::invalid_argument("extremal needs --poly, --seq or --real-seq");
            }
            if (o.primes && o.poly.empty()) throw std::invalid_argument("--primes applies to --poly");
            return cmd_extremal(o, out);
        }
        if (*orbit) {
            if (o.op.empty() == o.semigroup.empty()) throw std::invalid_argument("orbit needs --operator or --semigroup");
            if (!o.op.empty() && o.seq.empty()) throw std::invalid_argument("--operator needs --seq");
            if (!o.semigroup.empty() && o.real_seq.empty()) throw std::invalid_argument("--semigroup needs --real-seq");
            return cmd_orbit(o, out);
        }
        if (*repro) return cmd_repro(o, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace wienerlab::cli
