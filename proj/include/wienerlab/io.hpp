#pragma once

// JSON wire formats for sequences, measures, operators and vectors.
//
//   fraction   3 | "3/4"
//   exact real 3 | "3/4" | {"rational": "1/2", "xi_coeff": "1"}
//   angle      {"b": 1, "q": 3} | {"xi_coeff": "1", "b": 1, "q": 2} | {"theta": 0.123}
//   measure    {"atoms": [{"b": 0, "q": 1, "w_re": 0.5, "w_im": 0}],
//               "arcs": [{"a": 0.0, "b": 0.25, "w": 0.5}], "probability": true, "xi": 1.414...}
//   sequence   {"kind": "poly", "params": {"coeffs": [4, 0, 1]}} and the other kinds
//              with the parameters IntSequence::spec() emits
//   operator   {"entries": [{"r": 1.0, "b": 1, "q": 2}]}
//   semigroup  {"modes": [{"rho": 0, "a": "1/2"}]}
//   vector     [0.5, [0.5, -0.5], ...]  (reals or [re, im] pairs)

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wienerlab/angle.hpp"
#include "wienerlab/measures.hpp"
#include "wienerlab/orbitlab.hpp"
#include "wienerlab/seqcore.hpp"

namespace wienerlab {

using nlohmann::json;

Fraction fraction_from_json(const json& j);
ExactReal exact_real_from_json(const json& j);
json exact_real_to_json(const ExactReal& x);

UnitAngle angle_from_json(const json& j, long double xi_value = kDefaultXi);
json angle_to_json(const UnitAngle& a);

CircleMeasure measure_from_json(const json& j);
json measure_to_json(const CircleMeasure& mu);

/// {"atoms": [{"x": <exact real>, "w_re": 0.5, "w_im": 0}], "probability": true}
LineMeasure line_measure_from_json(const json& j);

/// Sequences with a finite sieve or enumeration are sized to provide at
/// least `min_terms` terms when the JSON leaves the size open.
IntSequence sequence_from_json(const json& j, std::int64_t min_terms);

/// {"kind": "real-poly" | "real-poly-of-primes", "params": {"coeffs": [<exact real>, ...]}}
RealSequence real_sequence_from_json(const json& j, std::int64_t min_terms);

DiagonalContraction contraction_from_json(const json& j);
DiagonalSemigroup semigroup_from_json(const json& j);
CVector vector_from_json(const json& j);
json vector_to_json(const CVector& v);

/// "@path" reads the file, anything else is parsed as JSON text.
json load_json_arg(const std::string& arg);

}  // namespace wienerlab
