#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wienerlab/measures.hpp"
#include "wienerlab/seqcore.hpp"

namespace wienerlab::cli {

inline constexpr const char* kSchema = "wiener-lab/1";

/// Exit codes: 0 success, 1 a repro check failed, 2 invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "primes", "n", "poly:<expr>", "poly-primes:<expr>", "lacunary:<base>",
/// or a JSON sequence (inline or @file).
IntSequence sequence_arg(const std::string& arg, std::int64_t min_terms);

/// "half-dirac-pm1", "dirac:<b>/<q>", or a JSON measure (inline or @file).
CircleMeasure measure_arg(const std::string& arg);

}  // namespace wienerlab::cli
