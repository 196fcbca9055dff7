#pragma once

// End-to-end replay of the reference examples: each check recomputes a
// published value or verdict from scratch and compares it at fixed tolerance.

#include <string>
#include <vector>

namespace wienerlab {

struct ReproResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<ReproResult> run_repro();

}  // namespace wienerlab
