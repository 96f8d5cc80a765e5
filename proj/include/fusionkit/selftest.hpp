#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fusionkit {

struct SuiteResult {
    std::string name;
    long instances = 0;
    long failures = 0;
};

/// Runs the randomized property suites (seed-reproducible). With `corrupt`
/// set, one deliberate violation is injected into the invariance checker and
/// must surface as a failure.
std::vector<SuiteResult> run_selftest(std::uint64_t seed, bool corrupt);

}  // namespace fusionkit
