#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fdiq {

enum class VerifySuite { kkt, pilot, power, rho, lemma1, convexity, all };

VerifySuite parse_suite(std::string_view name);

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

std::vector<CheckResult> run_verification(VerifySuite suite, std::uint64_t seed);

/// One "PASS|FAIL name measured=... tol=..." line per check.
void print_checks(std::ostream& os, const std::vector<CheckResult>& checks);

} // namespace fdiq
