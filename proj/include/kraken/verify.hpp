#pragma once

#include <string>
#include <vector>

#include "kraken/output_table.hpp"

namespace kraken {

/// One verification check: |computed - expected| must stay within tolerance.
struct CheckResult {
    std::string name;
    double expected = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;  // allowed absolute deviation
    bool passed = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    int failures() const;
};

struct VerifyOptions {
    // Perturbs one embedded reference entry (0..39) before checking, to
    // prove the verifier actually trips. Negative leaves fixtures alone.
    int corrupt_fixture = -1;
};

/// Runs the full verification suite: the four reference tables entry by
/// entry, the worked ratio examples, brute-force oracle agreement, the
/// zero-coupling collapse, simulation-versus-analytic agreement, and the
/// semi-log growth diagnostics. Deterministic; randomized suites use
/// fixed seeds.
VerifyReport run_verification(const VerifyOptions& options = {});

/// Report as a table with columns check,expected,computed,tolerance,pass.
OutputTable verification_table(const VerifyReport& report);

}  // namespace kraken
