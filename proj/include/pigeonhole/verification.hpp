#pragma once

#include <string>
#include <vector>

namespace pigeonhole {

struct CheckResult {
    std::string name;
    bool passed = false;
    double error = 0.0;      ///< worst observed deviation
    double tolerance = 0.0;  ///< after any override scaling
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    std::string to_json() const;
};

struct VerificationOptions {
    bool quick = false;  ///< branch algebra and overlap checks only
    unsigned threads = 0;
    /// Multiplies every tolerance.
    double tolerance_scale = 1.0;

    /// Reads PIGEONHOLE_VERIFY_TOLERANCE_SCALE into tolerance_scale.
    static VerificationOptions from_environment();
};

/// Oracle-equivalence and invariant suite.
VerificationReport run_verification(const VerificationOptions& options);

}  // namespace pigeonhole
