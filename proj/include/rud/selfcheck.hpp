#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rud/spectral.hpp"

namespace rud {

struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first_failure;

    bool passed() const noexcept { return failed == 0 && checked > 0; }
};

struct SelfcheckOptions {
    /// Characteristic coefficients used by the spectral suites.
    spectral::CoefficientFn coefficients = spectral::coefficients;
};

/// Runs the built-in invariant suites: first-step universality, two-stage
/// identity, NAG form equivalence, closed form vs iteration, NAG/MOM
/// universal convergence, region exactness, gradient checks.
std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& options = {});

}  // namespace rud
