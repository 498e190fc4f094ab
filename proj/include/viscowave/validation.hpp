#pragma once

// Property suites run by `viscowave validate`: sampled complete monotonicity
// of the kernel, Pick property of the symbol and of kappa, monotonicity and
// limits of the dispersion curves, family-specific closed forms and the
// consistency of the wavefront classifier.

#include <string>
#include <vector>

#include "viscowave/kernels.hpp"

namespace viscowave::validation {

struct Check {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;
    bool pass() const;
};

Report run_suite(const Medium& medium, const RelaxationKernel& kernel);

/// Report for a model that could not be constructed: one failed check named
/// after the violated invariant (message prefix "name: ...") or "config.constructor".
Report construction_failure(const std::string& message);

}  // namespace viscowave::validation
