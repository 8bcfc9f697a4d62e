#pragma once

#include <ostream>
#include <string>

namespace dfsim {

/// Runs the embedded oracle-equivalence suite (small instances of every
/// module), printing one pass/fail line per suite. `inject_fault` forces
/// the named suite to fail, as a hook for exercising failure reporting.
/// Returns the number of failed suites.
int run_selftest(std::ostream& out, const std::string& inject_fault = "");

}  // namespace dfsim
