#pragma once

#include <string>
#include <vector>

namespace vsl {

// CLI entry point (shared by the vslsim binary and tests).
// Returns the process exit code; errors are printed with scenario context.
int run(const std::vector<std::string>& args);

// Built-in self checks behind --seed-check; returns 0 when all pass.
int seed_check();

}  // namespace vsl
