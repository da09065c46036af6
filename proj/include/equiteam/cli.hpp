#pragma once

namespace equiteam {

// Entry point behind the equiteam binary; also called directly by tests.
// Returns the process exit status.
int run_cli(int argc, const char* const* argv);

}  // namespace equiteam
