#pragma once

#include <iosfwd>

namespace passnode {

/// Runs one command. Exit status: 0 positive verdict, 2 negative verdict, 1 error.
/// The JSON report goes to `out` (or --out), the human summary to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace passnode
