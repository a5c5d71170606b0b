#ifndef CVEPR_CLI_HPP
#define CVEPR_CLI_HPP

namespace cvepr::cli {

/// Command-line front end.  Exit codes: 0 success, 2 validation error,
/// 1 numerical failure (with a machine-readable JSON error on stderr).
int run(int argc, const char* const* argv);

}  // namespace cvepr::cli

#endif  // CVEPR_CLI_HPP
