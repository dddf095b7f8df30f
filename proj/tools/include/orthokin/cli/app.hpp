#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orthokin::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNonGeneric = 2, kExitValidation = 3 };

/// Runs the command-line tool. args[0] is the program name. Payloads go to
/// `out` unless --out names a file; diagnostics and the wall time go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orthokin::cli
