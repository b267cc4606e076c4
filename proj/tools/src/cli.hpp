#pragma once

#include <iosfwd>
#include <string>

#include "foliage/models.hpp"

namespace foliage::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

/// Resolves `heisenberg:d`, `su2:lambda`, `product:n,m` or `@path`.
/// Throws std::invalid_argument for unknown selectors.
FoliationModel resolveModel(const std::string& selector);

/// Runs the command line and returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace foliage::cli
