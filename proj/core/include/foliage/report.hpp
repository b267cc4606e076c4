#pragma once

#include <optional>
#include <string>

#include "foliage/models.hpp"
#include "foliage/verify.hpp"

namespace foliage {

/// Single-line JSON records. Field sets are stable across runs; run
/// parameters travel inside each record.
std::string toJsonLine(const CheckReport& report);
std::string toJsonLine(const ValidationReport& report);
std::string toJsonLine(const std::string& model, const ConstantsReport& constants, std::optional<double> diameter,
                       std::optional<double> lambda1);

/// Appends `line` and a newline to the file at `path`, creating it if needed.
void appendRecord(const std::string& path, const std::string& line);

}  // namespace foliage
