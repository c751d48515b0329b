#pragma once

#include <string>

#include "moe/analysis.hpp"

namespace moe {

/// Schema version string embedded in every emitted report.
inline constexpr const char* kReportSchemaVersion = "1";

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// CSV form: a `# schema=<v>` comment line, a header line, then one row per
/// rung with the fixed column order
///   n,l,m,K_n,s1,s2,s3,total,sup,exceedance@<eps>...,kl,kappa_sq_l2,bound_holds
/// Optional fields render as empty cells. Numeric cells use format_double,
/// so identical reports serialize byte-identically.
std::string report_to_csv(const ConvergenceReport& report);

/// JSON document mirroring the CSV fields plus per-entry quad_tol, with
/// stable key order.
std::string report_to_json(const ConvergenceReport& report);

void write_file(const std::string& path, const std::string& contents);

}  // namespace moe
