#pragma once

#include <string>
#include <vector>

#include "vmhs/diagnostics.hpp"

namespace vmhs {

// Fixed CSV schema; numbers carry 17 significant digits so parsing a row back
// reproduces the f64 values bit-exactly.
extern const char* const kDiagnosticsCsvHeader;

// Writes the header when the file does not yet exist (or is empty), then
// appends one row. Refuses non-finite values.
void append_diagnostics(const DiagnosticsRecord& record, const std::string& csv_path);

std::string format_diagnostics_row(const DiagnosticsRecord& record);

// Parses a full diagnostics CSV (header + rows); used by checkpoint resume
// and the test harness.
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& csv_path);

}  // namespace vmhs
