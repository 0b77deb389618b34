#pragma once

#include <string>

#include "hexsweep/solver.hpp"

namespace hexsweep {

enum class CsvKind { GrindHist, Wavefront, Timing, Flux };

/// Write one report table as UTF-8 CSV with a header row and LF endings.
/// Returns the path written. grind_hist bins the per-solve spans (assemble
/// + dense solve, per element/angle/group) into 64 log-spaced bins.
std::string emit_csv(const RunReport& report, CsvKind kind, const std::string& out_dir);

std::string csv_file_name(CsvKind kind);

} // namespace hexsweep
