// RunReport serialization: versioned JSON (stable field order), a flat CSV
// row form for sweeps, and the four-variant comparison table.
#pragma once

#include <span>
#include <string>

#include "pfsim/engine.hpp"

namespace pfsim {

inline constexpr int kReportSchemaVersion = 1;

// Deterministic: identical reports serialize to identical bytes. Wall time
// is intentionally not included.
std::string report_to_json(const RunReport& report, bool pretty = true);

std::string report_csv_header();
std::string report_to_csv_row(const RunReport& report);

// Markdown table over the S/SP/M/MP family with SP-vs-S and MP-vs-M deltas.
// Reports must be ordered S, SP, M, MP.
std::string comparison_markdown(std::span<const RunReport> reports,
                                size_t prefetch_level);

std::string comparison_csv(std::span<const RunReport> reports,
                           size_t prefetch_level);

}  // namespace pfsim
