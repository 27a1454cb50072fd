// Metric family over RunReports. Pure functions; rates are absent (nullopt)
// when their denominator is zero.
#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "pfsim/engine.hpp"

namespace pfsim {

class EmptySuite : public std::invalid_argument {
 public:
  EmptySuite() : std::invalid_argument("metric aggregate over empty suite") {}
};

// prefetch_correct / prefetch_fills
std::optional<double> prefetch_correct_rate(const RunReport& r);

// prefetch_wrong / prefetch_fills; complements the correct rate after flush.
std::optional<double> prefetch_error_rate(const RunReport& r);

// suggestions_denied / suggestions_issued
std::optional<double> deny_rate(const RunReport& r);

// (issued_base - issued_variant) / issued_base; may be negative.
std::optional<double> suggestion_decrease(const RunReport& base,
                                          const RunReport& variant);

// demand_hits / demand_accesses at the given level.
std::optional<double> hit_rate(const RunReport& r, size_t level);

// Suite aggregators; throw EmptySuite. The geometric mean requires
// positive values.
double arithmetic_mean(std::span<const double> values);
double geometric_mean(std::span<const double> values);

}  // namespace pfsim
