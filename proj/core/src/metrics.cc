#include "pfsim/metrics.hpp"

#include <cmath>

namespace pfsim {

namespace {

std::optional<double> ratio(uint64_t num, uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> prefetch_correct_rate(const RunReport& r) {
  return ratio(r.prefetch_correct, r.prefetch_fills);
}

std::optional<double> prefetch_error_rate(const RunReport& r) {
  return ratio(r.prefetch_wrong, r.prefetch_fills);
}

std::optional<double> deny_rate(const RunReport& r) {
  return ratio(r.suggestions_denied, r.suggestions_issued);
}

std::optional<double> suggestion_decrease(const RunReport& base,
                                          const RunReport& variant) {
  if (base.suggestions_issued == 0) return std::nullopt;
  return (static_cast<double>(base.suggestions_issued) -
          static_cast<double>(variant.suggestions_issued)) /
         static_cast<double>(base.suggestions_issued);
}

std::optional<double> hit_rate(const RunReport& r, size_t level) {
  if (level >= r.levels.size()) return std::nullopt;
  return ratio(r.levels[level].demand_hits, r.levels[level].demand_accesses);
}

double arithmetic_mean(std::span<const double> values) {
  if (values.empty()) throw EmptySuite();
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double geometric_mean(std::span<const double> values) {
  if (values.empty()) throw EmptySuite();
  double log_sum = 0.0;
  for (double v : values) {
    if (v <= 0.0)
      throw std::invalid_argument("geometric mean requires positive values");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

}  // namespace pfsim
