#include "pfsim/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pfsim/metrics.hpp"

namespace pfsim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_rate(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

}  // namespace

std::string report_to_json(const RunReport& r, bool pretty) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["prefetcher"] = r.prefetcher;
  j["trace_accesses"] = r.trace_accesses;

  ordered_json levels = ordered_json::array();
  for (const LevelReport& lvl : r.levels) {
    ordered_json l;
    l["name"] = lvl.name;
    l["demand_accesses"] = lvl.demand_accesses;
    l["demand_hits"] = lvl.demand_hits;
    l["demand_misses"] = lvl.demand_misses;
    l["prefetch_fills"] = lvl.prefetch_fills;
    l["prefetch_correct"] = lvl.prefetch_correct;
    l["prefetch_wrong"] = lvl.prefetch_wrong;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);

  j["suggestions_issued"] = r.suggestions_issued;
  j["suggestions_accepted"] = r.suggestions_accepted;
  j["suggestions_denied"] = r.suggestions_denied;
  j["prefetch_fills"] = r.prefetch_fills;
  j["prefetch_correct"] = r.prefetch_correct;
  j["prefetch_wrong"] = r.prefetch_wrong;
  if (r.amat)
    j["amat_cycles"] = *r.amat;
  else
    j["amat_cycles"] = nullptr;
  j["final_weights"] = r.final_weights;
  j["train_events"] = r.train_events;
  j["tables"] = {{"accepts_recorded", r.tables.accepts_recorded},
                 {"accepts_resolved", r.tables.accepts_resolved},
                 {"denies_recorded", r.tables.denies_recorded},
                 {"denies_resolved", r.tables.denies_resolved}};
  return pretty ? j.dump(2) + "\n" : j.dump() + "\n";
}

std::string report_csv_header() {
  return "prefetcher,trace_accesses,l1_accesses,l1_hits,l1_misses,"
         "l2_accesses,l2_hits,l2_misses,suggestions_issued,"
         "suggestions_accepted,suggestions_denied,prefetch_fills,"
         "prefetch_correct,prefetch_wrong,amat_cycles,w1,w2,w3,w4,w5,"
         "train_events\n";
}

std::string report_to_csv_row(const RunReport& r) {
  auto level = [&](size_t i) -> LevelReport {
    return i < r.levels.size() ? r.levels[i] : LevelReport{};
  };
  LevelReport l1 = level(0);
  LevelReport l2 = level(1);
  char buf[512];
  std::snprintf(
      buf, sizeof(buf),
      "%s,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64
      ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64
      ",%" PRIu64 ",%" PRIu64 ",%s,%d,%d,%d,%d,%d,%" PRIu64 "\n",
      r.prefetcher.c_str(), r.trace_accesses, l1.demand_accesses,
      l1.demand_hits, l1.demand_misses, l2.demand_accesses, l2.demand_hits,
      l2.demand_misses, r.suggestions_issued, r.suggestions_accepted,
      r.suggestions_denied, r.prefetch_fills, r.prefetch_correct,
      r.prefetch_wrong, fmt_rate(r.amat).c_str(), r.final_weights[0],
      r.final_weights[1], r.final_weights[2], r.final_weights[3],
      r.final_weights[4], r.train_events);
  return buf;
}

namespace {

struct VariantMetrics {
  std::string name;
  std::optional<double> hit;
  std::optional<double> correct;
  std::optional<double> error;
  std::optional<double> deny;
  uint64_t issued;
  uint64_t fills;
  std::optional<double> amat;
  std::optional<double> decrease;  // vs the variant's baseline
};

std::vector<VariantMetrics> collect(std::span<const RunReport> reports,
                                    size_t prefetch_level) {
  std::vector<VariantMetrics> rows;
  for (size_t i = 0; i < reports.size(); ++i) {
    const RunReport& r = reports[i];
    VariantMetrics m;
    m.name = r.prefetcher;
    m.hit = hit_rate(r, prefetch_level);
    m.correct = prefetch_correct_rate(r);
    m.error = prefetch_error_rate(r);
    m.deny = deny_rate(r);
    m.issued = r.suggestions_issued;
    m.fills = r.prefetch_fills;
    m.amat = r.amat;
    // S,SP,M,MP ordering: odd rows are perceptron variants of the row before.
    if (i % 2 == 1) m.decrease = suggestion_decrease(reports[i - 1], r);
    rows.push_back(std::move(m));
  }
  return rows;
}

}  // namespace

std::string comparison_markdown(std::span<const RunReport> reports,
                                size_t prefetch_level) {
  std::ostringstream out;
  out << "| variant | L2 hit rate | correct rate | error rate | deny rate | "
         "suggestions | fills | amat | suggestion decrease |\n";
  out << "|---|---|---|---|---|---|---|---|---|\n";
  for (const VariantMetrics& m : collect(reports, prefetch_level)) {
    out << "| " << m.name << " | " << fmt_rate(m.hit) << " | "
        << fmt_rate(m.correct) << " | " << fmt_rate(m.error) << " | "
        << fmt_rate(m.deny) << " | " << m.issued << " | " << m.fills << " | "
        << fmt_rate(m.amat) << " | " << fmt_rate(m.decrease) << " |\n";
  }
  return out.str();
}

std::string comparison_csv(std::span<const RunReport> reports,
                           size_t prefetch_level) {
  std::ostringstream out;
  out << "variant,hit_rate,correct_rate,error_rate,deny_rate,suggestions,"
         "fills,amat,suggestion_decrease\n";
  for (const VariantMetrics& m : collect(reports, prefetch_level)) {
    out << m.name << ',' << fmt_rate(m.hit) << ',' << fmt_rate(m.correct)
        << ',' << fmt_rate(m.error) << ',' << fmt_rate(m.deny) << ','
        << m.issued << ',' << m.fills << ',' << fmt_rate(m.amat) << ','
        << fmt_rate(m.decrease) << '\n';
  }
  return out.str();
}

}  // namespace pfsim
