// Accept/deny decision-trace tables. Each recorded decision is resolved
// exactly once: by a matching access/miss, by its duration timeout, by
// eviction when a new entry enters a full table, or by the end-of-run flush.
// Resolutions carry the desired/real labels so the engine can feed training.
#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "pfsim/perceptron.hpp"
#include "pfsim/types.hpp"

namespace pfsim {

struct TableConfig {
  size_t accept_capacity = 256;
  size_t deny_capacity = 32;
  uint32_t accept_window = 256;  // demand references before a wrong accept
  uint32_t deny_window = 32;     // prefetch triggers before a correct deny
};

struct Resolution {
  enum class Kind : uint8_t {
    CorrectAccept,  // accepted block demand-referenced in time (d == r)
    WrongAccept,    // timed out, evicted, or flushed unused (d=-1, r=+1)
    WrongDeny,      // denied block missed again in time (d=+1, r=-1)
    CorrectDeny,    // timed out, evicted, or flushed untouched (d == r)
  };
  enum class Cause : uint8_t { Touch, Timeout, Evict, Flush };

  Kind kind;
  Cause cause;
  BlockAddr block;
  FeatureVector features;
  int desired = 0;  // +1 prefetch-worthy, -1 not
  int real = 0;     // +1 was accepted, -1 was denied
};

struct TableStats {
  uint64_t accepts_recorded = 0;
  uint64_t denies_recorded = 0;
  uint64_t accepts_resolved = 0;
  uint64_t denies_resolved = 0;
};

class DecisionTables {
 public:
  explicit DecisionTables(const TableConfig& cfg);

  // Record a vote. At capacity the oldest entry is evicted first: an evicted
  // accept resolves as a wrong prediction, an evicted deny as a correct one.
  void record_accept(BlockAddr block, const FeatureVector& x,
                     std::vector<Resolution>& out);
  void record_deny(BlockAddr block, const FeatureVector& x,
                   std::vector<Resolution>& out);

  // Demand reference at the prefetcher's level: ages the accept table,
  // resolves matching entries as correct, times out stale ones as wrong.
  void on_demand_access(BlockAddr block, std::vector<Resolution>& out);

  // Prefetch trigger (demand miss at the prefetcher's level): ages the deny
  // table, resolves matching entries as wrong denies, times out stale ones
  // as correct denies.
  void on_cache_miss(BlockAddr block, std::vector<Resolution>& out);

  // End of run: residual accepts resolve wrong, residual denies correct.
  void flush(std::vector<Resolution>& out);

  size_t accept_size() const { return accept_.size(); }
  size_t deny_size() const { return deny_.size(); }
  const TableStats& stats() const { return stats_; }

 private:
  struct Entry {
    BlockAddr block;
    FeatureVector features;
    uint32_t duration = 0;
  };

  TableConfig cfg_;
  std::deque<Entry> accept_;  // front is oldest
  std::deque<Entry> deny_;
  TableStats stats_;
};

}  // namespace pfsim
