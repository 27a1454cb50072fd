// Set-associative LRU cache levels and the demand-latency hierarchy proxy.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfsim/types.hpp"

namespace pfsim {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct CacheGeometry {
  std::string name = "L?";
  uint64_t size_bytes = 0;
  uint32_t line_bytes = 64;
  uint32_t associativity = 0;
  uint32_t hit_latency_cycles = 0;
};

struct EvictedLine {
  BlockAddr block;
  bool was_prefetched = false;
  bool was_used = false;
  bool was_dirty = false;
};

struct AccessOutcome {
  bool hit = false;
  std::optional<EvictedLine> evicted;
  uint32_t latency_cycles = 0;
};

struct LevelStats {
  uint64_t demand_accesses = 0;
  uint64_t demand_hits = 0;
  uint64_t demand_misses = 0;
  uint64_t prefetch_fills = 0;
  uint64_t prefetch_correct = 0;  // prefetched line was demand-used before eviction/flush
  uint64_t prefetch_wrong = 0;    // evicted or flushed unused
  uint64_t evictions = 0;
};

class CacheLevel {
 public:
  // Throws ConfigError unless sizes are powers of two and
  // associativity * line_bytes divides size_bytes.
  explicit CacheLevel(const CacheGeometry& geometry);

  // Lookup without fill; on hit updates LRU and, for demand accesses,
  // the used_since_fill flag. Counts demand hits/misses.
  bool probe(BlockAddr block, AccessKind kind, bool demand);

  // Inserts a missing block, evicting LRU if the set is full. The eviction
  // census of prefetched lines happens here.
  std::optional<EvictedLine> fill(BlockAddr block, bool prefetched, bool dirty);

  // Single-level demand/prefetch access: probe, then fill on miss.
  AccessOutcome access(BlockAddr block, AccessKind kind, bool demand);

  bool contains(BlockAddr block) const;

  // Resolves still-resident prefetched lines (used -> correct, else wrong).
  void flush_prefetch_census();

  const LevelStats& stats() const { return stats_; }
  const CacheGeometry& geometry() const { return geom_; }

 private:
  struct Line {
    uint64_t tag = 0;
    uint64_t lru_stamp = 0;
    bool valid = false;
    bool dirty = false;
    bool prefetched = false;
    bool used_since_fill = false;
  };

  size_t set_of(BlockAddr block) const { return block.value & (num_sets_ - 1); }
  uint64_t tag_of(BlockAddr block) const { return block.value >> set_shift_; }
  BlockAddr block_from(uint64_t tag, size_t set) const {
    return BlockAddr{(tag << set_shift_) | set};
  }

  CacheGeometry geom_;
  size_t num_sets_ = 0;
  uint32_t set_shift_ = 0;
  std::vector<Line> lines_;  // num_sets * associativity, set-major
  uint64_t stamp_ = 0;
  LevelStats stats_;
};

struct HierarchyOutcome {
  size_t hit_level = 0;  // == level count when served by memory
  uint32_t latency_cycles = 0;
};

// Private, non-coherent levels probed top-down; a demand miss fills every
// level it passed through (prefetch fills are injected per level by the
// engine and bypass this path).
class Hierarchy {
 public:
  Hierarchy(const std::vector<CacheGeometry>& levels,
            uint32_t memory_latency_cycles);

  HierarchyOutcome demand_access(BlockAddr block, AccessKind kind);

  // Returns false when the block is already resident at that level.
  bool prefetch_fill(size_t level, BlockAddr block);
  bool level_contains(size_t level, BlockAddr block) const;

  void flush();

  size_t num_levels() const { return levels_.size(); }
  const CacheLevel& level(size_t i) const { return levels_[i]; }
  uint32_t memory_latency_cycles() const { return memory_latency_; }

  uint64_t demand_count() const { return demand_count_; }
  uint64_t total_demand_latency() const { return total_latency_; }
  // Mean demand latency; absent before the first demand access.
  std::optional<double> amat() const;

  // When set, every demand access appends its total latency.
  void set_latency_log(std::vector<uint32_t>* log) { latency_log_ = log; }

 private:
  std::vector<CacheLevel> levels_;
  uint32_t memory_latency_;
  uint64_t demand_count_ = 0;
  uint64_t total_latency_ = 0;
  std::vector<uint32_t>* latency_log_ = nullptr;
};

}  // namespace pfsim
