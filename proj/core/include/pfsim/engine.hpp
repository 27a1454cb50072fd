// Per-access datapath: hierarchy access; on a miss at the prefetcher's
// level, GHB push -> first-level suggestions -> perceptron vote ->
// prefetch fill or deny record -> table aging and training.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfsim/cache.hpp"
#include "pfsim/ghb.hpp"
#include "pfsim/perceptron.hpp"
#include "pfsim/prefetch.hpp"
#include "pfsim/tables.hpp"
#include "pfsim/types.hpp"

namespace pfsim {

enum class PrefetcherKind : uint8_t {
  None,
  Stride,
  StridePerceptron,
  Markov,
  MarkovPerceptron,
};

const char* prefetcher_name(PrefetcherKind kind);  // "none", "S", "SP", "M", "MP"

std::vector<CacheGeometry> default_cache_geometries(uint32_t line_bytes);

struct EngineConfig {
  PrefetcherKind prefetcher = PrefetcherKind::None;
  uint32_t line_bytes = 64;
  size_t ghb_capacity = 512;
  StrideConfig stride;
  MarkovConfig markov;
  PerceptronConfig perceptron;
  TableConfig tables;
  std::vector<CacheGeometry> caches;  // empty -> default L1/L2
  uint32_t memory_latency_cycles = 200;
  size_t prefetch_level = 1;  // index into caches
  bool record_latency_log = false;

  // Throws ConfigError; fills in default caches and aligns their line size.
  void finalize();

  bool uses_stride() const {
    return prefetcher == PrefetcherKind::Stride ||
           prefetcher == PrefetcherKind::StridePerceptron;
  }
  bool uses_perceptron() const {
    return prefetcher == PrefetcherKind::StridePerceptron ||
           prefetcher == PrefetcherKind::MarkovPerceptron;
  }
};

struct LevelReport {
  std::string name;
  uint64_t demand_accesses = 0;
  uint64_t demand_hits = 0;
  uint64_t demand_misses = 0;
  uint64_t prefetch_fills = 0;
  uint64_t prefetch_correct = 0;
  uint64_t prefetch_wrong = 0;
};

struct RunReport {
  std::string prefetcher;
  uint64_t trace_accesses = 0;
  std::vector<LevelReport> levels;
  uint64_t suggestions_issued = 0;
  uint64_t suggestions_accepted = 0;
  uint64_t suggestions_denied = 0;
  uint64_t prefetch_fills = 0;    // fills performed at the prefetch level
  uint64_t prefetch_correct = 0;  // of those, demand-used before eviction/flush
  uint64_t prefetch_wrong = 0;
  std::optional<double> amat;
  std::array<int, 5> final_weights{0, 0, 0, 0, 0};
  uint64_t train_events = 0;
  TableStats tables;
  // Wall time is informational only and deliberately left out of the
  // serialized report so identical runs serialize identically.
  double wall_ms = 0.0;
};

class Engine {
 public:
  explicit Engine(EngineConfig config);

  void step(const MemoryAccess& access);

  // Flush tables and the prefetch census, then assemble the report.
  RunReport finish();

  // Optional per-resolution training log (debugging aid); receives the
  // global step index, the resolution, and the weights after any update.
  using ResolutionHook = std::function<void(
      uint64_t step, const Resolution&, const std::array<int8_t, 5>& weights)>;
  void set_resolution_hook(ResolutionHook hook) { hook_ = std::move(hook); }

  const EngineConfig& config() const { return cfg_; }
  const Hierarchy& hierarchy() const { return hierarchy_; }
  const std::vector<uint32_t>& latency_log() const { return latency_log_; }

 private:
  void apply_resolutions();

  EngineConfig cfg_;
  Hierarchy hierarchy_;
  Ghb ghb_;
  Perceptron perceptron_;
  DecisionTables tables_;
  std::vector<Resolution> pending_;  // scratch, reused across steps
  std::vector<uint32_t> latency_log_;
  ResolutionHook hook_;
  uint64_t step_count_ = 0;
  uint64_t suggestions_issued_ = 0;
  uint64_t suggestions_accepted_ = 0;
  uint64_t suggestions_denied_ = 0;
  uint64_t prefetch_fills_ = 0;
  uint64_t train_events_ = 0;
  bool finished_ = false;
};

RunReport run_trace(const EngineConfig& config,
                    std::span<const MemoryAccess> trace);

}  // namespace pfsim
