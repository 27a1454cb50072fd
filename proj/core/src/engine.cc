#include "pfsim/engine.hpp"

#include <chrono>

namespace pfsim {

const char* prefetcher_name(PrefetcherKind kind) {
  switch (kind) {
    case PrefetcherKind::None:
      return "none";
    case PrefetcherKind::Stride:
      return "S";
    case PrefetcherKind::StridePerceptron:
      return "SP";
    case PrefetcherKind::Markov:
      return "M";
    case PrefetcherKind::MarkovPerceptron:
      return "MP";
  }
  return "?";
}

std::vector<CacheGeometry> default_cache_geometries(uint32_t line_bytes) {
  return {
      {"L1", 32 * 1024, line_bytes, 8, 4},
      {"L2", 256 * 1024, line_bytes, 8, 6},
  };
}

void EngineConfig::finalize() {
  if (line_bytes < 16 || line_bytes > 256 ||
      (line_bytes & (line_bytes - 1)) != 0) {
    throw ConfigError("line_bytes must be a power of two in [16, 256]");
  }
  if (caches.empty()) caches = default_cache_geometries(line_bytes);
  for (auto& g : caches) g.line_bytes = line_bytes;
  if (prefetch_level >= caches.size()) {
    throw ConfigError("prefetch_level out of range");
  }
  if (ghb_capacity == 0) throw ConfigError("ghb_capacity must be > 0");
  if (stride.confirm_len < 2) {
    throw ConfigError("stride confirm_len must be at least 2");
  }
  if (ghb_capacity < stride.confirm_len) {
    throw ConfigError("ghb_capacity must cover stride confirm_len");
  }
  if (stride.degree == 0 || markov.degree == 0) {
    throw ConfigError("prefetch degree must be > 0");
  }
  if (perceptron.alpha <= 0) throw ConfigError("alpha must be > 0");
  if (perceptron.quant.f2_window == 0 || perceptron.quant.f2_window > 63) {
    throw ConfigError("f2_window must be in [1, 63]");
  }
}

namespace {

EngineConfig finalized(EngineConfig cfg) {
  cfg.finalize();
  return cfg;
}

}  // namespace

Engine::Engine(EngineConfig config)
    : cfg_(finalized(std::move(config))),
      hierarchy_(cfg_.caches, cfg_.memory_latency_cycles),
      ghb_(cfg_.ghb_capacity,
           cfg_.uses_stride() ? GhbKeyMode::ByPc : GhbKeyMode::ByBlock),
      perceptron_(cfg_.perceptron),
      tables_(cfg_.tables) {
  if (cfg_.record_latency_log) hierarchy_.set_latency_log(&latency_log_);
}

void Engine::apply_resolutions() {
  for (const Resolution& r : pending_) {
    if (cfg_.uses_perceptron() && r.desired != r.real) {
      perceptron_.train(r.features, r.desired, r.real);
      ++train_events_;
    }
    if (hook_) hook_(step_count_, r, perceptron_.weights());
  }
  pending_.clear();
}

void Engine::step(const MemoryAccess& access) {
  ++step_count_;
  BlockAddr block = block_of(access, cfg_.line_bytes);
  HierarchyOutcome out = hierarchy_.demand_access(block, access.kind);

  if (cfg_.prefetcher == PrefetcherKind::None) return;

  const size_t pl = cfg_.prefetch_level;
  if (out.hit_level < pl) return;  // prefetch level never probed

  // Demand reference at the prefetcher's level ages the accept table.
  tables_.on_demand_access(block, pending_);
  apply_resolutions();

  if (out.hit_level == pl) return;  // hit: no trigger

  // Miss at the prefetcher's level: age the deny table, then run the
  // suggestion datapath for this trigger.
  tables_.on_cache_miss(block, pending_);
  apply_resolutions();

  ghb_.push(block, access.pc);

  std::vector<PrefetchSuggestion> suggestions =
      cfg_.uses_stride()
          ? stride_suggest(ghb_, block, access.pc, cfg_.stride)
          : markov_suggest(ghb_, block, access.pc, cfg_.markov);
  suggestions_issued_ += suggestions.size();

  for (const PrefetchSuggestion& s : suggestions) {
    FeatureVector x = extract_features(ghb_, s, cfg_.perceptron.quant);
    bool accept = true;
    if (cfg_.uses_perceptron()) accept = perceptron_.decide(x).vote == Vote::Accept;

    if (accept) {
      ++suggestions_accepted_;
      tables_.record_accept(s.block, x, pending_);
      // Already-resident blocks are voted on and recorded but not re-filled.
      if (hierarchy_.prefetch_fill(pl, s.block)) ++prefetch_fills_;
    } else {
      ++suggestions_denied_;
      tables_.record_deny(s.block, x, pending_);
    }
    apply_resolutions();
  }
}

RunReport Engine::finish() {
  if (!finished_) {
    finished_ = true;
    if (cfg_.prefetcher != PrefetcherKind::None) {
      tables_.flush(pending_);
      apply_resolutions();
    }
    hierarchy_.flush();
  }

  RunReport report;
  report.prefetcher = prefetcher_name(cfg_.prefetcher);
  report.trace_accesses = step_count_;
  for (size_t i = 0; i < hierarchy_.num_levels(); ++i) {
    const CacheLevel& lvl = hierarchy_.level(i);
    const LevelStats& st = lvl.stats();
    report.levels.push_back({lvl.geometry().name, st.demand_accesses,
                             st.demand_hits, st.demand_misses,
                             st.prefetch_fills, st.prefetch_correct,
                             st.prefetch_wrong});
  }
  report.suggestions_issued = suggestions_issued_;
  report.suggestions_accepted = suggestions_accepted_;
  report.suggestions_denied = suggestions_denied_;
  report.prefetch_fills = prefetch_fills_;
  const LevelStats& pst = hierarchy_.level(cfg_.prefetch_level).stats();
  report.prefetch_correct = pst.prefetch_correct;
  report.prefetch_wrong = pst.prefetch_wrong;
  report.amat = hierarchy_.amat();
  const auto& w = perceptron_.weights();
  for (size_t j = 0; j < w.size(); ++j) report.final_weights[j] = w[j];
  report.train_events = train_events_;
  report.tables = tables_.stats();
  return report;
}

RunReport run_trace(const EngineConfig& config,
                    std::span<const MemoryAccess> trace) {
  auto t0 = std::chrono::steady_clock::now();
  Engine engine(config);
  for (const MemoryAccess& access : trace) engine.step(access);
  RunReport report = engine.finish();
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return report;
}

}  // namespace pfsim
