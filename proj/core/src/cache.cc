#include "pfsim/cache.hpp"

#include <bit>

namespace pfsim {

namespace {

bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

CacheLevel::CacheLevel(const CacheGeometry& geometry) : geom_(geometry) {
  if (!is_pow2(geom_.size_bytes) || !is_pow2(geom_.line_bytes) ||
      !is_pow2(geom_.associativity)) {
    throw ConfigError(geom_.name +
                      ": size, line size and associativity must be powers of two");
  }
  uint64_t way_bytes =
      static_cast<uint64_t>(geom_.associativity) * geom_.line_bytes;
  if (way_bytes == 0 || geom_.size_bytes % way_bytes != 0) {
    throw ConfigError(geom_.name +
                      ": associativity * line_bytes must divide size_bytes");
  }
  if (geom_.hit_latency_cycles == 0) {
    throw ConfigError(geom_.name + ": hit latency must be > 0");
  }
  num_sets_ = geom_.size_bytes / way_bytes;
  set_shift_ = static_cast<uint32_t>(std::countr_zero(num_sets_));
  lines_.resize(num_sets_ * geom_.associativity);
}

bool CacheLevel::probe(BlockAddr block, AccessKind kind, bool demand) {
  if (demand) ++stats_.demand_accesses;
  size_t base = set_of(block) * geom_.associativity;
  uint64_t tag = tag_of(block);
  for (size_t w = 0; w < geom_.associativity; ++w) {
    Line& line = lines_[base + w];
    if (line.valid && line.tag == tag) {
      line.lru_stamp = ++stamp_;
      if (demand) {
        line.used_since_fill = true;
        if (kind == AccessKind::Write) line.dirty = true;
        ++stats_.demand_hits;
      }
      return true;
    }
  }
  if (demand) ++stats_.demand_misses;
  return false;
}

std::optional<EvictedLine> CacheLevel::fill(BlockAddr block, bool prefetched,
                                            bool dirty) {
  size_t set = set_of(block);
  size_t base = set * geom_.associativity;
  size_t victim = 0;
  bool found_invalid = false;
  uint64_t oldest = UINT64_MAX;
  for (size_t w = 0; w < geom_.associativity; ++w) {
    const Line& line = lines_[base + w];
    if (!line.valid) {
      victim = w;
      found_invalid = true;
      break;
    }
    if (line.lru_stamp < oldest) {
      oldest = line.lru_stamp;
      victim = w;
    }
  }

  std::optional<EvictedLine> evicted;
  Line& slot = lines_[base + victim];
  if (!found_invalid) {
    evicted = EvictedLine{block_from(slot.tag, set), slot.prefetched,
                          slot.used_since_fill, slot.dirty};
    ++stats_.evictions;
    if (slot.prefetched) {
      if (slot.used_since_fill)
        ++stats_.prefetch_correct;
      else
        ++stats_.prefetch_wrong;
    }
  }
  slot = Line{tag_of(block), ++stamp_, true, dirty, prefetched,
              /*used_since_fill=*/!prefetched};
  if (prefetched) ++stats_.prefetch_fills;
  return evicted;
}

AccessOutcome CacheLevel::access(BlockAddr block, AccessKind kind,
                                 bool demand) {
  AccessOutcome out;
  out.latency_cycles = geom_.hit_latency_cycles;
  out.hit = probe(block, kind, demand);
  if (!out.hit) {
    out.evicted =
        fill(block, /*prefetched=*/!demand,
             /*dirty=*/demand && kind == AccessKind::Write);
  }
  return out;
}

bool CacheLevel::contains(BlockAddr block) const {
  size_t base = set_of(block) * geom_.associativity;
  uint64_t tag = tag_of(block);
  for (size_t w = 0; w < geom_.associativity; ++w) {
    const Line& line = lines_[base + w];
    if (line.valid && line.tag == tag) return true;
  }
  return false;
}

void CacheLevel::flush_prefetch_census() {
  for (const Line& line : lines_) {
    if (!line.valid || !line.prefetched) continue;
    if (line.used_since_fill)
      ++stats_.prefetch_correct;
    else
      ++stats_.prefetch_wrong;
  }
}

Hierarchy::Hierarchy(const std::vector<CacheGeometry>& levels,
                     uint32_t memory_latency_cycles)
    : memory_latency_(memory_latency_cycles) {
  if (levels.empty()) throw ConfigError("hierarchy needs at least one level");
  if (memory_latency_ == 0) throw ConfigError("memory latency must be > 0");
  levels_.reserve(levels.size());
  for (const auto& g : levels) levels_.emplace_back(g);
}

HierarchyOutcome Hierarchy::demand_access(BlockAddr block, AccessKind kind) {
  HierarchyOutcome out;
  out.hit_level = levels_.size();
  for (size_t i = 0; i < levels_.size(); ++i) {
    out.latency_cycles += levels_[i].geometry().hit_latency_cycles;
    if (levels_[i].probe(block, kind, /*demand=*/true)) {
      out.hit_level = i;
      break;
    }
  }
  if (out.hit_level == levels_.size()) out.latency_cycles += memory_latency_;

  // Fill every level that missed; the write dirties only the topmost copy.
  for (size_t i = 0; i < out.hit_level && i < levels_.size(); ++i) {
    levels_[i].fill(block, /*prefetched=*/false,
                    /*dirty=*/i == 0 && kind == AccessKind::Write);
  }

  ++demand_count_;
  total_latency_ += out.latency_cycles;
  if (latency_log_) latency_log_->push_back(out.latency_cycles);
  return out;
}

bool Hierarchy::prefetch_fill(size_t level, BlockAddr block) {
  CacheLevel& lvl = levels_.at(level);
  if (lvl.contains(block)) return false;
  lvl.fill(block, /*prefetched=*/true, /*dirty=*/false);
  return true;
}

bool Hierarchy::level_contains(size_t level, BlockAddr block) const {
  return levels_.at(level).contains(block);
}

void Hierarchy::flush() {
  for (auto& lvl : levels_) lvl.flush_prefetch_census();
}

std::optional<double> Hierarchy::amat() const {
  if (demand_count_ == 0) return std::nullopt;
  return static_cast<double>(total_latency_) /
         static_cast<double>(demand_count_);
}

}  // namespace pfsim
