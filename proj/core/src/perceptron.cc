#include "pfsim/perceptron.hpp"

#include <algorithm>
#include <cmath>

namespace pfsim {

RawFeatures extract_raw_features(const Ghb& ghb,
                                 const PrefetchSuggestion& suggestion,
                                 const QuantConfig& cfg) {
  RawFeatures raw;
  raw.pc_xor_block = static_cast<uint16_t>(
      (suggestion.block.value ^ (suggestion.trigger_pc >> 2)) & 0xFFFF);

  // Single pass for the suggestion block's min distance and occurrence count.
  raw.min_distance = ghb.capacity();
  size_t live = ghb.size();
  for (size_t d = 0; d < live; ++d) {
    if (ghb.at_distance(d).block == suggestion.block) {
      raw.min_distance = std::min(raw.min_distance, d);
      ++raw.occurrence_count;
    }
  }

  // Recency-decayed transition weight: for every prior occurrence of the
  // trigger block (head excluded), successors at FIFO offset m in [1, W]
  // matching the suggestion block contribute 2^(W-m). Integer accumulation,
  // one final division, so the value is exactly reproducible.
  const uint32_t window = cfg.f2_window;
  uint64_t numerator = 0;
  uint64_t occurrences = 0;
  for (size_t d = 1; d < live; ++d) {
    if (ghb.at_distance(d).block != suggestion.trigger_block) continue;
    ++occurrences;
    for (uint32_t m = 1; m <= window && m <= d; ++m) {
      if (ghb.at_distance(d - m).block == suggestion.block)
        numerator += uint64_t{1} << (window - m);
    }
  }
  if (occurrences > 0) {
    raw.transition_weight =
        static_cast<double>(numerator) /
        static_cast<double>(occurrences << window);
  }
  return raw;
}

int8_t quantize_f1(size_t distance, size_t ghb_capacity) {
  if (distance >= ghb_capacity && distance > 0) return -8;
  // 9 log-scale buckets: 0 -> +8, [2^k, 2^(k+1)) -> 6 - 2k, floor at -8.
  int bucket = 0;
  if (distance > 0) {
    bucket = 1;
    while ((size_t{1} << bucket) <= distance) ++bucket;
  }
  return static_cast<int8_t>(std::max(8 - 2 * bucket, -8));
}

int8_t quantize_f2(double weight) {
  long v = std::lround(-8.0 + 16.0 * weight);
  return static_cast<int8_t>(std::clamp(v, -8L, 8L));
}

int8_t quantize_f3(uint16_t value, uint32_t hash_mult) {
  // Multiplicative hash to a signed 4-bit bucket.
  uint32_t h = (static_cast<uint32_t>(value) * hash_mult) >> 28;
  return static_cast<int8_t>(static_cast<int>(h) - 8);
}

int8_t quantize_f4(size_t count, const std::array<int8_t, 7>& levels) {
  size_t bucket = 0;
  if (count > 0) {
    bucket = 1;
    while (bucket < levels.size() - 1 && (size_t{1} << bucket) <= count)
      ++bucket;
  }
  return levels[bucket];
}

FeatureVector quantize(const RawFeatures& raw, size_t ghb_capacity,
                       const QuantConfig& cfg) {
  FeatureVector x;
  x.v[0] = quantize_f1(raw.min_distance, ghb_capacity);
  x.v[1] = quantize_f2(raw.transition_weight);
  x.v[2] = quantize_f3(raw.pc_xor_block, cfg.f3_hash_mult);
  x.v[3] = quantize_f4(raw.occurrence_count, cfg.f4_levels);
  x.v[4] = 1;
  return x;
}

Decision Perceptron::decide(const FeatureVector& x) const {
  int32_t y = 0;
  for (size_t j = 0; j < w_.size(); ++j)
    y += static_cast<int32_t>(w_[j]) * static_cast<int32_t>(x.v[j]);
  return {y > 0 ? Vote::Accept : Vote::Deny, y};
}

void Perceptron::train(const FeatureVector& x, int desired, int real) {
  if (desired == real) return;
  for (size_t j = 0; j < w_.size(); ++j) {
    int32_t next = static_cast<int32_t>(w_[j]) +
                   alpha_ * (desired - real) * static_cast<int32_t>(x.v[j]);
    w_[j] = static_cast<int8_t>(std::clamp(next, -128, 127));
  }
}

}  // namespace pfsim
