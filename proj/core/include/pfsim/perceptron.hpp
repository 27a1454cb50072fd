// Second-level filter: feature extraction from the GHB, quantization to
// [-8, +8], the integer dot-product vote, and the error-correction update
// on five saturating 8-bit weights.
#pragma once

#include <array>
#include <cstdint>

#include "pfsim/ghb.hpp"
#include "pfsim/prefetch.hpp"
#include "pfsim/types.hpp"

namespace pfsim {

// Quantization bucket boundaries and constants, kept in one place so
// experiments can vary them.
struct QuantConfig {
  // Transition-weight window W: a successor at FIFO offset m in [1, W]
  // contributes 2^(W-m); the sum is normalized by occurrences * 2^W.
  uint32_t f2_window = 8;
  // Knuth multiplicative hash constant for the pc-xor-block feature.
  uint32_t f3_hash_mult = 2654435761u;
  // Occurrence-count levels for counts {0, 1, 2, 4, 8, 16, >=32}.
  std::array<int8_t, 7> f4_levels{-8, -5, -2, 0, 2, 5, 8};
};

struct PerceptronConfig {
  int32_t alpha = 1;  // learning rate
  QuantConfig quant;
};

// Raw features before quantization.
struct RawFeatures {
  size_t min_distance = 0;       // suggestion block's min GHB distance; capacity if absent
  double transition_weight = 0;  // recency-decayed successor weight in [0, 1)
  uint16_t pc_xor_block = 0;     // low 16 bits of block ^ (pc >> 2)
  size_t occurrence_count = 0;   // live GHB entries holding the block
};

// Quantized inputs; v[4] is the constant bias input, always 1.
struct FeatureVector {
  std::array<int8_t, 5> v{0, 0, 0, 0, 1};

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

enum class Vote : uint8_t { Accept, Deny };

struct Decision {
  Vote vote = Vote::Deny;
  int32_t y_out = 0;
};

RawFeatures extract_raw_features(const Ghb& ghb,
                                 const PrefetchSuggestion& suggestion,
                                 const QuantConfig& cfg);

int8_t quantize_f1(size_t distance, size_t ghb_capacity);
int8_t quantize_f2(double weight);
int8_t quantize_f3(uint16_t value, uint32_t hash_mult);
int8_t quantize_f4(size_t count, const std::array<int8_t, 7>& levels);

FeatureVector quantize(const RawFeatures& raw, size_t ghb_capacity,
                       const QuantConfig& cfg);

inline FeatureVector extract_features(const Ghb& ghb,
                                      const PrefetchSuggestion& suggestion,
                                      const QuantConfig& cfg) {
  return quantize(extract_raw_features(ghb, suggestion, cfg), ghb.capacity(),
                  cfg);
}

// One weight vector serves all suggestions. Weights saturate at int8 range;
// y_out stays within 13 bits (|y| <= 5 * 128 * 8) so plain int arithmetic
// is exact.
class Perceptron {
 public:
  explicit Perceptron(const PerceptronConfig& cfg) : alpha_(cfg.alpha) {}

  // Accept iff y_out strictly exceeds zero.
  Decision decide(const FeatureVector& x) const;

  // Error-correction rule: w_j += alpha * (desired - real) * x_j, clamped to
  // [-128, 127]. d and r are +/-1; no-op when they agree.
  void train(const FeatureVector& x, int desired, int real);

  const std::array<int8_t, 5>& weights() const { return w_; }
  void set_weights(const std::array<int8_t, 5>& w) { w_ = w; }

 private:
  std::array<int8_t, 5> w_{0, 0, 0, 0, 0};
  int32_t alpha_ = 1;
};

}  // namespace pfsim
