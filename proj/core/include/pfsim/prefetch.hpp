// First-level prefetchers: GHB stride and GHB Markov. Pure functions over
// the GHB snapshot; the engine serializes trigger handling.
#pragma once

#include <cstdint>
#include <vector>

#include "pfsim/ghb.hpp"
#include "pfsim/types.hpp"

namespace pfsim {

enum class SuggestionOrigin : uint8_t { Stride, Markov };

struct PrefetchSuggestion {
  BlockAddr block;
  BlockAddr trigger_block;
  uint64_t trigger_pc = 0;
  SuggestionOrigin origin = SuggestionOrigin::Stride;
  uint32_t rank = 0;  // position in the degree-ordered emission
};

struct StrideConfig {
  uint32_t degree = 2;
  uint32_t confirm_len = 3;  // chained addresses needed to confirm a stride
};

struct MarkovConfig {
  uint32_t degree = 4;
};

// The trigger miss must already be pushed (it heads its PC chain). Takes the
// newest confirm_len blocks of the chain; when all consecutive deltas agree
// on a nonzero stride s, emits A+s .. A+degree*s, dropping candidates that
// would leave the 45-bit block space.
std::vector<PrefetchSuggestion> stride_suggest(const Ghb& ghb,
                                               BlockAddr miss_block,
                                               uint64_t miss_pc,
                                               const StrideConfig& cfg);

// Walks prior occurrences of the trigger block (head excluded) and tallies
// the block pushed immediately after each one. Successors are ranked by
// descending count, then by recency of their latest occurrence, then by
// ascending block address; the top `degree` are emitted. The tie-break order
// is part of the contract so independent implementations agree exactly.
std::vector<PrefetchSuggestion> markov_suggest(const Ghb& ghb,
                                               BlockAddr miss_block,
                                               uint64_t miss_pc,
                                               const MarkovConfig& cfg);

}  // namespace pfsim
