#include "pfsim/prefetch.hpp"

#include <algorithm>
#include <unordered_map>

namespace pfsim {

namespace {

// 45-bit block space with 64-byte lines.
constexpr uint64_t kBlockLimit = uint64_t{1} << 45;

}  // namespace

std::vector<PrefetchSuggestion> stride_suggest(const Ghb& ghb,
                                               BlockAddr miss_block,
                                               uint64_t miss_pc,
                                               const StrideConfig& cfg) {
  std::vector<PrefetchSuggestion> out;
  std::vector<uint64_t> chain = ghb.walk_chain(miss_pc);
  if (chain.size() < cfg.confirm_len || cfg.confirm_len < 2) return out;

  int64_t stride = 0;
  for (size_t i = 0; i + 1 < cfg.confirm_len; ++i) {
    int64_t delta = static_cast<int64_t>(ghb.at(chain[i]).block.value) -
                    static_cast<int64_t>(ghb.at(chain[i + 1]).block.value);
    if (i == 0) {
      stride = delta;
    } else if (delta != stride) {
      return out;
    }
  }
  if (stride == 0) return out;

  for (uint32_t d = 1; d <= cfg.degree; ++d) {
    int64_t candidate =
        static_cast<int64_t>(miss_block.value) + stride * static_cast<int64_t>(d);
    if (candidate < 0 || candidate >= static_cast<int64_t>(kBlockLimit)) break;
    out.push_back({BlockAddr{static_cast<uint64_t>(candidate)}, miss_block,
                   miss_pc, SuggestionOrigin::Stride, d - 1});
  }
  return out;
}

std::vector<PrefetchSuggestion> markov_suggest(const Ghb& ghb,
                                               BlockAddr miss_block,
                                               uint64_t miss_pc,
                                               const MarkovConfig& cfg) {
  std::vector<PrefetchSuggestion> out;
  if (ghb.mode() != GhbKeyMode::ByBlock || ghb.empty()) return out;

  struct Tally {
    uint64_t count = 0;
    uint64_t latest_seq = 0;
  };
  std::unordered_map<uint64_t, Tally> successors;

  std::vector<uint64_t> chain = ghb.walk_chain(miss_block.value);
  // chain[0] is the just-pushed trigger; only prior occurrences count.
  for (size_t i = 1; i < chain.size(); ++i) {
    uint64_t succ_seq = chain[i] + 1;
    if (!ghb.live(succ_seq)) continue;
    BlockAddr succ = ghb.at(succ_seq).block;
    if (succ == miss_block) continue;
    Tally& t = successors[succ.value];
    ++t.count;
    t.latest_seq = std::max(t.latest_seq, succ_seq);
  }
  if (successors.empty()) return out;

  std::vector<std::pair<uint64_t, Tally>> ranked(successors.begin(),
                                                 successors.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    if (a.second.latest_seq != b.second.latest_seq)
      return a.second.latest_seq > b.second.latest_seq;
    return a.first < b.first;
  });

  uint32_t n = std::min<uint32_t>(cfg.degree, static_cast<uint32_t>(ranked.size()));
  out.reserve(n);
  for (uint32_t r = 0; r < n; ++r) {
    out.push_back({BlockAddr{ranked[r].first}, miss_block, miss_pc,
                   SuggestionOrigin::Markov, r});
  }
  return out;
}

}  // namespace pfsim
