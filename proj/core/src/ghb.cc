#include "pfsim/ghb.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace pfsim {

Ghb::Ghb(size_t capacity, GhbKeyMode mode) : capacity_(capacity), mode_(mode) {
  if (capacity_ == 0) throw std::invalid_argument("GHB capacity must be > 0");
  slots_.resize(capacity_);
}

uint64_t Ghb::push(BlockAddr block, uint64_t pc) {
  uint64_t seq = next_seq_++;
  uint64_t key = key_of(block, pc);

  uint64_t link = kNoLink;
  if (auto it = index_.find(key); it != index_.end()) {
    // The index may point at an evicted slot; treat that as no predecessor.
    if (size_ > 0 && it->second + capacity_ > seq &&
        slot_for(it->second).seq == it->second) {
      link = it->second;
    }
  }

  Slot& slot = slots_[static_cast<size_t>(seq % capacity_)];
  slot = Slot{GhbEntry{block, pc}, seq, link, true};
  index_[key] = seq;
  if (size_ < capacity_) ++size_;

  // Bound the index table: drop keys whose entries have been evicted.
  if (++pushes_since_sweep_ >= capacity_) {
    pushes_since_sweep_ = 0;
    for (auto it = index_.begin(); it != index_.end();) {
      if (!live(it->second))
        it = index_.erase(it);
      else
        ++it;
    }
  }
  return seq;
}

const GhbEntry& Ghb::at(uint64_t seq) const {
  if (!live(seq)) throw std::out_of_range("GHB entry evicted or unknown");
  return slot_for(seq).entry;
}

const GhbEntry& Ghb::at_distance(size_t d) const {
  if (d >= size_) throw std::out_of_range("GHB distance exceeds live entries");
  return at(head_seq() - d);
}

size_t Ghb::distance_from_head(uint64_t seq) const {
  if (!live(seq)) throw std::out_of_range("GHB entry evicted or unknown");
  return static_cast<size_t>(head_seq() - seq);
}

std::optional<uint64_t> Ghb::link_of(uint64_t seq) const {
  if (!live(seq)) throw std::out_of_range("GHB entry evicted or unknown");
  uint64_t link = slot_for(seq).link_seq;
  if (link == kNoLink || !live(link)) return std::nullopt;
  return link;
}

std::vector<uint64_t> Ghb::walk_chain(uint64_t key) const {
  std::vector<uint64_t> chain;
  auto it = index_.find(key);
  if (it == index_.end() || !live(it->second)) return chain;
  uint64_t seq = it->second;
  while (true) {
    chain.push_back(seq);
    uint64_t link = slot_for(seq).link_seq;
    if (link == kNoLink || !live(link)) break;
    seq = link;
  }
  return chain;
}

size_t Ghb::index_live_keys() const {
  size_t n = 0;
  for (const auto& [key, seq] : index_) {
    if (live(seq)) ++n;
  }
  return n;
}

std::string Ghb::dump() const {
  std::string out;
  char buf[128];
  for (size_t d = 0; d < size_; ++d) {
    uint64_t seq = head_seq() - d;
    const Slot& s = slot_for(seq);
    auto link = link_of(seq);
    std::snprintf(buf, sizeof(buf),
                  "dist=%zu seq=%" PRIu64 " block=%" PRIx64 " pc=%" PRIx64
                  " link=",
                  d, seq, s.entry.block.value, s.entry.pc);
    out += buf;
    out += link ? std::to_string(*link) : "none";
    out += '\n';
  }
  return out;
}

}  // namespace pfsim
