// Global history buffer: fixed-capacity FIFO of miss block addresses with
// per-key link chains and an index table. Entries are identified by their
// monotonic push sequence number; a slot is live while its sequence number
// is among the most recent `capacity` pushes, so links and index pointers
// validate themselves against eviction (the 9-bit hardware link field is
// modeled as a full sequence number; the widening is simulation bookkeeping).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfsim/types.hpp"

namespace pfsim {

// Stride mode chains entries by PC, Markov mode by miss block address.
enum class GhbKeyMode : uint8_t { ByPc, ByBlock };

struct GhbEntry {
  BlockAddr block;
  uint64_t pc = 0;
};

class Ghb {
 public:
  Ghb(size_t capacity, GhbKeyMode mode);

  // Returns the new entry's sequence number. Evicts the oldest entry at
  // capacity.
  uint64_t push(BlockAddr block, uint64_t pc);

  size_t size() const { return size_; }
  size_t capacity() const { return capacity_; }
  GhbKeyMode mode() const { return mode_; }

  bool empty() const { return size_ == 0; }
  uint64_t head_seq() const { return next_seq_ - 1; }  // valid when !empty()

  bool live(uint64_t seq) const {
    return size_ > 0 && seq <= head_seq() && head_seq() - seq < size_;
  }

  const GhbEntry& at(uint64_t seq) const;

  // d == 0 is the most recent entry; d must be < size().
  const GhbEntry& at_distance(size_t d) const;
  uint64_t seq_at_distance(size_t d) const { return head_seq() - d; }

  // 0 for the head, increasing with age. Throws std::out_of_range for
  // evicted or never-pushed sequence numbers.
  size_t distance_from_head(uint64_t seq) const;

  // Validated link: the previous live entry with the same key, if any.
  std::optional<uint64_t> link_of(uint64_t seq) const;

  // Live entries whose key matches, newest first, following link pointers.
  std::vector<uint64_t> walk_chain(uint64_t key) const;

  uint64_t key_of(BlockAddr block, uint64_t pc) const {
    return mode_ == GhbKeyMode::ByPc ? pc : block.value;
  }

  // Number of index-table keys that still point at live entries.
  size_t index_live_keys() const;

  // One line per live entry, newest first: "dist=D seq=S block=B pc=P link=L".
  std::string dump() const;

 private:
  struct Slot {
    GhbEntry entry;
    uint64_t seq = 0;
    uint64_t link_seq = kNoLink;
    bool filled = false;
  };
  static constexpr uint64_t kNoLink = UINT64_MAX;

  const Slot& slot_for(uint64_t seq) const {
    return slots_[static_cast<size_t>(seq % capacity_)];
  }

  size_t capacity_;
  GhbKeyMode mode_;
  std::vector<Slot> slots_;
  std::unordered_map<uint64_t, uint64_t> index_;  // key -> most recent seq
  uint64_t next_seq_ = 0;
  size_t size_ = 0;
  uint64_t pushes_since_sweep_ = 0;
};

}  // namespace pfsim
