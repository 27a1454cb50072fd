// Core domain types shared across the simulator.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace pfsim {

// 48-bit virtual address space; pc and addr must stay below this.
inline constexpr uint64_t kAddressSpaceBits = 48;
inline constexpr uint64_t kAddressLimit = uint64_t{1} << kAddressSpaceBits;

enum class AccessKind : uint8_t { Read, Write };

// One trace record: the referencing instruction and the byte address it touches.
struct MemoryAccess {
  uint64_t pc = 0;
  uint64_t addr = 0;
  AccessKind kind = AccessKind::Read;

  friend bool operator==(const MemoryAccess&, const MemoryAccess&) = default;
};

// Cache-line granular address (byte address >> log2(line_bytes)).
// With 64-byte lines a 48-bit address fits in 42 bits, within the 45-bit budget.
struct BlockAddr {
  uint64_t value = 0;

  friend auto operator<=>(const BlockAddr&, const BlockAddr&) = default;
};

inline constexpr uint32_t kDefaultLineBytes = 64;

inline BlockAddr block_of(const MemoryAccess& access,
                          uint32_t line_bytes = kDefaultLineBytes) {
  // line_bytes is validated (power of two) at configuration time.
  uint32_t shift = 0;
  while ((uint32_t{1} << shift) < line_bytes) ++shift;
  return BlockAddr{access.addr >> shift};
}

}  // namespace pfsim

template <>
struct std::hash<pfsim::BlockAddr> {
  size_t operator()(const pfsim::BlockAddr& b) const noexcept {
    return std::hash<uint64_t>{}(b.value);
  }
};
