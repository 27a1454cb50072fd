// Synthetic trace generators with known ground-truth access patterns.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pfsim/types.hpp"

namespace pfsim {

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

struct TraceSpec;

// addr_i = start_addr + i * stride_bytes
struct StridedSpec {
  uint64_t start_addr = 0;
  int64_t stride_bytes = 64;
  uint64_t count = 0;
};

// Random walk over a row-stochastic transition matrix; state i is mapped to
// byte address base_addr + i * state_stride_bytes. Emits the current state's
// address, then transitions.
struct MarkovChainSpec {
  size_t states = 0;
  std::vector<double> transition;  // row-major, states x states
  uint64_t count = 0;
  uint64_t seed = 0;
  size_t start_state = 0;
  uint64_t base_addr = 0x100000;
  uint64_t state_stride_bytes = 64;
};

// Byte addresses uniform over [base_addr, base_addr + footprint_bytes).
struct UniformRandomSpec {
  uint64_t footprint_bytes = 0;
  uint64_t count = 0;
  uint64_t seed = 0;
  uint64_t base_addr = 0;
};

// Round-robin merge of sub-streams, `granularity` records at a time.
// Exhausted streams drop out of the rotation.
struct InterleavedSpec {
  std::vector<TraceSpec> streams;
  uint64_t granularity = 1;
};

enum class PcPolicy : uint8_t { SinglePc, PcPerStream };

struct TraceSpec {
  std::variant<StridedSpec, MarkovChainSpec, UniformRandomSpec, InterleavedSpec>
      generator;
  PcPolicy pc_policy = PcPolicy::SinglePc;
};

// Throws SpecError on invariant violations (count == 0, bad matrix rows,
// addresses escaping the 48-bit space).
void validate_spec(const TraceSpec& spec);

// Deterministic for a fixed spec (seeds included). Throws SpecError.
std::vector<MemoryAccess> generate_trace(const TraceSpec& spec);

}  // namespace pfsim
