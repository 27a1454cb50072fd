#include "pfsim/trace_gen.hpp"

#include <cmath>
#include <deque>

#include "pfsim/rng.hpp"

namespace pfsim {

namespace {

constexpr uint64_t kBasePc = 0x400100;
constexpr uint64_t kPcStreamStep = 0x40;
constexpr double kRowSumTolerance = 1e-9;

void validate_generator(
    const std::variant<StridedSpec, MarkovChainSpec, UniformRandomSpec,
                       InterleavedSpec>& gen) {
  if (const auto* s = std::get_if<StridedSpec>(&gen)) {
    if (s->count == 0) throw SpecError("strided: count must be > 0");
    if (s->start_addr >= kAddressLimit)
      throw SpecError("strided: start_addr exceeds 48-bit address space");
    const __int128 last = static_cast<__int128>(s->start_addr) +
                          static_cast<__int128>(s->stride_bytes) *
                              static_cast<__int128>(s->count - 1);
    if (last < 0 || last >= static_cast<__int128>(kAddressLimit))
      throw SpecError("strided: addresses escape the 48-bit address space");
  } else if (const auto* m = std::get_if<MarkovChainSpec>(&gen)) {
    if (m->count == 0) throw SpecError("markov_chain: count must be > 0");
    if (m->states == 0) throw SpecError("markov_chain: states must be > 0");
    if (m->start_state >= m->states)
      throw SpecError("markov_chain: start_state out of range");
    if (m->transition.size() != m->states * m->states)
      throw SpecError("markov_chain: transition matrix must be states x states");
    for (size_t r = 0; r < m->states; ++r) {
      double sum = 0.0;
      for (size_t c = 0; c < m->states; ++c) {
        double p = m->transition[r * m->states + c];
        if (p < 0.0) throw SpecError("markov_chain: negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw SpecError("markov_chain: row " + std::to_string(r) +
                        " does not sum to 1");
    }
    uint64_t last =
        m->base_addr + (m->states - 1) * m->state_stride_bytes;
    if (last >= kAddressLimit || last < m->base_addr)
      throw SpecError("markov_chain: state addresses escape the address space");
  } else if (const auto* u = std::get_if<UniformRandomSpec>(&gen)) {
    if (u->count == 0) throw SpecError("uniform_random: count must be > 0");
    if (u->footprint_bytes == 0)
      throw SpecError("uniform_random: footprint_bytes must be > 0");
    if (u->base_addr + u->footprint_bytes > kAddressLimit)
      throw SpecError("uniform_random: footprint escapes the address space");
  } else if (const auto* iv = std::get_if<InterleavedSpec>(&gen)) {
    if (iv->streams.empty())
      throw SpecError("interleaved: needs at least one sub-stream");
    if (iv->granularity == 0)
      throw SpecError("interleaved: granularity must be > 0");
    for (const auto& sub : iv->streams) validate_generator(sub.generator);
  }
}

std::vector<MemoryAccess> generate_strided(const StridedSpec& s, uint64_t pc) {
  std::vector<MemoryAccess> out;
  out.reserve(s.count);
  for (uint64_t i = 0; i < s.count; ++i) {
    uint64_t addr = static_cast<uint64_t>(
        static_cast<int64_t>(s.start_addr) + s.stride_bytes * static_cast<int64_t>(i));
    out.push_back({pc, addr, AccessKind::Read});
  }
  return out;
}

std::vector<MemoryAccess> generate_markov(const MarkovChainSpec& m,
                                          uint64_t pc) {
  std::mt19937_64 rng(m.seed);
  std::vector<MemoryAccess> out;
  out.reserve(m.count);
  size_t state = m.start_state;
  for (uint64_t i = 0; i < m.count; ++i) {
    out.push_back(
        {pc, m.base_addr + state * m.state_stride_bytes, AccessKind::Read});
    double u = unit_draw(rng);
    double acc = 0.0;
    size_t next = m.states - 1;  // absorbs residual rounding mass
    for (size_t c = 0; c < m.states; ++c) {
      acc += m.transition[state * m.states + c];
      if (u < acc) {
        next = c;
        break;
      }
    }
    state = next;
  }
  return out;
}

std::vector<MemoryAccess> generate_uniform(const UniformRandomSpec& u,
                                           uint64_t pc) {
  std::mt19937_64 rng(u.seed);
  std::vector<MemoryAccess> out;
  out.reserve(u.count);
  for (uint64_t i = 0; i < u.count; ++i) {
    out.push_back(
        {pc, u.base_addr + bounded_draw(rng, u.footprint_bytes), AccessKind::Read});
  }
  return out;
}

// Leaf streams are numbered depth-first so PcPerStream assigns stable pcs.
std::vector<MemoryAccess> generate_node(const TraceSpec& spec,
                                        PcPolicy policy, size_t& stream_idx) {
  uint64_t pc = policy == PcPolicy::SinglePc
                    ? kBasePc
                    : kBasePc + kPcStreamStep * stream_idx;
  if (const auto* s = std::get_if<StridedSpec>(&spec.generator)) {
    ++stream_idx;
    return generate_strided(*s, pc);
  }
  if (const auto* m = std::get_if<MarkovChainSpec>(&spec.generator)) {
    ++stream_idx;
    return generate_markov(*m, pc);
  }
  if (const auto* u = std::get_if<UniformRandomSpec>(&spec.generator)) {
    ++stream_idx;
    return generate_uniform(*u, pc);
  }
  const auto& iv = std::get<InterleavedSpec>(spec.generator);
  std::deque<std::vector<MemoryAccess>> streams;
  for (const auto& sub : iv.streams)
    streams.push_back(generate_node(sub, policy, stream_idx));

  std::vector<MemoryAccess> out;
  std::vector<size_t> pos(streams.size(), 0);
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (size_t k = 0; k < streams.size(); ++k) {
      for (uint64_t g = 0; g < iv.granularity && pos[k] < streams[k].size();
           ++g) {
        out.push_back(streams[k][pos[k]++]);
        progressed = true;
      }
    }
  }
  return out;
}

}  // namespace

void validate_spec(const TraceSpec& spec) { validate_generator(spec.generator); }

std::vector<MemoryAccess> generate_trace(const TraceSpec& spec) {
  validate_spec(spec);
  size_t stream_idx = 0;
  return generate_node(spec, spec.pc_policy, stream_idx);
}

}  // namespace pfsim
