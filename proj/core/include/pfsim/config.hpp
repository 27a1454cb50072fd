// JSON run configuration. Every field defaults to the standard setup
// (stride degree 2, Markov degree 4, 512-entry GHB, 256/32 decision tables,
// 32KB L1 / 256KB L2 with the prefetcher on L2), so an empty object is a
// valid config. Address-valued fields accept numbers or "0x..." strings.
#pragma once

#include <string>

#include "pfsim/engine.hpp"
#include "pfsim/trace_gen.hpp"

namespace pfsim {

// Parse a config object; unknown keys are rejected. Throws ConfigError.
EngineConfig parse_engine_config_json(const std::string& text);

// Parse a trace spec, either bare or wrapped as {"trace_spec": {...}}.
// Throws ConfigError on schema problems, SpecError on invariant violations.
TraceSpec parse_trace_spec_json(const std::string& text);

EngineConfig load_engine_config(const std::string& path);
TraceSpec load_trace_spec(const std::string& path);

PrefetcherKind prefetcher_from_name(const std::string& name);

}  // namespace pfsim
