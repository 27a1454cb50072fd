#include "pfsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pfsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key))
      fail(where + ": unknown key '" + key + "'");
  }
}

uint64_t get_u64(const json& obj, const std::string& key, uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      size_t pos = 0;
      uint64_t parsed = std::stoull(s, &pos, 0);
      if (pos == s.size()) return parsed;
    } catch (const std::exception&) {
    }
  }
  fail(key + ": expected unsigned integer or hex string");
}

int64_t get_i64(const json& obj, const std::string& key, int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<int64_t>();
  fail(key + ": expected integer");
}

json parse_text(const std::string& text, const std::string& what) {
  json obj = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) fail(what + ": invalid JSON");
  if (!obj.is_object()) fail(what + ": expected a JSON object");
  return obj;
}

TraceSpec parse_spec_object(const json& obj, bool top_level);

TraceSpec parse_generator(const json& obj, bool top_level) {
  if (!obj.contains("kind") || !obj.at("kind").is_string())
    fail("trace_spec: missing generator 'kind'");
  const std::string kind = obj.at("kind").get<std::string>();
  TraceSpec spec;

  std::set<std::string> allowed{"kind"};
  if (top_level) allowed.insert("pc_policy");

  if (kind == "strided") {
    allowed.insert({"start_addr", "stride_bytes", "count"});
    check_keys(obj, allowed, "strided");
    StridedSpec s;
    s.start_addr = get_u64(obj, "start_addr", 0x1000);
    s.stride_bytes = get_i64(obj, "stride_bytes", 64);
    s.count = get_u64(obj, "count", 0);
    spec.generator = s;
  } else if (kind == "markov_chain") {
    allowed.insert({"states", "transition", "count", "seed", "start_state",
                    "base_addr", "state_stride_bytes"});
    check_keys(obj, allowed, "markov_chain");
    MarkovChainSpec m;
    m.states = get_u64(obj, "states", 0);
    m.count = get_u64(obj, "count", 0);
    m.seed = get_u64(obj, "seed", 0);
    m.start_state = get_u64(obj, "start_state", 0);
    m.base_addr = get_u64(obj, "base_addr", m.base_addr);
    m.state_stride_bytes = get_u64(obj, "state_stride_bytes", 64);
    if (!obj.contains("transition") || !obj.at("transition").is_array())
      fail("markov_chain: missing 'transition' matrix");
    for (const json& row : obj.at("transition")) {
      if (!row.is_array()) fail("markov_chain: transition rows must be arrays");
      for (const json& p : row) {
        if (!p.is_number()) fail("markov_chain: probabilities must be numbers");
        m.transition.push_back(p.get<double>());
      }
    }
    spec.generator = m;
  } else if (kind == "uniform_random") {
    allowed.insert({"footprint_bytes", "count", "seed", "base_addr"});
    check_keys(obj, allowed, "uniform_random");
    UniformRandomSpec u;
    u.footprint_bytes = get_u64(obj, "footprint_bytes", 0);
    u.count = get_u64(obj, "count", 0);
    u.seed = get_u64(obj, "seed", 0);
    u.base_addr = get_u64(obj, "base_addr", 0);
    spec.generator = u;
  } else if (kind == "interleaved") {
    allowed.insert({"granularity", "streams"});
    check_keys(obj, allowed, "interleaved");
    InterleavedSpec iv;
    iv.granularity = get_u64(obj, "granularity", 1);
    if (!obj.contains("streams") || !obj.at("streams").is_array())
      fail("interleaved: missing 'streams' array");
    for (const json& sub : obj.at("streams")) {
      if (!sub.is_object()) fail("interleaved: streams must be objects");
      iv.streams.push_back(parse_spec_object(sub, /*top_level=*/false));
    }
    spec.generator = iv;
  } else {
    fail("trace_spec: unknown generator kind '" + kind + "'");
  }
  return spec;
}

TraceSpec parse_spec_object(const json& obj, bool top_level) {
  TraceSpec spec = parse_generator(obj, top_level);
  if (top_level && obj.contains("pc_policy")) {
    const std::string policy = obj.at("pc_policy").get<std::string>();
    if (policy == "single_pc")
      spec.pc_policy = PcPolicy::SinglePc;
    else if (policy == "pc_per_stream")
      spec.pc_policy = PcPolicy::PcPerStream;
    else
      fail("pc_policy: expected 'single_pc' or 'pc_per_stream'");
  }
  return spec;
}

CacheGeometry parse_cache(const json& obj, size_t index) {
  check_keys(obj, {"name", "size_bytes", "associativity", "hit_latency_cycles"},
             "caches[" + std::to_string(index) + "]");
  CacheGeometry g;
  g.name = obj.contains("name") ? obj.at("name").get<std::string>()
                                : "L" + std::to_string(index + 1);
  g.size_bytes = get_u64(obj, "size_bytes", 0);
  g.associativity = static_cast<uint32_t>(get_u64(obj, "associativity", 8));
  g.hit_latency_cycles =
      static_cast<uint32_t>(get_u64(obj, "hit_latency_cycles", 1));
  return g;
}

}  // namespace

PrefetcherKind prefetcher_from_name(const std::string& name) {
  if (name == "none") return PrefetcherKind::None;
  if (name == "stride" || name == "S") return PrefetcherKind::Stride;
  if (name == "stride_perceptron" || name == "SP")
    return PrefetcherKind::StridePerceptron;
  if (name == "markov" || name == "M") return PrefetcherKind::Markov;
  if (name == "markov_perceptron" || name == "MP")
    return PrefetcherKind::MarkovPerceptron;
  fail("unknown prefetcher '" + name + "'");
}

EngineConfig parse_engine_config_json(const std::string& text) {
  json obj = parse_text(text, "config");
  check_keys(obj,
             {"prefetcher", "line_bytes", "ghb_capacity", "stride", "markov",
              "perceptron", "accept_table_capacity", "deny_table_capacity",
              "accept_window", "deny_window", "caches",
              "memory_latency_cycles", "prefetch_level", "trace_spec"},
             "config");

  EngineConfig cfg;
  if (obj.contains("prefetcher"))
    cfg.prefetcher = prefetcher_from_name(obj.at("prefetcher").get<std::string>());
  cfg.line_bytes = static_cast<uint32_t>(get_u64(obj, "line_bytes", 64));
  cfg.ghb_capacity = get_u64(obj, "ghb_capacity", 512);

  if (obj.contains("stride")) {
    const json& s = obj.at("stride");
    check_keys(s, {"degree", "confirm_len"}, "stride");
    cfg.stride.degree = static_cast<uint32_t>(get_u64(s, "degree", 2));
    cfg.stride.confirm_len = static_cast<uint32_t>(get_u64(s, "confirm_len", 3));
  }
  if (obj.contains("markov")) {
    const json& m = obj.at("markov");
    check_keys(m, {"degree"}, "markov");
    cfg.markov.degree = static_cast<uint32_t>(get_u64(m, "degree", 4));
  }
  if (obj.contains("perceptron")) {
    const json& p = obj.at("perceptron");
    check_keys(p, {"alpha", "f2_window", "f3_hash_mult", "f4_levels"},
               "perceptron");
    cfg.perceptron.alpha = static_cast<int32_t>(get_u64(p, "alpha", 1));
    cfg.perceptron.quant.f2_window =
        static_cast<uint32_t>(get_u64(p, "f2_window", 8));
    cfg.perceptron.quant.f3_hash_mult = static_cast<uint32_t>(
        get_u64(p, "f3_hash_mult", cfg.perceptron.quant.f3_hash_mult));
    if (p.contains("f4_levels")) {
      const json& levels = p.at("f4_levels");
      if (!levels.is_array() || levels.size() != 7)
        fail("perceptron.f4_levels: expected 7 integers");
      for (size_t i = 0; i < 7; ++i)
        cfg.perceptron.quant.f4_levels[i] =
            static_cast<int8_t>(levels[i].get<int>());
    }
  }
  cfg.tables.accept_capacity = get_u64(obj, "accept_table_capacity", 256);
  cfg.tables.deny_capacity = get_u64(obj, "deny_table_capacity", 32);
  cfg.tables.accept_window =
      static_cast<uint32_t>(get_u64(obj, "accept_window", 256));
  cfg.tables.deny_window = static_cast<uint32_t>(get_u64(obj, "deny_window", 32));

  if (obj.contains("caches")) {
    const json& caches = obj.at("caches");
    if (!caches.is_array() || caches.empty())
      fail("caches: expected a non-empty array");
    for (size_t i = 0; i < caches.size(); ++i)
      cfg.caches.push_back(parse_cache(caches[i], i));
  }
  cfg.memory_latency_cycles =
      static_cast<uint32_t>(get_u64(obj, "memory_latency_cycles", 200));
  cfg.prefetch_level = get_u64(obj, "prefetch_level",
                               cfg.caches.empty() ? 1 : cfg.caches.size() - 1);

  cfg.finalize();
  return cfg;
}

TraceSpec parse_trace_spec_json(const std::string& text) {
  json obj = parse_text(text, "trace_spec");
  if (obj.contains("trace_spec")) obj = obj.at("trace_spec");
  if (!obj.is_object()) fail("trace_spec: expected a JSON object");
  TraceSpec spec = parse_spec_object(obj, /*top_level=*/true);
  validate_spec(spec);
  return spec;
}

namespace {

std::string slurp(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + what + " file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

EngineConfig load_engine_config(const std::string& path) {
  return parse_engine_config_json(slurp(path, "config"));
}

TraceSpec load_trace_spec(const std::string& path) {
  return parse_trace_spec_json(slurp(path, "trace spec"));
}

}  // namespace pfsim
