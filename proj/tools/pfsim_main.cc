// pfsim command-line driver.
//
//   pfsim gen     --spec <file> -o <trace>      generate a synthetic trace
//   pfsim run     --trace <file> [--config f]   simulate one configuration
//   pfsim compare --trace <file> [--config f]   run S, SP, M, MP side by side
//
// Exit codes: 0 success, 2 configuration error, 3 trace I/O or format error.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "pfsim/config.hpp"
#include "pfsim/report.hpp"
#include "pfsim/trace.hpp"
#include "pfsim/trace_gen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTrace = 3;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pfsim::TraceError(pfsim::TraceError::Kind::Io, 0,
                                    "cannot open output '" + path + "'");
  out << text;
}

int cmd_gen(const std::string& spec_path, const std::string& out_path) {
  pfsim::TraceSpec spec = pfsim::load_trace_spec(spec_path);
  std::vector<pfsim::MemoryAccess> trace = pfsim::generate_trace(spec);
  pfsim::write_trace_file(out_path, trace);
  std::cerr << "wrote " << trace.size() << " accesses to " << out_path << "\n";
  return kExitOk;
}

pfsim::EngineConfig load_config_or_default(const std::string& path) {
  if (path.empty()) {
    pfsim::EngineConfig cfg;
    cfg.finalize();
    return cfg;
  }
  return pfsim::load_engine_config(path);
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            bool csv, const std::string& out_path,
            const std::string& debug_perceptron_path,
            const std::string& latency_log_path) {
  pfsim::EngineConfig cfg = load_config_or_default(config_path);
  cfg.record_latency_log = !latency_log_path.empty();

  std::ofstream debug_csv;
  pfsim::Engine engine(cfg);
  if (!debug_perceptron_path.empty()) {
    debug_csv.open(debug_perceptron_path);
    if (!debug_csv)
      throw pfsim::ConfigError("cannot open '" + debug_perceptron_path + "'");
    debug_csv << "tick,event,block,x1,x2,x3,x4,x5,d,r,w1,w2,w3,w4,w5\n";
    engine.set_resolution_hook([&debug_csv](uint64_t step,
                                            const pfsim::Resolution& r,
                                            const std::array<int8_t, 5>& w) {
      static const char* kCause[] = {"touch", "timeout", "evict", "flush"};
      static const char* kKind[] = {"correct_accept", "wrong_accept",
                                    "wrong_deny", "correct_deny"};
      debug_csv << step << ',' << kKind[static_cast<int>(r.kind)] << '_'
                << kCause[static_cast<int>(r.cause)] << ',' << std::hex
                << r.block.value << std::dec;
      for (int8_t x : r.features.v) debug_csv << ',' << static_cast<int>(x);
      debug_csv << ',' << r.desired << ',' << r.real;
      for (int8_t wj : w) debug_csv << ',' << static_cast<int>(wj);
      debug_csv << '\n';
    });
  }

  pfsim::TraceReader reader(trace_path);
  pfsim::MemoryAccess access;
  while (reader.next(access)) engine.step(access);
  pfsim::RunReport report = engine.finish();

  if (!latency_log_path.empty()) {
    std::ofstream log(latency_log_path);
    if (!log) throw pfsim::ConfigError("cannot open '" + latency_log_path + "'");
    log << "latency_cycles\n";
    for (uint32_t c : engine.latency_log()) log << c << '\n';
  }

  std::string text = csv ? pfsim::report_csv_header() + pfsim::report_to_csv_row(report)
                         : pfsim::report_to_json(report);
  write_output(out_path, text);
  return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::string& trace_path,
                bool csv, const std::string& out_path) {
  pfsim::EngineConfig base = load_config_or_default(config_path);
  std::vector<pfsim::MemoryAccess> trace = pfsim::read_trace_file(trace_path);

  const pfsim::PrefetcherKind kVariants[] = {
      pfsim::PrefetcherKind::Stride, pfsim::PrefetcherKind::StridePerceptron,
      pfsim::PrefetcherKind::Markov, pfsim::PrefetcherKind::MarkovPerceptron};

  unsigned threads = std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("PFSIM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) threads = static_cast<unsigned>(v);
  }

  std::vector<pfsim::RunReport> reports(4);
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (unsigned t = 0; t < std::min<unsigned>(threads, 4); ++t) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < 4; i = next.fetch_add(1)) {
        pfsim::EngineConfig cfg = base;
        cfg.prefetcher = kVariants[i];
        reports[i] = pfsim::run_trace(cfg, trace);
      }
    });
  }
  for (auto& th : pool) th.join();

  std::string text = csv ? pfsim::comparison_csv(reports, base.prefetch_level)
                         : pfsim::comparison_markdown(reports, base.prefetch_level);
  write_output(out_path, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level prefetching simulator (GHB stride/Markov with a "
               "perceptron filter)"};
  app.require_subcommand(1);

  std::string spec_path, config_path, trace_path, out_path;
  std::string debug_perceptron_path, latency_log_path;
  bool as_csv = false, as_json = false;

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic trace");
  gen->add_option("--spec", spec_path, "Trace spec JSON file")->required();
  gen->add_option("-o,--out", out_path, "Output trace path")->required();

  CLI::App* run = app.add_subcommand("run", "Run one simulation");
  run->add_option("--config", config_path, "Run config JSON (defaults apply)");
  run->add_option("--trace", trace_path, "Trace file (text or gzip)")->required();
  run->add_flag("--json", as_json, "Emit the report as JSON (default)");
  run->add_flag("--csv", as_csv, "Emit the report as a CSV row");
  run->add_option("-o,--out", out_path, "Write the report here instead of stdout");
  run->add_option("--debug-perceptron", debug_perceptron_path,
                  "Write the per-resolution training log CSV here");
  run->add_option("--latency-log", latency_log_path,
                  "Write per-access demand latencies (CSV) here");

  CLI::App* compare =
      app.add_subcommand("compare", "Run S, SP, M, MP on one trace");
  compare->add_option("--config", config_path, "Run config JSON");
  compare->add_option("--trace", trace_path, "Trace file")->required();
  compare->add_flag("--csv", as_csv, "Emit CSV instead of Markdown");
  compare->add_option("-o,--out", out_path, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_gen(spec_path, out_path);
    if (run->parsed())
      return cmd_run(config_path, trace_path, as_csv && !as_json, out_path,
                     debug_perceptron_path, latency_log_path);
    return cmd_compare(config_path, trace_path, as_csv, out_path);
  } catch (const pfsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pfsim::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const pfsim::TraceError& e) {
    std::cerr << "trace error: " << e.what() << "\n";
    return kExitTrace;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
