// Trace file format: UTF-8 text, one record per line,
//   <pc-hex> <addr-hex> <R|W>
// hex without 0x prefix, single-space separated, '#' starts a comment line.
// Gzip-compressed files are accepted transparently (magic-byte sniffing).
#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfsim/types.hpp"

namespace pfsim {

class TraceError : public std::runtime_error {
 public:
  enum class Kind { MalformedLine, ValueOutOfRange, Io };

  TraceError(Kind kind, size_t line_no, const std::string& what)
      : std::runtime_error(what), kind_(kind), line_no_(line_no) {}

  Kind kind() const { return kind_; }
  size_t line_no() const { return line_no_; }

 private:
  Kind kind_;
  size_t line_no_;
};

// Streaming reader; does not buffer the whole file.
class TraceReader {
 public:
  // Reads from a file path; plain text or gzip, sniffed by zlib.
  explicit TraceReader(const std::string& path);
  // Reads plain text from a caller-owned stream.
  explicit TraceReader(std::istream& in);
  ~TraceReader();

  TraceReader(const TraceReader&) = delete;
  TraceReader& operator=(const TraceReader&) = delete;

  // Returns false at end of input. Throws TraceError on malformed records.
  bool next(MemoryAccess& out);

  size_t line_no() const { return line_no_; }

 private:
  bool read_line(std::string& line);

  struct GzState;
  std::unique_ptr<GzState> gz_;
  std::istream* stream_ = nullptr;
  size_t line_no_ = 0;
};

// Parses one `<pc-hex> <addr-hex> <R|W>` record. line_no is used for errors only.
MemoryAccess parse_trace_line(const std::string& line, size_t line_no);

// Canonical text form: lowercase hex, single spaces, trailing newline.
std::string format_access(const MemoryAccess& access);

std::vector<MemoryAccess> read_trace_file(const std::string& path);

void write_trace_file(const std::string& path,
                      const std::vector<MemoryAccess>& accesses);

}  // namespace pfsim
