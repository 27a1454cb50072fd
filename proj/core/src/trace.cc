#include "pfsim/trace.hpp"

#include <zlib.h>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>

namespace pfsim {

namespace {

bool parse_hex_field(const char* begin, const char* end, uint64_t& out) {
  if (begin == end) return false;
  auto res = std::from_chars(begin, end, out, 16);
  return res.ec == std::errc{} && res.ptr == end;
}

}  // namespace

MemoryAccess parse_trace_line(const std::string& line, size_t line_no) {
  // Tokenize on single spaces; reject anything but exactly three fields.
  size_t first = line.find(' ');
  size_t second = first == std::string::npos ? std::string::npos
                                             : line.find(' ', first + 1);
  if (first == std::string::npos || second == std::string::npos ||
      line.find(' ', second + 1) != std::string::npos) {
    throw TraceError(TraceError::Kind::MalformedLine, line_no,
                     "trace line " + std::to_string(line_no) +
                         ": expected '<pc-hex> <addr-hex> <R|W>'");
  }

  MemoryAccess access;
  const char* data = line.data();
  bool ok = parse_hex_field(data, data + first, access.pc) &&
            parse_hex_field(data + first + 1, data + second, access.addr);
  std::string_view kind(data + second + 1, line.size() - second - 1);
  if (kind == "R") {
    access.kind = AccessKind::Read;
  } else if (kind == "W") {
    access.kind = AccessKind::Write;
  } else {
    ok = false;
  }
  if (!ok) {
    throw TraceError(TraceError::Kind::MalformedLine, line_no,
                     "trace line " + std::to_string(line_no) +
                         ": malformed record '" + line + "'");
  }
  if (access.pc >= kAddressLimit || access.addr >= kAddressLimit) {
    throw TraceError(TraceError::Kind::ValueOutOfRange, line_no,
                     "trace line " + std::to_string(line_no) +
                         ": value exceeds 48-bit address space");
  }
  return access;
}

std::string format_access(const MemoryAccess& access) {
  char buf[48];
  int n = std::snprintf(buf, sizeof(buf), "%llx %llx %c\n",
                        static_cast<unsigned long long>(access.pc),
                        static_cast<unsigned long long>(access.addr),
                        access.kind == AccessKind::Read ? 'R' : 'W');
  return std::string(buf, static_cast<size_t>(n));
}

struct TraceReader::GzState {
  gzFile file = nullptr;
  ~GzState() {
    if (file) gzclose(file);
  }
};

TraceReader::TraceReader(const std::string& path) : gz_(new GzState) {
  // zlib reads plain files as-is and decompresses gzip ones, which gives us
  // the magic-byte sniffing for free.
  gz_->file = gzopen(path.c_str(), "rb");
  if (!gz_->file) {
    throw TraceError(TraceError::Kind::Io, 0,
                     "cannot open trace file '" + path + "'");
  }
}

TraceReader::TraceReader(std::istream& in) : stream_(&in) {}

TraceReader::~TraceReader() = default;

bool TraceReader::read_line(std::string& line) {
  line.clear();
  if (stream_) {
    if (!std::getline(*stream_, line)) return false;
    return true;
  }
  char buf[4096];
  bool got_any = false;
  while (true) {
    if (gzgets(gz_->file, buf, sizeof(buf)) == nullptr) {
      int errnum = 0;
      const char* msg = gzerror(gz_->file, &errnum);
      if (errnum != Z_OK && errnum != Z_STREAM_END) {
        throw TraceError(TraceError::Kind::Io, line_no_,
                         std::string("trace read error: ") + msg);
      }
      return got_any;
    }
    got_any = true;
    line += buf;
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      return true;
    }
  }
}

bool TraceReader::next(MemoryAccess& out) {
  std::string line;
  while (read_line(line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out = parse_trace_line(line, line_no_);
    return true;
  }
  return false;
}

std::vector<MemoryAccess> read_trace_file(const std::string& path) {
  TraceReader reader(path);
  std::vector<MemoryAccess> accesses;
  MemoryAccess a;
  while (reader.next(a)) accesses.push_back(a);
  return accesses;
}

void write_trace_file(const std::string& path,
                      const std::vector<MemoryAccess>& accesses) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw TraceError(TraceError::Kind::Io, 0,
                     "cannot open '" + path + "' for writing");
  }
  for (const auto& a : accesses) out << format_access(a);
  if (!out.flush()) {
    throw TraceError(TraceError::Kind::Io, 0, "write failed for '" + path + "'");
  }
}

}  // namespace pfsim
