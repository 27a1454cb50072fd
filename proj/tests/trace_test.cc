#include "pfsim/trace.hpp"

#include <gtest/gtest.h>
#include <zlib.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "pfsim/rng.hpp"
#include "pfsim/trace_gen.hpp"

using namespace pfsim;

TEST(TraceParse, BasicRecord) {
  MemoryAccess a = parse_trace_line("401a2b 7fff0040 R", 1);
  EXPECT_EQ(a.pc, 0x401a2bu);
  EXPECT_EQ(a.addr, 0x7fff0040u);
  EXPECT_EQ(a.kind, AccessKind::Read);
}

TEST(TraceParse, CommentOnlyStreamIsEmpty) {
  std::istringstream in("# comment\n");
  TraceReader reader(in);
  MemoryAccess a;
  EXPECT_FALSE(reader.next(a));
}

TEST(TraceParse, MalformedLineReportsLineNumber) {
  std::istringstream in("zz 10 R\n");
  TraceReader reader(in);
  MemoryAccess a;
  try {
    reader.next(a);
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_EQ(e.kind(), TraceError::Kind::MalformedLine);
    EXPECT_EQ(e.line_no(), 1u);
  }
}

TEST(TraceParse, RejectsBadShapes) {
  EXPECT_THROW(parse_trace_line("10 20", 1), TraceError);
  EXPECT_THROW(parse_trace_line("10 20 X", 1), TraceError);
  EXPECT_THROW(parse_trace_line("10 20 R extra", 1), TraceError);
  EXPECT_THROW(parse_trace_line("", 1), TraceError);
}

TEST(TraceParse, ValueOutOfRange) {
  // 2^48 exactly is out of the 48-bit space.
  try {
    parse_trace_line("1000000000000 10 R", 3);
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_EQ(e.kind(), TraceError::Kind::ValueOutOfRange);
    EXPECT_EQ(e.line_no(), 3u);
  }
}

TEST(TraceParse, UppercaseHexAccepted) {
  MemoryAccess a = parse_trace_line("AB10 FF40 W", 1);
  EXPECT_EQ(a.pc, 0xab10u);
  EXPECT_EQ(a.kind, AccessKind::Write);
}

// Round-trip: parsing the canonical serialization reproduces the records.
TEST(TraceParse, RoundTripRandomRecords) {
  std::mt19937_64 rng(11);
  std::string text;
  std::vector<MemoryAccess> expected;
  for (int i = 0; i < 200; ++i) {
    MemoryAccess a{bounded_draw(rng, kAddressLimit),
                   bounded_draw(rng, kAddressLimit),
                   (rng() & 1) ? AccessKind::Write : AccessKind::Read};
    expected.push_back(a);
    text += format_access(a);
  }
  std::istringstream in(text);
  TraceReader reader(in);
  MemoryAccess a;
  size_t i = 0;
  while (reader.next(a)) {
    ASSERT_LT(i, expected.size());
    EXPECT_EQ(a, expected[i]);
    ++i;
  }
  EXPECT_EQ(i, expected.size());
}

TEST(TraceFile, GzipAcceptedTransparently) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pfsim_trace_test";
  fs::create_directories(dir);
  std::vector<MemoryAccess> trace{{0x400, 0x1000, AccessKind::Read},
                                  {0x404, 0x2040, AccessKind::Write}};

  fs::path plain = dir / "plain.txt";
  write_trace_file(plain.string(), trace);
  EXPECT_EQ(read_trace_file(plain.string()), trace);

  fs::path gz = dir / "trace.txt.gz";
  gzFile f = gzopen(gz.string().c_str(), "wb");
  ASSERT_NE(f, nullptr);
  for (const auto& a : trace) {
    std::string line = format_access(a);
    gzwrite(f, line.data(), static_cast<unsigned>(line.size()));
  }
  gzclose(f);
  EXPECT_EQ(read_trace_file(gz.string()), trace);
}

TEST(TraceFile, MissingFileThrowsIo) {
  try {
    read_trace_file("/nonexistent/path/trace.txt");
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_EQ(e.kind(), TraceError::Kind::Io);
  }
}

TEST(TraceGen, StridedAddresses) {
  TraceSpec spec;
  spec.generator = StridedSpec{0x1000, 256, 3};
  auto trace = generate_trace(spec);
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_EQ(trace[0].addr, 0x1000u);
  EXPECT_EQ(trace[1].addr, 0x1100u);
  EXPECT_EQ(trace[2].addr, 0x1200u);
}

TEST(TraceGen, MarkovAbsorbingState) {
  MarkovChainSpec m;
  m.states = 3;
  m.transition = {1, 0, 0, 0, 1, 0, 0, 0, 1};  // identity
  m.count = 4;
  m.seed = 5;
  TraceSpec spec;
  spec.generator = m;
  auto trace = generate_trace(spec);
  ASSERT_EQ(trace.size(), 4u);
  for (const auto& a : trace) EXPECT_EQ(a.addr, m.base_addr);
}

TEST(TraceGen, InvalidSpecs) {
  TraceSpec spec;
  spec.generator = StridedSpec{0x1000, 256, 0};
  EXPECT_THROW(generate_trace(spec), SpecError);

  MarkovChainSpec m;
  m.states = 2;
  m.transition = {0.5, 0.6, 1, 0};  // row 0 sums to 1.1
  m.count = 10;
  spec.generator = m;
  EXPECT_THROW(generate_trace(spec), SpecError);

  spec.generator = UniformRandomSpec{0, 10, 1};
  EXPECT_THROW(generate_trace(spec), SpecError);
}

TEST(TraceGen, DeterministicForFixedSeed) {
  UniformRandomSpec u{1 << 20, 5000, 42, 0};
  TraceSpec spec;
  spec.generator = u;
  EXPECT_EQ(generate_trace(spec), generate_trace(spec));
}

// Chi-square goodness of fit against the uniform block distribution; the
// statistic for 16384 cells must land within 3 sigma of its mean.
TEST(TraceGen, UniformRandomChiSquare) {
  UniformRandomSpec u{1 << 20, 100000, 7, 0};
  TraceSpec spec;
  spec.generator = u;
  auto trace = generate_trace(spec);

  constexpr size_t kBlocks = (1 << 20) / 64;
  std::vector<uint64_t> counts(kBlocks, 0);
  for (const auto& a : trace) ++counts[a.addr >> 6];

  double expected = static_cast<double>(trace.size()) / kBlocks;
  double chi2 = 0.0;
  for (uint64_t c : counts) {
    double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  double dof = kBlocks - 1;
  double sigma = std::sqrt(2.0 * dof);
  EXPECT_NEAR(chi2, dof, 3.0 * sigma);
}

TEST(TraceGen, InterleaveRoundRobinAndPcPerStream) {
  InterleavedSpec iv;
  TraceSpec a, b;
  a.generator = StridedSpec{0x1000, 64, 4};
  b.generator = StridedSpec{0x80000, 64, 2};
  iv.streams = {a, b};
  iv.granularity = 1;
  TraceSpec spec;
  spec.generator = iv;
  spec.pc_policy = PcPolicy::PcPerStream;
  auto trace = generate_trace(spec);
  ASSERT_EQ(trace.size(), 6u);
  // Alternates while both streams last, then drains the longer one.
  EXPECT_EQ(trace[0].addr, 0x1000u);
  EXPECT_EQ(trace[1].addr, 0x80000u);
  EXPECT_EQ(trace[2].addr, 0x1040u);
  EXPECT_EQ(trace[3].addr, 0x80040u);
  EXPECT_EQ(trace[4].addr, 0x1080u);
  EXPECT_EQ(trace[5].addr, 0x10c0u);
  EXPECT_NE(trace[0].pc, trace[1].pc);
  EXPECT_EQ(trace[0].pc, trace[2].pc);
}

TEST(BlockOf, ShiftBySixForDefaultLines) {
  EXPECT_EQ(block_of({0, 0x0, AccessKind::Read}).value, 0x0u);
  EXPECT_EQ(block_of({0, 0x7F, AccessKind::Read}).value, 0x1u);
  EXPECT_EQ(block_of({0, 0x1000, AccessKind::Read}).value, 0x40u);
  EXPECT_EQ(block_of({0, 0x1000, AccessKind::Read}, 128).value, 0x20u);
}

// Strided block deltas are constant once the stride covers a line.
TEST(BlockOf, StridedBlockDeltasConstant) {
  TraceSpec spec;
  spec.generator = StridedSpec{0x4321, 128, 50};
  auto trace = generate_trace(spec);
  int64_t delta = 0;
  for (size_t i = 1; i < trace.size(); ++i) {
    int64_t d = static_cast<int64_t>(block_of(trace[i]).value) -
                static_cast<int64_t>(block_of(trace[i - 1]).value);
    if (i == 1)
      delta = d;
    else
      EXPECT_EQ(d, delta);
  }
  EXPECT_EQ(delta, 2);
}
