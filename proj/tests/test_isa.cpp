// Copyright 2026 the fpengine authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "isa.hpp"

#include <doctest.h>

#include <random>

#include "test_util.hpp"

using namespace fpe;

namespace {

const char* kGoldenListing = R"(
# chained fused ops
LDC1 $f10 @cycle=3 value=0x408C1C7D7325BEB4
LDC1 $f11 @cycle=4 value=0x40C189C86124683C
LDC1 $f12 @cycle=8 value=0x40BED71F07C21181
MADDF $f8, $f10, $f11, $f12
LDC1 $f13 @cycle=6 value=0x405F1029B91B1E7C
LDC1 $f14 @cycle=7 value=0x408F3FD41C730A4B
MSUBF $f9, $f12, $f13, $f14
MADDF $f15, $f8, $f9, $f10
SDC1 $f15
EXPECT $f15 0x429CD39473615714
)";

}  // namespace

TEST_CASE("parse the golden listing") {
  isa::ParseResult r = isa::parse_program(kGoldenListing);
  REQUIRE(r.ok);
  const isa::Program& p = r.program;
  CHECK(p.instructions.size() == 9);
  CHECK(p.loads.size() == 5);
  CHECK(p.captures.size() == 1);
  CHECK(p.captures[0] == 15);
  REQUIRE(p.expects.size() == 1);
  CHECK(p.expects[0].reg == 15);
  CHECK(p.expects[0].bits == 0x429CD39473615714ULL);

  const isa::Instruction& maddf = p.instructions[3];
  CHECK(maddf.mnemonic == isa::Mnemonic::Maddf);
  CHECK(maddf.fd == 8);
  CHECK(maddf.fs == 10);
  CHECK(maddf.ft == 11);
  CHECK(maddf.fr == 12);
}

TEST_CASE("empty file parses to an empty program") {
  isa::ParseResult r = isa::parse_program("");
  REQUIRE(r.ok);
  CHECK(r.program.instructions.empty());
  r = isa::parse_program("# only comments\n\n   \n");
  REQUIRE(r.ok);
  CHECK(r.program.instructions.empty());
}

TEST_CASE("unimplemented and unknown mnemonics are rejected with line info") {
  isa::ParseResult r = isa::parse_program("SQRT.D $f1, $f2\n");
  CHECK(!r.ok);
  CHECK(r.error.find("unimplemented instruction 'SQRT'") != std::string::npos);
  CHECK(r.line == 1);

  r = isa::parse_program("\nFROB $f1, $f2\n");
  CHECK(!r.ok);
  CHECK(r.error.find("unknown mnemonic 'FROB'") != std::string::npos);
  CHECK(r.line == 2);

  r = isa::parse_program("ADD.S $f1, $f2, $f3\n");
  CHECK(!r.ok);
  CHECK(r.error.find("D only") != std::string::npos);

  r = isa::parse_program("ADD $f1, $f2\n");
  CHECK(!r.ok);

  r = isa::parse_program("ADD $f1, $f2, $f99\n");
  CHECK(!r.ok);
  CHECK(r.error.find("$f99") != std::string::npos);

  // One load write port: duplicate cycles rejected.
  r = isa::parse_program(
      "LDC1 $f1 @cycle=5 value=0x0000000000000000\n"
      "LDC1 $f2 @cycle=5 value=0x0000000000000000\n");
  CHECK(!r.ok);
  CHECK(r.error.find("duplicate load cycle") != std::string::npos);
}

TEST_CASE("format suffix and condition parsing") {
  isa::ParseResult r = isa::parse_program("ADD.D $f1, $f2, $f3\n");
  REQUIRE(r.ok);
  CHECK(r.program.instructions[0].mnemonic == isa::Mnemonic::Add);

  r = isa::parse_program("CMP.SLT.D $f1, $f2, $f3\n");
  REQUIRE(r.ok);
  CHECK(r.program.instructions[0].cond == fp::CompareCond::SLT);

  r = isa::parse_program("CMP $f1, $f2, $f3\n");
  CHECK(!r.ok);  // missing condition

  r = isa::parse_program("BC1EQZ $f4 !mispredict\n");
  REQUIRE(r.ok);
  CHECK(r.program.instructions[0].mispredict);
}

TEST_CASE("parse-render round trip") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 200; ++i) {
    testutil::ProgramOptions opt;
    opt.allow_branch = true;
    isa::Program p = testutil::random_program(rng, opt);
    std::string text = isa::render_program(p);
    isa::ParseResult r = isa::parse_program(text);
    REQUIRE(r.ok);
    CHECK(r.program == p);
  }
}

TEST_CASE("fcsr accrual keeps old flags and rewrites cause") {
  isa::Fcsr f;
  fp::Flags inexact;
  inexact.inexact = true;
  CHECK(!isa::fcsr_accrue(f, inexact));
  CHECK(f.flags[isa::kFlagI]);
  CHECK(f.cause[isa::kFlagI]);

  fp::Flags invalid;
  invalid.invalid = true;
  CHECK(!isa::fcsr_accrue(f, invalid));
  CHECK(f.flags[isa::kFlagI]);  // unchanged
  CHECK(f.flags[isa::kFlagV]);
  CHECK(f.cause[isa::kFlagV]);
  CHECK(!f.cause[isa::kFlagI]);  // cause reflects only the latest op

  isa::Fcsr g;
  g.enables[isa::kFlagZ] = true;
  fp::Flags dz;
  dz.div_zero = true;
  CHECK(isa::fcsr_accrue(g, dz));  // trap indicator
}

TEST_CASE("flags accrue monotonically") {
  std::mt19937_64 rng(5);
  isa::Fcsr f;
  bool seen[5] = {};
  for (int i = 0; i < 1000; ++i) {
    fp::Flags fl;
    fl.invalid = rng() % 4 == 0;
    fl.div_zero = rng() % 4 == 0;
    fl.overflow = rng() % 4 == 0;
    fl.underflow = rng() % 4 == 0;
    fl.inexact = rng() % 2 == 0;
    isa::fcsr_accrue(f, fl);
    const bool now[5] = {fl.invalid, fl.div_zero, fl.overflow, fl.underflow,
                         fl.inexact};
    for (int b = 0; b < 5; ++b) {
      seen[b] |= now[b];
      CHECK(f.flags[b] == seen[b]);
    }
  }
}
