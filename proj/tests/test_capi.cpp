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

// Exercises the shared-library surface exactly as an external client would:
// opaque handle, error codes, plain C types.

#include <doctest.h>

#include <cstring>
#include <string>

#include "fpengine.h"

namespace {

const char* kGolden =
    "LDC1 $f10 @cycle=3 value=0x408C1C7D7325BEB4\n"
    "LDC1 $f11 @cycle=4 value=0x40C189C86124683C\n"
    "LDC1 $f12 @cycle=8 value=0x40BED71F07C21181\n"
    "MADDF $f8, $f10, $f11, $f12\n"
    "LDC1 $f13 @cycle=6 value=0x405F1029B91B1E7C\n"
    "LDC1 $f14 @cycle=7 value=0x408F3FD41C730A4B\n"
    "MSUBF $f9, $f12, $f13, $f14\n"
    "MADDF $f15, $f8, $f9, $f10\n"
    "SDC1 $f15\n"
    "EXPECT $f15 0x429CD39473615714\n";

}  // namespace

TEST_CASE("stateless fp entry points") {
  uint32_t flags = 0;
  CHECK(fpe_fp_add(0x3FF0000000000000ULL, 0x3FF0000000000000ULL, FPE_RM_RN, 0,
                   &flags) == 0x4000000000000000ULL);
  CHECK(flags == 0);

  fpe_fp_div(0x3FF0000000000000ULL, 0, FPE_RM_RN, 0, &flags);
  CHECK((flags & FPE_FLAG_Z) != 0);

  CHECK(fpe_fp_move(1, 0x7FF8000000000000ULL) == 0xFFF8000000000000ULL);
  CHECK(fpe_fp_class(0) == 1u << 9);
  CHECK(fpe_fp_compare(2, 0x3FF0000000000000ULL, 0x3FF0000000000000ULL,
                       nullptr) == ~0ULL);

  uint16_t rom[128];
  fpe_recip_rom(rom);
  CHECK(rom[0] == 0xFE02);
  CHECK(rom[1] == 0xFA1A);
  CHECK(rom[2] == 0xF649);
}

TEST_CASE("simulation lifecycle through the C API") {
  fpe_sim* sim = nullptr;
  fpe_sim_config cfg = fpe_sim_config_default();
  REQUIRE(fpe_sim_create(&cfg, &sim) == FPE_OK);
  REQUIRE(sim != nullptr);

  CHECK(fpe_sim_run(sim) == FPE_ERR_STATE);  // nothing loaded yet

  REQUIRE(fpe_sim_load_trace_text(sim, kGolden) == FPE_OK);
  REQUIRE(fpe_sim_run(sim) == FPE_OK);
  CHECK(fpe_sim_committed(sim) == 9);
  CHECK(fpe_sim_cycles(sim) > 0);

  REQUIRE(fpe_sim_store_count(sim) == 1);
  int reg = 0;
  uint64_t bits = 0;
  REQUIRE(fpe_sim_store(sim, 0, &reg, &bits) == FPE_OK);
  CHECK(reg == 15);
  CHECK(bits == 0x429CD39473615714ULL);
  CHECK(fpe_sim_golden_check(sim) == FPE_OK);

  char buf[4096];
  size_t need = fpe_sim_report_text(sim, buf, sizeof buf);
  CHECK(need > 0);
  CHECK(std::string(buf).find("committed: 9") != std::string::npos);

  fpe_sim_destroy(sim);
}

TEST_CASE("parse errors carry line numbers through the handle") {
  fpe_sim* sim = nullptr;
  REQUIRE(fpe_sim_create(nullptr, &sim) == FPE_OK);
  CHECK(fpe_sim_load_trace_text(sim, "ADD $f1, $f2, $f3\nSQRT.D $f1, $f2\n") ==
        FPE_ERR_PARSE);
  std::string err = fpe_sim_error(sim);
  CHECK(err.find("line 2") != std::string::npos);
  CHECK(err.find("SQRT") != std::string::npos);
  fpe_sim_destroy(sim);
}

TEST_CASE("config validation rejects bad values") {
  fpe_sim* sim = nullptr;
  fpe_sim_config cfg = fpe_sim_config_default();
  cfg.variant = 3;
  CHECK(fpe_sim_create(&cfg, &sim) == FPE_ERR_ARGUMENT);
  cfg = fpe_sim_config_default();
  cfg.broadcast_lead = 9;
  CHECK(fpe_sim_create(&cfg, &sim) == FPE_ERR_ARGUMENT);
  cfg = fpe_sim_config_default();
  cfg.lat_add = 2;  // broadcast lead must undercut every arithmetic latency
  cfg.broadcast_lead = 3;
  CHECK(fpe_sim_create(&cfg, &sim) == FPE_ERR_ARGUMENT);
}

TEST_CASE("golden mismatch surfaces as FPE_ERR_GOLDEN") {
  fpe_sim* sim = nullptr;
  REQUIRE(fpe_sim_create(nullptr, &sim) == FPE_OK);
  std::string bad =
      "LDC1 $f1 @cycle=1 value=0x3FF0000000000000\n"
      "SDC1 $f1\n"
      "EXPECT $f1 0x4000000000000000\n";
  REQUIRE(fpe_sim_load_trace_text(sim, bad.c_str()) == FPE_OK);
  REQUIRE(fpe_sim_run(sim) == FPE_OK);
  CHECK(fpe_sim_golden_check(sim) == FPE_ERR_GOLDEN);
  CHECK(std::string(fpe_sim_error(sim)).find("mismatch") != std::string::npos);
  fpe_sim_destroy(sim);
}

TEST_CASE("selftest entry point") {
  char summary[512];
  CHECK(fpe_selftest(7, 2000, summary, sizeof summary) == FPE_OK);
  CHECK(std::strstr(summary, "PASS") != nullptr);
}

TEST_CASE("version and status strings") {
  CHECK(std::strstr(fpe_version(), "fpengine") != nullptr);
  CHECK(std::string(fpe_status_name(FPE_OK)) == "ok");
  CHECK(std::string(fpe_status_name(FPE_ERR_GOLDEN)) == "golden mismatch");
}
