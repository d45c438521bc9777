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

#include "fpengine.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "engine.hpp"
#include "isa.hpp"
#include "selftest.hpp"
#include "softfloat.hpp"
#include "stats.hpp"

using fpe::fp::Rounding;

namespace {

std::uint32_t flags_mask(const fpe::fp::Flags& f) {
  std::uint32_t m = 0;
  if (f.invalid) m |= FPE_FLAG_V;
  if (f.div_zero) m |= FPE_FLAG_Z;
  if (f.overflow) m |= FPE_FLAG_O;
  if (f.underflow) m |= FPE_FLAG_U;
  if (f.inexact) m |= FPE_FLAG_I;
  return m;
}

Rounding to_mode(int rm) { return static_cast<Rounding>(rm & 3); }

uint64_t unwrap(const fpe::fp::Result& r, uint32_t* flags) {
  if (flags) *flags = flags_mask(r.flags);
  return r.bits;
}

size_t copy_out(const std::string& s, char* buf, size_t cap) {
  if (buf && cap > 0) {
    size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

}  // namespace

struct fpe_sim {
  fpe_sim_config config;
  fpe::isa::Program program;
  bool loaded = false;
  bool ran = false;
  std::string error;
  fpe::stats::RunReport report;
  int run_status = 0;
};

extern "C" {

const char* fpe_status_name(fpe_status s) {
  switch (s) {
    case FPE_OK: return "ok";
    case FPE_ERR_ARGUMENT: return "bad argument";
    case FPE_ERR_IO: return "i/o error";
    case FPE_ERR_PARSE: return "parse error";
    case FPE_ERR_TRAP: return "trap";
    case FPE_ERR_DEADLOCK: return "deadlock";
    case FPE_ERR_BUDGET: return "cycle budget exceeded";
    case FPE_ERR_RECOVERY: return "checkpoint evicted";
    case FPE_ERR_GOLDEN: return "golden mismatch";
    case FPE_ERR_SELFTEST: return "selftest failure";
    case FPE_ERR_STATE: return "bad call sequence";
  }
  return "unknown";
}

const char* fpe_version(void) { return "fpengine 1.0.0"; }

uint64_t fpe_fp_add(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags) {
  return unwrap(fpe::fp::add_sub(a, b, false, to_mode(rm), flush != 0), flags);
}

uint64_t fpe_fp_sub(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags) {
  return unwrap(fpe::fp::add_sub(a, b, true, to_mode(rm), flush != 0), flags);
}

uint64_t fpe_fp_mul(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags) {
  return unwrap(fpe::fp::mul(a, b, to_mode(rm), flush != 0), flags);
}

uint64_t fpe_fp_div(uint64_t a, uint64_t b, int rm, int flush, uint32_t* flags) {
  return unwrap(fpe::fp::div(a, b, to_mode(rm), flush != 0), flags);
}

uint64_t fpe_fp_recip(uint64_t a, int rm, uint32_t* flags) {
  return unwrap(fpe::fp::recip(a, to_mode(rm)), flags);
}

uint64_t fpe_fp_madd(uint64_t a, uint64_t b, uint64_t c, int rm, int flush,
                     uint32_t* flags) {
  return unwrap(fpe::fp::fmac(a, b, c, false, to_mode(rm), flush != 0), flags);
}

uint64_t fpe_fp_msub(uint64_t a, uint64_t b, uint64_t c, int rm, int flush,
                     uint32_t* flags) {
  return unwrap(fpe::fp::fmac(a, b, c, true, to_mode(rm), flush != 0), flags);
}

uint64_t fpe_fp_compare(int cond, uint64_t a, uint64_t b, uint32_t* flags) {
  return unwrap(
      fpe::fp::compare(static_cast<fpe::fp::CompareCond>(cond & 15), a, b),
      flags);
}

uint32_t fpe_fp_class(uint64_t a) { return fpe::fp::class_mask(a); }

uint64_t fpe_fp_minmax(int kind, uint64_t a, uint64_t b, uint32_t* flags) {
  return unwrap(
      fpe::fp::minmax(static_cast<fpe::fp::MinMaxKind>(kind & 3), a, b), flags);
}

uint64_t fpe_fp_move(int kind, uint64_t a) {
  return fpe::fp::move_family(static_cast<fpe::fp::MoveKind>(kind % 3), a);
}

void fpe_recip_rom(uint16_t out[128]) {
  const auto& rom = fpe::fp::rom_table();
  std::memcpy(out, rom.data(), sizeof(uint16_t) * 128);
}

fpe_status fpe_selftest(uint64_t seed, uint64_t count, char* summary,
                        size_t cap) {
  fpe::selftest::SelfTestResult r = fpe::selftest::run_selftest(seed, count);
  copy_out(r.summary, summary, cap);
  return r.ok ? FPE_OK : FPE_ERR_SELFTEST;
}

fpe_sim_config fpe_sim_config_default(void) {
  fpe_sim_config c;
  c.variant = 1;
  c.bmt_enabled = 1;
  c.regfile_model = 0;
  c.rounding_mode = FPE_RM_RN;
  c.flush_to_zero = 0;
  c.broadcast_lead = 3;
  c.load_broadcast_lead = 3;
  c.lat_add = 8;
  c.lat_mul = 7;
  c.lat_fmac = 13;
  c.lat_div = 14;
  c.lat_compare = 1;
  c.lat_branch = 1;
  c.cycle_budget = 1000000;
  c.seed = 0;
  c.collect_events = 0;
  return c;
}

fpe_status fpe_sim_create(const fpe_sim_config* config, fpe_sim** out) {
  if (!out) return FPE_ERR_ARGUMENT;
  *out = nullptr;
  fpe_sim_config c = config ? *config : fpe_sim_config_default();
  if (c.variant != 1 && c.variant != 2) return FPE_ERR_ARGUMENT;
  if (c.regfile_model < 0 || c.regfile_model > 2) return FPE_ERR_ARGUMENT;
  if (c.rounding_mode < 0 || c.rounding_mode > 3) return FPE_ERR_ARGUMENT;
  if (c.broadcast_lead < 0 || c.broadcast_lead > 3) return FPE_ERR_ARGUMENT;
  if (c.load_broadcast_lead < 0 || c.load_broadcast_lead > 3)
    return FPE_ERR_ARGUMENT;
  if (c.lat_add < 1 || c.lat_mul < 1 || c.lat_fmac < 1 || c.lat_div < 1 ||
      c.lat_compare < 1 || c.lat_branch < 1)
    return FPE_ERR_ARGUMENT;
  // The broadcast lead must undercut every arithmetic latency.
  int min_arith = std::min(std::min(c.lat_add, c.lat_mul),
                           std::min(c.lat_fmac, c.lat_div));
  if (c.broadcast_lead >= min_arith) return FPE_ERR_ARGUMENT;
  auto* sim = new fpe_sim;
  sim->config = c;
  *out = sim;
  return FPE_OK;
}

void fpe_sim_destroy(fpe_sim* sim) { delete sim; }

fpe_status fpe_sim_load_trace_text(fpe_sim* sim, const char* text) {
  if (!sim || !text) return FPE_ERR_ARGUMENT;
  fpe::isa::ParseResult pr = fpe::isa::parse_program(text);
  if (!pr.ok) {
    sim->error = pr.error;
    sim->loaded = false;
    return FPE_ERR_PARSE;
  }
  sim->program = std::move(pr.program);
  sim->loaded = true;
  sim->ran = false;
  sim->error.clear();
  return FPE_OK;
}

fpe_status fpe_sim_load_trace_file(fpe_sim* sim, const char* path) {
  if (!sim || !path) return FPE_ERR_ARGUMENT;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    sim->error = std::string("cannot open trace file '") + path + "'";
    return FPE_ERR_IO;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return fpe_sim_load_trace_text(sim, ss.str().c_str());
}

fpe_status fpe_sim_run(fpe_sim* sim) {
  if (!sim) return FPE_ERR_ARGUMENT;
  if (!sim->loaded) {
    sim->error = "no trace loaded";
    return FPE_ERR_STATE;
  }
  fpe::engine::EngineConfig ec;
  ec.variant = sim->config.variant == 2 ? fpe::engine::Variant::V2
                                        : fpe::engine::Variant::V1;
  ec.bmt_enabled = sim->config.bmt_enabled != 0;
  ec.regfile_model = static_cast<fpe::rf::Model>(sim->config.regfile_model);
  ec.rounding = to_mode(sim->config.rounding_mode);
  ec.flush_to_zero = sim->config.flush_to_zero != 0;
  ec.broadcast_lead = sim->config.broadcast_lead;
  ec.load_broadcast_lead = sim->config.load_broadcast_lead;
  ec.latencies.add = sim->config.lat_add;
  ec.latencies.mul = sim->config.lat_mul;
  ec.latencies.fmac = sim->config.lat_fmac;
  ec.latencies.divider = sim->config.lat_div;
  ec.latencies.compare = sim->config.lat_compare;
  ec.latencies.branch = sim->config.lat_branch;
  ec.cycle_budget = sim->config.cycle_budget;
  ec.seed = sim->config.seed;
  ec.collect_events = sim->config.collect_events != 0;

  fpe::engine::Engine engine(ec);
  sim->report = engine.run(sim->program);
  sim->ran = true;
  sim->run_status = sim->report.status;
  sim->error = sim->report.status_message == "ok" ? "" : sim->report.status_message;
  switch (static_cast<fpe::engine::RunStatus>(sim->report.status)) {
    case fpe::engine::RunStatus::Ok: return FPE_OK;
    case fpe::engine::RunStatus::Trap: return FPE_ERR_TRAP;
    case fpe::engine::RunStatus::Deadlock: return FPE_ERR_DEADLOCK;
    case fpe::engine::RunStatus::BudgetExceeded: return FPE_ERR_BUDGET;
    case fpe::engine::RunStatus::CheckpointEvicted: return FPE_ERR_RECOVERY;
  }
  return FPE_OK;
}

const char* fpe_sim_error(const fpe_sim* sim) {
  return sim ? sim->error.c_str() : "null handle";
}

uint64_t fpe_sim_cycles(const fpe_sim* sim) { return sim ? sim->report.cycles : 0; }
uint64_t fpe_sim_dispatched(const fpe_sim* sim) {
  return sim ? sim->report.dispatched : 0;
}
uint64_t fpe_sim_issued(const fpe_sim* sim) { return sim ? sim->report.issued : 0; }
uint64_t fpe_sim_committed(const fpe_sim* sim) {
  return sim ? sim->report.committed : 0;
}
uint64_t fpe_sim_comparisons(const fpe_sim* sim) {
  return sim ? sim->report.comparisons_total : 0;
}
uint64_t fpe_sim_bmt_reads(const fpe_sim* sim) {
  return sim ? sim->report.bmt_reads : 0;
}

uint32_t fpe_sim_fcsr_flags(const fpe_sim* sim) {
  if (!sim) return 0;
  std::uint32_t m = 0;
  const std::uint32_t bits[5] = {FPE_FLAG_V, FPE_FLAG_Z, FPE_FLAG_O,
                                 FPE_FLAG_U, FPE_FLAG_I};
  for (int i = 0; i < 5; ++i)
    if (sim->report.fcsr_flags[i]) m |= bits[i];
  return m;
}

size_t fpe_sim_store_count(const fpe_sim* sim) {
  return sim ? sim->report.stores.size() : 0;
}

fpe_status fpe_sim_store(const fpe_sim* sim, size_t index, int* reg,
                         uint64_t* bits) {
  if (!sim || index >= sim->report.stores.size()) return FPE_ERR_ARGUMENT;
  if (reg) *reg = sim->report.stores[index].reg;
  if (bits) *bits = sim->report.stores[index].bits;
  return FPE_OK;
}

fpe_status fpe_sim_golden_check(fpe_sim* sim) {
  if (!sim) return FPE_ERR_ARGUMENT;
  if (!sim->ran) {
    sim->error = "run the trace before checking the golden footer";
    return FPE_ERR_STATE;
  }
  const auto& expects = sim->program.expects;
  if (expects.empty()) {
    sim->error = "trace has no EXPECT lines";
    return FPE_ERR_STATE;
  }
  const auto& stores = sim->report.stores;
  char buf[160];
  if (stores.size() != expects.size()) {
    std::snprintf(buf, sizeof buf,
                  "golden mismatch: %zu stores captured, %zu expected",
                  stores.size(), expects.size());
    sim->error = buf;
    return FPE_ERR_GOLDEN;
  }
  for (std::size_t i = 0; i < expects.size(); ++i) {
    if (stores[i].reg != expects[i].reg || stores[i].bits != expects[i].bits) {
      std::snprintf(buf, sizeof buf,
                    "golden mismatch at store %zu: $f%d = 0x%016llX, expected "
                    "$f%d = 0x%016llX",
                    i, stores[i].reg,
                    static_cast<unsigned long long>(stores[i].bits),
                    expects[i].reg,
                    static_cast<unsigned long long>(expects[i].bits));
      sim->error = buf;
      return FPE_ERR_GOLDEN;
    }
  }
  return FPE_OK;
}

size_t fpe_sim_report_text(const fpe_sim* sim, char* buf, size_t cap) {
  if (!sim) return copy_out("", buf, cap);
  return copy_out(sim->report.to_text(), buf, cap);
}

size_t fpe_sim_report_csv(const fpe_sim* sim, const char* name, char* buf,
                          size_t cap) {
  if (!sim) return copy_out("", buf, cap);
  return copy_out(sim->report.to_csv_row(name ? name : ""), buf, cap);
}

size_t fpe_sim_csv_header(char* buf, size_t cap) {
  return copy_out(fpe::stats::RunReport::csv_header(), buf, cap);
}

size_t fpe_sim_event_count(const fpe_sim* sim) {
  return sim ? sim->report.events.size() : 0;
}

const char* fpe_sim_event(const fpe_sim* sim, size_t index) {
  if (!sim || index >= sim->report.events.size()) return "";
  return sim->report.events[index].c_str();
}

}  // extern "C"
