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

// Command-line front door for the execution-engine model, built entirely on
// the C API. Subcommands: run, batch, selftest, rom-dump.
//
// Exit codes: 0 success, 1 trace/config error, 2 engine trap or deadlock,
// 3 golden mismatch.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpengine.h"

namespace {

struct CommonOpts {
  std::string engine = "v1";
  std::string bmt = "on";
  std::string regfile = "reference";
  std::string rm = "rn";
  bool flush = false;
  int broadcast_lead = 3;
  int load_broadcast_lead = 3;
  int lat_add = 8, lat_mul = 7, lat_fmac = 13, lat_div = 14, lat_compare = 1,
      lat_branch = 1;
  std::uint64_t cycle_budget = 1000000;
  std::uint64_t seed = 0;
  std::string log_path;
  std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--engine", o.engine, "Engine variant")
      ->check(CLI::IsMember({"v1", "v2"}))
      ->capture_default_str();
  cmd->add_option("--bmt", o.bmt, "Block Mapping Table wakeup gating")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  cmd->add_option("--regfile", o.regfile, "Register-file model")
      ->check(CLI::IsMember({"reference", "xor", "lvt"}))
      ->capture_default_str();
  cmd->add_option("--rm", o.rm, "Rounding mode")
      ->check(CLI::IsMember({"rn", "rz", "rp", "rm"}))
      ->capture_default_str();
  cmd->add_flag("--flush", o.flush, "Flush tiny results to zero (FCSR FS)");
  cmd->add_option("--broadcast-lead", o.broadcast_lead,
                  "Cycles between tag broadcast and result")
      ->check(CLI::Range(0, 3))
      ->capture_default_str();
  cmd->add_option("--load-broadcast-lead", o.load_broadcast_lead,
                  "Broadcast lead for load data")
      ->check(CLI::Range(0, 3))
      ->capture_default_str();
  cmd->add_option("--lat-add", o.lat_add, "Add/Sub unit latency")->capture_default_str();
  cmd->add_option("--lat-mul", o.lat_mul, "Multiplier latency")->capture_default_str();
  cmd->add_option("--lat-fmac", o.lat_fmac, "Fused MAC latency")->capture_default_str();
  cmd->add_option("--lat-div", o.lat_div, "Divider latency")->capture_default_str();
  cmd->add_option("--lat-compare", o.lat_compare, "Compare unit latency")
      ->capture_default_str();
  cmd->add_option("--lat-branch", o.lat_branch, "Branch unit latency")
      ->capture_default_str();
  cmd->add_option("--cycle-budget", o.cycle_budget, "Abort after this many cycles")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed echoed into the report")
      ->capture_default_str();
  cmd->add_option("--log", o.log_path, "Write per-cycle records to this file");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  cmd->set_config("--config", "", "Flat key = value config file; flags override");
}

fpe_sim_config to_config(const CommonOpts& o) {
  fpe_sim_config c = fpe_sim_config_default();
  c.variant = o.engine == "v2" ? 2 : 1;
  c.bmt_enabled = o.bmt == "on" ? 1 : 0;
  c.regfile_model = o.regfile == "xor" ? 1 : (o.regfile == "lvt" ? 2 : 0);
  c.rounding_mode = o.rm == "rz"   ? FPE_RM_RZ
                    : o.rm == "rp" ? FPE_RM_RP
                    : o.rm == "rm" ? FPE_RM_RM
                                   : FPE_RM_RN;
  c.flush_to_zero = o.flush ? 1 : 0;
  c.broadcast_lead = o.broadcast_lead;
  c.load_broadcast_lead = o.load_broadcast_lead;
  c.lat_add = o.lat_add;
  c.lat_mul = o.lat_mul;
  c.lat_fmac = o.lat_fmac;
  c.lat_div = o.lat_div;
  c.lat_compare = o.lat_compare;
  c.lat_branch = o.lat_branch;
  c.cycle_budget = o.cycle_budget;
  c.seed = o.seed;
  c.collect_events = o.log_path.empty() ? 0 : 1;
  return c;
}

std::string report_string(const fpe_sim* sim, bool csv, const std::string& name) {
  size_t need = csv ? fpe_sim_report_csv(sim, name.c_str(), nullptr, 0)
                    : fpe_sim_report_text(sim, nullptr, 0);
  std::string out(need + 1, '\0');
  if (csv)
    fpe_sim_report_csv(sim, name.c_str(), out.data(), out.size());
  else
    fpe_sim_report_text(sim, out.data(), out.size());
  out.resize(need);
  return out;
}

int status_exit_code(fpe_status s) {
  switch (s) {
    case FPE_OK: return 0;
    case FPE_ERR_ARGUMENT:
    case FPE_ERR_IO:
    case FPE_ERR_PARSE:
    case FPE_ERR_STATE: return 1;
    case FPE_ERR_GOLDEN: return 3;
    default: return 2;  // trap / deadlock / budget / recovery
  }
}

void write_log(const fpe_sim* sim, const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path);
  for (size_t i = 0; i < fpe_sim_event_count(sim); ++i)
    out << fpe_sim_event(sim, i) << "\n";
}

int run_one(const fpe_sim_config& cfg, const std::string& trace, bool golden,
            bool csv, bool print_header, const std::string& log_path) {
  fpe_sim* sim = nullptr;
  fpe_status st = fpe_sim_create(&cfg, &sim);
  if (st != FPE_OK) {
    std::cerr << "error: " << fpe_status_name(st) << " (bad configuration)\n";
    return 1;
  }
  st = fpe_sim_load_trace_file(sim, trace.c_str());
  if (st != FPE_OK) {
    std::cerr << "error: " << trace << ": " << fpe_sim_error(sim) << "\n";
    fpe_sim_destroy(sim);
    return status_exit_code(st);
  }
  st = fpe_sim_run(sim);
  if (st != FPE_OK) {
    std::cerr << "error: " << fpe_status_name(st) << ": " << fpe_sim_error(sim)
              << "\n";
    write_log(sim, log_path);
    fpe_sim_destroy(sim);
    return status_exit_code(st);
  }
  if (csv && print_header) {
    size_t need = fpe_sim_csv_header(nullptr, 0);
    std::string head(need + 1, '\0');
    fpe_sim_csv_header(head.data(), head.size());
    head.resize(need);
    std::cout << head << "\n";
  }
  std::cout << report_string(sim, csv, std::filesystem::path(trace).stem().string())
            << (csv ? "\n" : "");
  write_log(sim, log_path);

  int rc = 0;
  if (golden) {
    st = fpe_sim_golden_check(sim);
    if (st == FPE_OK) {
      std::cout << "golden: ok\n";
    } else {
      std::cerr << "golden: " << fpe_sim_error(sim) << "\n";
      rc = status_exit_code(st);
    }
  }
  fpe_sim_destroy(sim);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Out-of-order floating-point execution engine model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fpe_version());

  // run
  auto* run = app.add_subcommand("run", "Run one trace program");
  CommonOpts ro;
  std::string trace;
  bool golden = false;
  run->add_option("--trace", trace, "Trace program file")->required();
  run->add_flag("--golden", golden, "Compare stores against the EXPECT footer");
  add_common(run, ro);

  // batch
  auto* batch = app.add_subcommand("batch", "Run every .trace file in a directory");
  CommonOpts bo;
  std::string dir;
  batch->add_option("--dir", dir, "Directory of .trace files")->required();
  add_common(batch, bo);

  // selftest
  auto* selftest = app.add_subcommand(
      "selftest", "Check the arithmetic against the host FPU and print ulp stats");
  std::uint64_t st_seed = 1;
  std::uint64_t st_count = 100000;
  selftest->add_option("--seed", st_seed, "Generator seed")->capture_default_str();
  selftest->add_option("--count", st_count, "Operand sets per family")
      ->capture_default_str();

  // rom-dump
  app.add_subcommand("rom-dump", "Print the 128-entry reciprocal seed table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (run->parsed()) {
    return run_one(to_config(ro), trace, golden, ro.format == "csv", true,
                   ro.log_path);
  }

  if (batch->parsed()) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
      if (entry.path().extension() == ".trace") files.push_back(entry.path());
    }
    if (ec) {
      std::cerr << "error: cannot read directory '" << dir << "'\n";
      return 1;
    }
    if (files.empty()) {
      std::cerr << "error: no .trace files in '" << dir << "'\n";
      return 1;
    }
    std::sort(files.begin(), files.end());
    bool csv = bo.format == "csv";
    int worst = 0;
    bool first = true;
    for (const std::string& f : files) {
      if (!csv) std::cout << "== " << f << "\n";
      worst = std::max(worst, run_one(to_config(bo), f, false, csv, first, ""));
      first = false;
    }
    return worst;
  }

  if (selftest->parsed()) {
    char summary[512];
    fpe_status st = fpe_selftest(st_seed, st_count, summary, sizeof summary);
    std::cout << summary << "\n";
    return st == FPE_OK ? 0 : 2;
  }

  // rom-dump
  uint16_t rom[128];
  fpe_recip_rom(rom);
  std::printf("index  value   binary\n");
  for (int i = 0; i < 128; ++i) {
    char bits[17];
    for (int b = 0; b < 16; ++b) bits[b] = (rom[i] >> (15 - b)) & 1 ? '1' : '0';
    bits[16] = '\0';
    std::printf("%3d    0x%04X  %s\n", i, rom[i], bits);
  }
  return 0;
}
