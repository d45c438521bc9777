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

// Run counters and the derived report: CAM comparison counts (the energy
// proxy), comparisons per committed instruction, IPC, FU utilization.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isa.hpp"
#include "softfloat.hpp"

namespace fpe::stats {

struct Counters {
  std::uint64_t dispatched = 0;
  std::uint64_t issued = 0;
  std::uint64_t committed = 0;
  std::uint64_t comparisons_total = 0;
  std::uint64_t bmt_reads = 0;
  std::array<std::uint64_t, 5> blocks_enabled_hist{};  // 0..4 blocks per broadcast
  std::map<std::string, std::uint64_t> fu_busy_cycles;
  std::vector<std::uint64_t> comparisons_per_cycle;
};

struct InstrTimeline {
  std::uint32_t index = 0;
  std::string text;
  bool dispatched = false, issued = false, completed = false, committed = false;
  std::uint64_t dispatch = 0, issue = 0, complete = 0, commit = 0;
};

struct StoreCapture {
  int reg = 0;
  fp::u64 bits = 0;
};

struct RunReport {
  int status = 0;  // RunStatus value
  std::string status_message;
  std::string config_summary;

  std::uint64_t cycles = 0;
  std::uint64_t dispatched = 0;
  std::uint64_t issued = 0;
  std::uint64_t committed = 0;
  std::optional<double> ipc;
  std::uint64_t comparisons_total = 0;
  std::optional<double> comparisons_per_committed;
  std::uint64_t bmt_reads = 0;
  std::array<std::uint64_t, 5> blocks_enabled_hist{};
  std::vector<std::pair<std::string, std::uint64_t>> fu_busy_cycles;
  std::vector<StoreCapture> stores;
  bool fcsr_flags[5] = {};  // V Z O U I accrued
  std::vector<InstrTimeline> timeline;
  std::vector<std::uint64_t> comparisons_per_cycle;
  std::vector<std::string> events;

  std::string to_text() const;
  std::string to_csv_row(const std::string& name) const;
  static std::string csv_header();
};

// Ratios are computed with a zero guard: nothing committed means the
// per-committed ratios are reported as absent, not divided.
RunReport finalize(const Counters& c, std::uint64_t cycles);

}  // namespace fpe::stats
