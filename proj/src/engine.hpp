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

// Cycle-stepped back end: dispatch -> wakeup (3-cycle-early tag broadcast)
// -> select/issue -> register read + bypass -> functional-unit pipelines ->
// writeback -> in-order commit, with per-cycle checkpoints and misprediction
// rollback. Configurable as V1 (dedicated units) or V2 (two unified FMACs).

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isa.hpp"
#include "issue_queue.hpp"
#include "regfile.hpp"
#include "softfloat.hpp"
#include "stats.hpp"

namespace fpe::engine {

enum class Variant : std::uint8_t { V1 = 1, V2 = 2 };

// Consumer front-end depth: wakeup, select and register read each take a
// cycle, so a woken entry issues three cycles after its broadcast.
inline constexpr int kWakeupDepth = 3;

inline constexpr int kRobSize = 128;
inline constexpr int kCheckpointRing = 64;
inline constexpr int kDispatchWidth = 2;
inline constexpr int kIssueWidth = 2;
inline constexpr int kCommitWidth = 2;
inline constexpr int kDeadlockWindow = 200;

struct Latencies {
  int add = 8;
  int mul = 7;
  int fmac = 13;
  int divider = 14;
  int compare = 1;
  int branch = 1;
};

struct EngineConfig {
  Variant variant = Variant::V1;
  Latencies latencies;
  int broadcast_lead = 3;
  int load_broadcast_lead = 3;
  bool bmt_enabled = true;
  rf::Model regfile_model = rf::Model::Reference;
  fp::Rounding rounding = fp::Rounding::Nearest;
  bool flush_to_zero = false;
  std::uint64_t cycle_budget = 1000000;
  std::uint64_t seed = 0;
  // V2 unified-FMAC entry stages; latency = 13 - stage + 1 (+1 issue->entry).
  int v2_entry_fused = 1;
  int v2_entry_add = 6;
  int v2_entry_short = 12;
  bool collect_events = false;
  // Test support: never dispatch past an uncommitted mispredict-marked
  // branch (the non-speculative replay reference for rollback checks).
  bool stall_dispatch_at_branch = false;
};

enum class RunStatus : std::uint8_t {
  Ok = 0,
  Trap,
  Deadlock,
  BudgetExceeded,
  CheckpointEvicted,
};

// Per-cycle snapshot for misprediction recovery (64-deep ring).
struct Checkpoint {
  std::uint64_t cycle = 0;
  rf::ReadyBits::Snapshot ready;
  std::array<iq::FreeFifo, iq::kBlocks> fifos;
  std::array<std::uint32_t, iq::kBlocks> valid_masks{};
  iq::Bmt bmt;
  int cursor = 0;
};

class Engine {
 public:
  explicit Engine(const EngineConfig& config);

  void load(const isa::Program& program);

  // Executes exactly one cycle (all eight phases).
  void step();

  // Steps until every instruction commits, or a trap / deadlock / budget
  // stop. Returns the finalized report.
  stats::RunReport run(const isa::Program& program);

  bool finished() const;
  RunStatus status() const { return status_; }
  const std::string& status_message() const { return status_message_; }
  std::uint64_t cycle() const { return cycle_; }
  // Cycle of the most recent misprediction recovery (0 when none).
  std::uint64_t last_rollback_cycle() const { return last_rollback_cycle_; }

  const EngineConfig& config() const { return config_; }
  const isa::Fcsr& fcsr() const { return fcsr_; }
  const iq::IssueQueue& queue() const { return queue_; }
  const rf::ReadyBits& ready_bits() const { return ready_; }

  // Architectural recovery state digest, used by the rollback tests.
  struct StateDigest {
    rf::ReadyBits::Snapshot ready;
    std::array<iq::FreeFifo, iq::kBlocks> fifos;
    std::array<std::uint32_t, iq::kBlocks> valid_masks{};
    iq::Bmt bmt;
    int cursor = 0;
    bool operator==(const StateDigest&) const = default;
  };
  StateDigest state_digest() const;

  stats::RunReport report() const;

 private:
  enum class InstState : std::uint8_t { Dispatched, Issued, Executed, Committed };

  struct RobEntry {
    std::uint32_t instr_index = 0;
    std::uint64_t age = 0;
    InstState state = InstState::Dispatched;
    bool in_queue = false;
    fp::u64 store_value = 0;
    bool branch_taken = false;
    fp::Flags flags;
    std::uint64_t dispatch_cycle = 0;
    std::uint64_t issue_cycle = 0;
    std::uint64_t complete_cycle = 0;
    std::uint64_t commit_cycle = 0;
  };

  struct InFlight {
    iq::PayloadEntry payload;
    std::uint32_t instr_index = 0;
    std::uint64_t rob_pos = 0;
    isa::Resource resource = isa::Resource::Add;
    int latency = 1;
    int remaining = 1;
    std::uint64_t issue_cycle = 0;
    std::uint64_t capture_cycle = 0;
    bool captured = false;
    int read_ports[3] = {-1, -1, -1};
    int fmac_unit = -1;      // V2
    int entry_stage = 0;     // V2
    bool broadcasted = false;
    fp::u64 result = 0;
    fp::Flags flags;
    bool writes = false;
  };

  struct ReadyUndo {
    std::uint64_t age = 0;
    int reg = 0;
    bool prev_ready = false;
    std::uint64_t prev_avail = 0;
  };

  // Cycle phases.
  void phase_fu_advance();
  void phase_loads();
  void phase_broadcast();
  void phase_select_issue();
  void phase_operand_read();
  void phase_dispatch();
  void phase_commit();
  void phase_checkpoint();

  void broadcast_tag(int tag, std::uint64_t data_cycle);
  void capture_and_execute(InFlight& op);
  void execute_payload(InFlight& op, const fp::u64 src[3]);
  int effective_latency(isa::Resource r, isa::Mnemonic m) const;
  int v2_entry_stage(isa::Resource r) const;
  bool v2_stage_free(int unit, int stage, std::uint64_t entry_cycle) const;
  void writeback(const InFlight& op);
  void rollback(const RobEntry& branch, std::uint64_t branch_rob_pos);
  void fail(RunStatus s, std::string message);
  void note_progress() { last_progress_ = cycle_; }
  void log_event(std::string text);
  std::uint64_t oldest_uncommitted_branch_age() const;

  EngineConfig config_;
  isa::Program program_;
  isa::Fcsr fcsr_;
  iq::IssueQueue queue_;
  std::unique_ptr<rf::RegFile> regfile_;
  rf::ReadyBits ready_;
  std::array<std::uint64_t, rf::kRegCount> avail_cycle_{};

  std::uint64_t cycle_ = 0;
  std::uint64_t age_counter_ = 0;
  std::uint64_t next_dispatch_ = 0;  // program index
  std::uint64_t last_progress_ = 0;

  std::vector<RobEntry> rob_;        // grows; head_ = first uncommitted
  std::uint64_t rob_head_ = 0;

  std::vector<InFlight> in_flight_;
  struct BusEntry {
    int tag;
    fp::u64 value;
  };
  std::vector<BusEntry> bypass_bus_;      // values live exactly one cycle
  std::vector<int> completion_broadcasts_;  // tags completing with lead >= L

  std::vector<ReadyUndo> ready_undo_;
  std::array<Checkpoint, kCheckpointRing> checkpoints_;

  bool trap_pending_ = false;
  std::string trap_reason_;
  RunStatus status_ = RunStatus::Ok;
  std::string status_message_;
  bool halted_ = false;
  std::uint64_t last_rollback_cycle_ = 0;

  stats::Counters counters_;
  std::vector<std::string> events_;
  std::string cycle_event_;
};

}  // namespace fpe::engine
