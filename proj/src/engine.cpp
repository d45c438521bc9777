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

#include "engine.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace fpe::engine {

using isa::Mnemonic;
using isa::Resource;

namespace {

std::uint8_t onehot(Resource r) {
  return static_cast<std::uint8_t>(1u << static_cast<unsigned>(r));
}

bool is_fused(const iq::PayloadEntry& p) {
  return p.resource_vector == onehot(Resource::Mula);
}

const char* variant_name(Variant v) { return v == Variant::V1 ? "v1" : "v2"; }

}  // namespace

Engine::Engine(const EngineConfig& config) : config_(config) {
  // The consumer front end is three cycles deep; a longer lead would wake
  // entries before their operands can possibly be captured.
  assert(config_.broadcast_lead >= 0 && config_.broadcast_lead <= kWakeupDepth);
  assert(config_.load_broadcast_lead >= 0 &&
         config_.load_broadcast_lead <= kWakeupDepth);
  rf::PortConfig ports =
      config_.variant == Variant::V1 ? rf::kPortsV1 : rf::kPortsV2;
  regfile_ = rf::make_regfile(config_.regfile_model, ports);
  fcsr_.rm = config_.rounding;
  fcsr_.flush = config_.flush_to_zero;
}

void Engine::load(const isa::Program& program) {
  program_ = program;
  // Loads scheduled so early that their broadcast would precede cycle 1 are
  // announced up front.
  for (const isa::Program::Load& ld : program_.loads) {
    if (ld.cycle <= static_cast<std::uint64_t>(config_.load_broadcast_lead)) {
      ready_.set(ld.reg);
      avail_cycle_[static_cast<std::size_t>(ld.reg)] = ld.cycle;
    }
  }
}

int Engine::effective_latency(Resource r, Mnemonic m) const {
  (void)m;
  if (config_.variant == Variant::V2) {
    return 14 - v2_entry_stage(r);
  }
  switch (r) {
    case Resource::Add: return config_.latencies.add;
    case Resource::Mul: return config_.latencies.mul;
    case Resource::Mula: return config_.latencies.fmac;
    case Resource::Div: return config_.latencies.divider;
    case Resource::Branch: return config_.latencies.branch;
    default: return config_.latencies.compare;
  }
}

int Engine::v2_entry_stage(Resource r) const {
  switch (r) {
    case Resource::Mula:
    case Resource::Mul: return config_.v2_entry_fused;
    case Resource::Add: return config_.v2_entry_add;
    default: return config_.v2_entry_short;  // compare/move/branch family
  }
}

bool Engine::v2_stage_free(int unit, int stage, std::uint64_t entry_cycle) const {
  for (const InFlight& op : in_flight_) {
    if (op.fmac_unit != unit) continue;
    // Stage occupied by op at cycle c: entry_stage + (c - capture_cycle).
    std::int64_t s = op.entry_stage +
                     (static_cast<std::int64_t>(entry_cycle) -
                      static_cast<std::int64_t>(op.capture_cycle));
    if (s == stage) return false;
  }
  return true;
}

std::uint64_t Engine::oldest_uncommitted_branch_age() const {
  for (std::uint64_t i = rob_head_; i < rob_.size(); ++i) {
    const RobEntry& e = rob_[i];
    if (e.state == InstState::Committed) continue;
    Mnemonic m = program_.instructions[e.instr_index].mnemonic;
    if (m == Mnemonic::Bc1eqz || m == Mnemonic::Bc1nez) return e.age;
  }
  return ~std::uint64_t{0};
}

void Engine::log_event(std::string text) {
  if (config_.collect_events) {
    if (!cycle_event_.empty()) cycle_event_ += " ";
    cycle_event_ += std::move(text);
  }
}

void Engine::fail(RunStatus s, std::string message) {
  if (halted_) return;
  status_ = s;
  status_message_ = std::move(message);
  halted_ = true;
}

void Engine::step() {
  if (halted_) return;
  ++cycle_;
  cycle_event_.clear();
  regfile_->begin_cycle();
  bypass_bus_.clear();
  completion_broadcasts_.clear();
  std::uint64_t comparisons_before = counters_.comparisons_total;

  phase_fu_advance();
  phase_loads();
  phase_broadcast();
  phase_select_issue();
  phase_operand_read();
  phase_dispatch();
  phase_commit();
  phase_checkpoint();

  counters_.comparisons_per_cycle.push_back(counters_.comparisons_total -
                                            comparisons_before);
  if (config_.collect_events && !cycle_event_.empty())
    events_.push_back("cycle " + std::to_string(cycle_) + ": " + cycle_event_);

  // Waiting on a scheduled load is progress, not deadlock.
  bool load_pending = false;
  for (const isa::Program::Load& ld : program_.loads)
    load_pending |= ld.cycle > cycle_;
  if (!load_pending && cycle_ - last_progress_ > kDeadlockWindow) {
    std::ostringstream os;
    os << "deadlock: no progress since cycle " << last_progress_;
    for (int b = 0; b < iq::kBlocks; ++b) {
      for (int s = 0; s < iq::kBlockSize; ++s) {
        const iq::IqEntry& e = queue_.block_entries(b)[static_cast<std::size_t>(s)];
        if (!e.valid || e.all_ready()) continue;
        os << "; B" << b << "/" << s << " waits on";
        for (int i = 0; i < e.used_sources; ++i)
          if (!e.ready[i]) os << " r" << static_cast<int>(e.payload.src[i]);
      }
    }
    fail(RunStatus::Deadlock, os.str());
  }
}

void Engine::phase_fu_advance() {
  // A unit is busy any cycle it holds work (counted once per unit).
  {
    std::uint32_t seen = 0;
    for (const InFlight& op : in_flight_) {
      unsigned key = config_.variant == Variant::V2
                         ? static_cast<unsigned>(op.fmac_unit)
                         : 8u + static_cast<unsigned>(op.resource);
      if (seen & (1u << key)) continue;
      seen |= 1u << key;
      std::string name =
          config_.variant == Variant::V2
              ? std::string("FMAC") + std::to_string(op.fmac_unit)
              : isa::resource_name(op.resource);
      ++counters_.fu_busy_cycles[name];
    }
  }

  std::vector<InFlight> still;
  still.reserve(in_flight_.size());
  for (InFlight& op : in_flight_) {
    --op.remaining;
    if (op.remaining > 0) {
      still.push_back(op);
      continue;
    }
    assert(op.captured);
    writeback(op);
  }
  in_flight_ = std::move(still);
}

void Engine::writeback(const InFlight& op) {
  RobEntry& rob = rob_[op.rob_pos];
  rob.state = InstState::Executed;
  rob.complete_cycle = cycle_;
  rob.flags = op.flags;
  if (op.writes) {
    int dest = op.payload.dest;
    int port;
    if (config_.variant == Variant::V2) {
      port = op.fmac_unit;
    } else {
      switch (op.resource) {
        case Resource::Add: port = 0; break;
        case Resource::Mul: port = 1; break;
        case Resource::Div: port = 2; break;
        case Resource::Alu: port = 3; break;
        case Resource::Mula: port = 4; break;
        default: port = 3; break;
      }
    }
    regfile_->write(port, dest, op.result);
    ready_.set(dest);
    avail_cycle_[static_cast<std::size_t>(dest)] = cycle_;
    bypass_bus_.push_back(BusEntry{dest, op.result});
    // Leads of zero (or beyond the unit latency) broadcast at completion.
    if (!op.broadcasted) completion_broadcasts_.push_back(dest);
    log_event("complete r" + std::to_string(dest));
  } else {
    Mnemonic m = program_.instructions[op.instr_index].mnemonic;
    if (m == Mnemonic::Bc1eqz)
      rob_[op.rob_pos].branch_taken = (op.result & 1) == 0;
    else if (m == Mnemonic::Bc1nez)
      rob_[op.rob_pos].branch_taken = (op.result & 1) != 0;
    log_event(std::string("complete ") + isa::mnemonic_name(m));
  }
  note_progress();
}

void Engine::phase_loads() {
  for (const isa::Program::Load& ld : program_.loads) {
    if (ld.cycle != cycle_) continue;
    // Load/move write port is the last one in either variant's map.
    int port = config_.variant == Variant::V1 ? 5 : 2;
    regfile_->write(port, ld.reg, ld.value);
    ready_.set(ld.reg);
    avail_cycle_[static_cast<std::size_t>(ld.reg)] = cycle_;
    log_event("load r" + std::to_string(ld.reg));
    note_progress();
  }
  // LDC1 entries execute once their data lands.
  for (std::uint64_t i = rob_head_; i < rob_.size(); ++i) {
    RobEntry& e = rob_[i];
    if (e.state != InstState::Dispatched) continue;
    const isa::Instruction& in = program_.instructions[e.instr_index];
    if (in.mnemonic == Mnemonic::Ldc1 && cycle_ >= in.load_cycle) {
      e.state = InstState::Executed;
      e.complete_cycle = std::max<std::uint64_t>(in.load_cycle, e.dispatch_cycle);
    }
  }
}

void Engine::broadcast_tag(int tag, std::uint64_t data_cycle) {
  // The broadcast makes the register "ready" ahead of its data so later
  // dispatches see it in the ready-bit vector; availability gates issue.
  ready_.set(tag);
  avail_cycle_[static_cast<std::size_t>(tag)] =
      std::max(avail_cycle_[static_cast<std::size_t>(tag)], data_cycle);
  iq::WakeupStats w =
      queue_.wakeup(tag, config_.bmt_enabled, cycle_ + kWakeupDepth);
  counters_.comparisons_total += static_cast<std::uint64_t>(w.comparisons);
  if (w.bmt_read) ++counters_.bmt_reads;
  ++counters_.blocks_enabled_hist[static_cast<std::size_t>(w.blocks_enabled)];
  log_event("broadcast r" + std::to_string(tag) + " enable=" +
            std::to_string(w.blocks_enabled) + " cmp=" +
            std::to_string(w.comparisons));
}

void Engine::phase_broadcast() {
  for (int tag : completion_broadcasts_) broadcast_tag(tag, cycle_);
  for (InFlight& op : in_flight_) {
    if (op.broadcasted || !op.writes) continue;
    if (op.remaining == config_.broadcast_lead) {
      op.broadcasted = true;
      broadcast_tag(op.payload.dest,
                    cycle_ + static_cast<std::uint64_t>(config_.broadcast_lead));
    }
  }
  for (const isa::Program::Load& ld : program_.loads) {
    if (ld.cycle ==
        cycle_ + static_cast<std::uint64_t>(config_.load_broadcast_lead))
      broadcast_tag(ld.reg, ld.cycle);
  }
}

void Engine::phase_select_issue() {
  std::uint64_t branch_age = oldest_uncommitted_branch_age();

  // Per-cycle structural claims resolved during admission.
  bool claimed[isa::kResourceCount] = {};
  bool div_busy = false;
  for (const InFlight& op : in_flight_)
    div_busy |= op.resource == Resource::Div;
  bool unit_claimed[2] = {false, false};             // V2
  std::vector<std::pair<std::uint64_t, int>> units;  // age -> admitted unit

  auto v2_pick_unit = [&](Resource r) {
    int stage = v2_entry_stage(r);
    for (int u = 0; u < 2; ++u)
      if (!unit_claimed[u] && v2_stage_free(u, stage, cycle_ + 1)) return u;
    return -1;
  };

  auto eligible = [&](const iq::IqEntry& e) {
    // Speculative issue past an unresolved branch is suppressed so recovery
    // restores a state identical to a non-speculative replay.
    if (e.age > branch_age) return false;
    Resource r = static_cast<Resource>(__builtin_ctz(e.payload.resource_vector));
    if (config_.variant == Variant::V1) {
      if (r == Resource::Div && div_busy) return false;  // non-pipelined
    } else {
      if (v2_pick_unit(r) < 0) return false;  // entry-stage conflict
    }
    return true;
  };

  auto admit = [&](const iq::IqEntry& e, int slot) {
    Resource r = static_cast<Resource>(__builtin_ctz(e.payload.resource_vector));
    if (config_.variant == Variant::V1) {
      if (slot == 1 && is_fused(e.payload)) return false;  // port 0 only
      if (claimed[static_cast<int>(r)]) return false;  // one issue per unit
      claimed[static_cast<int>(r)] = true;
      return true;
    }
    int u = v2_pick_unit(r);
    if (u < 0) return false;
    unit_claimed[u] = true;
    units.emplace_back(e.age, u);
    return true;
  };

  std::vector<iq::EntryRef> picks =
      queue_.select(cycle_, kIssueWidth, eligible, admit);

  int slot = 0;
  for (iq::EntryRef ref : picks) {
    const iq::IqEntry& e = queue_.entry(ref);
    Resource r = static_cast<Resource>(__builtin_ctz(e.payload.resource_vector));

    InFlight op;
    op.payload = e.payload;
    op.instr_index = e.instr_index;
    op.resource = r;
    Mnemonic m = program_.instructions[e.instr_index].mnemonic;
    op.latency = effective_latency(r, m);
    op.remaining = op.latency;
    op.issue_cycle = cycle_;
    op.writes = isa::writes_dest(m);
    op.rob_pos = rob_head_;
    while (rob_[op.rob_pos].age != e.age) ++op.rob_pos;
    rob_[op.rob_pos].state = InstState::Issued;
    rob_[op.rob_pos].issue_cycle = cycle_;

    if (config_.variant == Variant::V2) {
      op.entry_stage = v2_entry_stage(r);
      op.fmac_unit = 0;
      for (const auto& [age, unit] : units)
        if (age == e.age) op.fmac_unit = unit;
      op.read_ports[0] = op.fmac_unit * 3;
      op.read_ports[1] = op.fmac_unit * 3 + 1;
      op.read_ports[2] = op.fmac_unit * 3 + 2;
    } else {
      if (slot == 0) {
        op.read_ports[0] = 0;
        op.read_ports[1] = 1;
        op.read_ports[2] = 2;
      } else {
        op.read_ports[0] = 3;
        op.read_ports[1] = 4;
        op.read_ports[2] = -1;  // slot 1 never carries a fused op
      }
    }

    // Short (single-cycle) ops latch operands at issue; everything else
    // reads the register file one cycle later.
    if (op.latency <= 1) {
      op.capture_cycle = cycle_;
      capture_and_execute(op);
    } else {
      op.capture_cycle = cycle_ + 1;
    }

    log_event("issue [" + std::to_string(ref.block) + "," +
              std::to_string(ref.slot) + "] rob=" +
              std::to_string(op.payload.dir_rob));
    in_flight_.push_back(op);
    queue_.release(ref);
    ++counters_.issued;
    note_progress();
    ++slot;
  }
}

void Engine::capture_and_execute(InFlight& op) {
  const isa::Instruction& in = program_.instructions[op.instr_index];
  int nsrc = isa::source_count(in.mnemonic);
  fp::u64 src[3] = {0, 0, 0};
  for (int i = 0; i < nsrc; ++i) {
    int tag = op.payload.src[i];
    int port = op.read_ports[i];
    fp::u64 v = port >= 0 ? regfile_->read(port, tag) : 0;
    // Bypass network: a result completing this very cycle overrides the
    // (possibly stale) register-file read at the FU input.
    for (const BusEntry& bus : bypass_bus_) {
      if (bus.tag == tag) v = bus.value;
    }
    src[i] = v;
  }
  op.captured = true;
  execute_payload(op, src);
}

void Engine::execute_payload(InFlight& op, const fp::u64 src[3]) {
  const isa::Instruction& in = program_.instructions[op.instr_index];
  fp::Rounding rm = fcsr_.rm;
  bool flush = fcsr_.flush;
  fp::Result res;
  switch (in.mnemonic) {
    case Mnemonic::Add: res = fp::add_sub(src[0], src[1], false, rm, flush); break;
    case Mnemonic::Sub: res = fp::add_sub(src[0], src[1], true, rm, flush); break;
    case Mnemonic::Mul: res = fp::mul(src[0], src[1], rm, flush); break;
    case Mnemonic::Div: res = fp::div(src[0], src[1], rm, flush); break;
    case Mnemonic::Recip: res = fp::recip(src[0], rm, flush); break;
    case Mnemonic::Maddf: res = fp::fmac(src[0], src[1], src[2], false, rm, flush); break;
    case Mnemonic::Msubf: res = fp::fmac(src[0], src[1], src[2], true, rm, flush); break;
    case Mnemonic::Cmp: {
      auto cond = static_cast<fp::CompareCond>(op.payload.function -
                                               iq::kFunctionCmpBase);
      res = fp::compare(cond, src[0], src[1]);
      break;
    }
    case Mnemonic::Class: res.bits = fp::class_mask(src[0]); break;
    case Mnemonic::Min: res = fp::minmax(fp::MinMaxKind::Min, src[0], src[1]); break;
    case Mnemonic::Max: res = fp::minmax(fp::MinMaxKind::Max, src[0], src[1]); break;
    case Mnemonic::Mina: res = fp::minmax(fp::MinMaxKind::MinA, src[0], src[1]); break;
    case Mnemonic::Maxa: res = fp::minmax(fp::MinMaxKind::MaxA, src[0], src[1]); break;
    case Mnemonic::Abs: res.bits = fp::move_family(fp::MoveKind::Abs, src[0]); break;
    case Mnemonic::Neg: res.bits = fp::move_family(fp::MoveKind::Neg, src[0]); break;
    case Mnemonic::Mov: res.bits = fp::move_family(fp::MoveKind::Mov, src[0]); break;
    case Mnemonic::Bc1eqz:
    case Mnemonic::Bc1nez: res.bits = src[0]; break;  // resolve at commit
    default: break;
  }
  op.result = res.bits;
  op.flags = res.flags;
}

void Engine::phase_operand_read() {
  for (InFlight& op : in_flight_) {
    if (!op.captured && op.capture_cycle == cycle_) capture_and_execute(op);
  }
}

void Engine::phase_dispatch() {
  if (next_dispatch_ >= program_.instructions.size()) return;

  // The replay reference never moves past an unresolved marked branch.
  if (config_.stall_dispatch_at_branch) {
    for (std::uint64_t i = rob_head_; i < rob_.size(); ++i) {
      const RobEntry& e = rob_[i];
      if (e.state == InstState::Committed) continue;
      const isa::Instruction& in = program_.instructions[e.instr_index];
      if ((in.mnemonic == Mnemonic::Bc1eqz || in.mnemonic == Mnemonic::Bc1nez) &&
          in.mispredict)
        return;
    }
  }

  // Form the dispatch group: up to two instructions; a mispredict-marked
  // branch always ends its group so the cycle checkpoint cleanly separates
  // older from younger.
  std::vector<std::uint64_t> group;
  int need_slots = 0;
  for (int k = 0; k < kDispatchWidth; ++k) {
    std::uint64_t idx = next_dispatch_ + static_cast<std::uint64_t>(k);
    if (idx >= program_.instructions.size()) break;
    if (rob_.size() - rob_head_ + group.size() >= kRobSize) break;
    const isa::Instruction& in = program_.instructions[idx];
    bool needs_slot = in.mnemonic != Mnemonic::Ldc1 && in.mnemonic != Mnemonic::Sdc1;
    group.push_back(idx);
    if (needs_slot) ++need_slots;
    if ((in.mnemonic == Mnemonic::Bc1eqz || in.mnemonic == Mnemonic::Bc1nez) &&
        in.mispredict)
      break;
  }

  // Shrink the group until the queue can take it.
  while (!group.empty()) {
    need_slots = 0;
    for (std::uint64_t idx : group) {
      Mnemonic m = program_.instructions[idx].mnemonic;
      if (m != Mnemonic::Ldc1 && m != Mnemonic::Sdc1) ++need_slots;
    }
    iq::AllocationResult alloc = queue_.round_robin_assign(need_slots);
    if (alloc.ok) {
      int next_block = 0;
      for (std::uint64_t idx : group) {
        const isa::Instruction& in = program_.instructions[idx];
        std::uint64_t age = ++age_counter_;

        RobEntry rob;
        rob.instr_index = static_cast<std::uint32_t>(idx);
        rob.age = age;
        rob.dispatch_cycle = cycle_;
        rob_.push_back(rob);
        std::uint64_t rob_pos = rob_.size() - 1;

        if (in.mnemonic == Mnemonic::Ldc1) {
          // The load schedule produces the value; the dispatch only claims
          // the destination if its broadcast is still in the future.
          if (in.load_cycle >
              cycle_ + static_cast<std::uint64_t>(config_.load_broadcast_lead)) {
            ready_undo_.push_back(ReadyUndo{age, in.fs, ready_.test(in.fs),
                                            avail_cycle_[static_cast<std::size_t>(in.fs)]});
            ready_.clear(in.fs);
            avail_cycle_[static_cast<std::size_t>(in.fs)] = ~std::uint64_t{0};
          }
        } else if (in.mnemonic == Mnemonic::Sdc1) {
          // Stores wait in the ROB and read at commit.
        } else {
          iq::PayloadEntry p;
          p.src[0] = static_cast<std::uint8_t>(in.fs < 0 ? 0 : in.fs);
          p.src[1] = static_cast<std::uint8_t>(in.ft < 0 ? 0 : in.ft);
          p.src[2] = static_cast<std::uint8_t>(in.fr < 0 ? 0 : in.fr);
          p.dest = static_cast<std::uint8_t>(in.fd < 0 ? 0 : in.fd);
          p.resource_vector = onehot(isa::resource_of(in.mnemonic));
          p.function = iq::function_code(in.mnemonic, in.cond);
          p.dir_rob = static_cast<std::uint8_t>(rob_pos % kRobSize);

          int block = alloc.blocks[static_cast<std::size_t>(next_block++)];
          int nsrc = isa::source_count(in.mnemonic);

          // Sources sample the ready-bit vector before the destination is
          // claimed, so self-referencing reads see the old value's state.
          int lat = effective_latency(isa::resource_of(in.mnemonic), in.mnemonic);
          std::uint64_t slack = lat >= 2 ? 1 : 0;
          std::uint64_t eligible_at = cycle_ + 1;
          iq::EntryRef ref = queue_.dispatch(p, nsrc, block, ready_, age,
                                             eligible_at,
                                             static_cast<std::uint32_t>(idx));
          iq::IqEntry& entry = queue_.entry(ref);
          for (int i = 0; i < nsrc; ++i) {
            if (!entry.ready[i]) continue;
            std::uint64_t avail = avail_cycle_[p.src[i]];
            std::uint64_t bound = avail > slack ? avail - slack : 0;
            entry.eligible_at = std::max(entry.eligible_at, bound);
          }

          if (isa::writes_dest(in.mnemonic)) {
            ready_undo_.push_back(ReadyUndo{age, in.fd, ready_.test(in.fd),
                                            avail_cycle_[static_cast<std::size_t>(in.fd)]});
            ready_.clear(in.fd);
            avail_cycle_[static_cast<std::size_t>(in.fd)] = ~std::uint64_t{0};
          }

          if (config_.variant == Variant::V2 &&
              isa::resource_of(in.mnemonic) == Resource::Div) {
            // The unified-FMAC engine has no divider.
            fcsr_.cause_e = true;
            trap_pending_ = true;
            trap_reason_ = "unimplemented instruction '" +
                           std::string(isa::mnemonic_name(in.mnemonic)) +
                           "' (no divider in v2; executed by software)";
          }
        }
        log_event(std::string("dispatch ") +
                  isa::mnemonic_name(in.mnemonic) + "#" + std::to_string(idx));
        ++counters_.dispatched;
        note_progress();
      }
      next_dispatch_ = group.back() + 1;
      return;
    }
    group.pop_back();
  }
}

void Engine::phase_commit() {
  for (int k = 0; k < kCommitWidth; ++k) {
    if (trap_pending_) {
      fail(RunStatus::Trap, "trap: " + trap_reason_);
      return;
    }
    if (rob_head_ >= rob_.size()) return;
    RobEntry& e = rob_[rob_head_];
    const isa::Instruction& in = program_.instructions[e.instr_index];

    if (in.mnemonic == Mnemonic::Sdc1) {
      // Stores read their register at commit through the store read port.
      int port = config_.variant == Variant::V1 ? 5 : 6;
      e.store_value = regfile_->read(port, in.fs);
      e.state = InstState::Executed;
      e.complete_cycle = cycle_;
      ++counters_.issued;  // occupies its L/S slot now
    } else if (in.mnemonic == Mnemonic::Ldc1) {
      if (e.state == InstState::Dispatched) return;  // data not yet arrived
      if (e.state == InstState::Executed && e.issue_cycle == 0) {
        e.issue_cycle = e.complete_cycle;
        ++counters_.issued;
      }
    } else if (e.state != InstState::Executed) {
      return;
    }

    e.state = InstState::Committed;
    e.commit_cycle = cycle_;
    ++counters_.committed;
    bool trap = isa::fcsr_accrue(fcsr_, e.flags);
    if (trap) {
      trap_pending_ = true;
      trap_reason_ = "enabled exception (" + isa::format_flags(e.flags) +
                     ") at instruction " + std::to_string(e.instr_index);
    }
    log_event(std::string("commit ") + isa::mnemonic_name(in.mnemonic) + "#" +
              std::to_string(e.instr_index));
    note_progress();
    ++rob_head_;

    if ((in.mnemonic == Mnemonic::Bc1eqz || in.mnemonic == Mnemonic::Bc1nez) &&
        in.mispredict) {
      rollback(e, rob_head_ - 1);
      return;  // nothing younger can commit this cycle
    }
  }
}

void Engine::rollback(const RobEntry& branch, std::uint64_t branch_rob_pos) {
  // Recovery point: the snapshot taken at the end of the branch's dispatch
  // cycle (a marked branch always ends its dispatch group).
  if (cycle_ - branch.dispatch_cycle >= kCheckpointRing) {
    fail(RunStatus::CheckpointEvicted,
         "checkpoint for cycle " + std::to_string(branch.dispatch_cycle) +
             " evicted (older than 64 cycles)");
    return;
  }
  const Checkpoint& cp =
      checkpoints_[branch.dispatch_cycle % kCheckpointRing];
  assert(cp.cycle == branch.dispatch_cycle);

  // Wrong-path queue entries vanish and their free-list pops rewind; the
  // BMT is rebuilt from the survivors.
  queue_.squash_younger(branch.age);
  queue_.set_cursor(cp.cursor);

  // Younger instructions never issued (issue is blocked behind unresolved
  // branches), so no in-flight work is dropped; assert that invariant.
  for (const InFlight& op : in_flight_) {
    assert(rob_[op.rob_pos].age <= branch.age);
    (void)op;
  }

  // Undo the ready-bit/availability effects of squashed dispatches, newest
  // first. Register VALUES are not restored; squashed destinations simply
  // read as not-ready again.
  while (!ready_undo_.empty() && ready_undo_.back().age > branch.age) {
    const ReadyUndo& u = ready_undo_.back();
    ready_.set_to(u.reg, u.prev_ready);
    avail_cycle_[static_cast<std::size_t>(u.reg)] = u.prev_avail;
    ready_undo_.pop_back();
  }

  // Squash the ROB tail and resume dispatch on the correct path, which the
  // trace supplies after the marker.
  std::uint64_t first_squashed = branch_rob_pos + 1;
  if (first_squashed < rob_.size()) {
    next_dispatch_ = rob_[first_squashed].instr_index;
    rob_.resize(first_squashed);
  } else {
    next_dispatch_ = branch.instr_index + 1;
  }
  last_rollback_cycle_ = cycle_;
  log_event("rollback to cycle " + std::to_string(branch.dispatch_cycle));
  note_progress();
}

void Engine::phase_checkpoint() {
  Checkpoint& cp = checkpoints_[cycle_ % kCheckpointRing];
  cp.cycle = cycle_;
  cp.ready = ready_.snapshot();
  for (int b = 0; b < iq::kBlocks; ++b) {
    cp.fifos[static_cast<std::size_t>(b)] = queue_.fifo(b);
    cp.valid_masks[static_cast<std::size_t>(b)] = queue_.valid_mask(b);
  }
  cp.bmt = queue_.bmt();
  cp.cursor = queue_.cursor();
}

Engine::StateDigest Engine::state_digest() const {
  StateDigest d;
  d.ready = ready_.snapshot();
  for (int b = 0; b < iq::kBlocks; ++b) {
    d.fifos[static_cast<std::size_t>(b)] = queue_.fifo(b);
    d.valid_masks[static_cast<std::size_t>(b)] = queue_.valid_mask(b);
  }
  d.bmt = queue_.bmt();
  d.cursor = queue_.cursor();
  return d;
}

bool Engine::finished() const {
  return halted_ ||
         (next_dispatch_ >= program_.instructions.size() &&
          rob_head_ >= rob_.size());
}

stats::RunReport Engine::run(const isa::Program& program) {
  load(program);
  last_progress_ = 0;
  while (!finished()) {
    if (cycle_ >= config_.cycle_budget) {
      fail(RunStatus::BudgetExceeded,
           "cycle budget " + std::to_string(config_.cycle_budget) + " exceeded");
      break;
    }
    step();
  }
  if (status_ == RunStatus::Ok) status_message_ = "ok";
  return report();
}

stats::RunReport Engine::report() const {
  stats::RunReport r = stats::finalize(counters_, cycle_);
  r.status = static_cast<int>(status_);
  r.status_message = status_message_.empty() ? "ok" : status_message_;
  {
    std::ostringstream os;
    os << variant_name(config_.variant) << " bmt="
       << (config_.bmt_enabled ? "on" : "off") << " regfile="
       << (config_.regfile_model == rf::Model::Reference ? "reference"
           : config_.regfile_model == rf::Model::Xor ? "xor" : "lvt")
       << " lead=" << config_.broadcast_lead << " seed=" << config_.seed;
    r.config_summary = os.str();
  }
  for (int i = 0; i < 5; ++i) r.fcsr_flags[i] = fcsr_.flags[i];
  // Stores in commit order.
  for (std::uint64_t i = 0; i < rob_.size(); ++i) {
    const RobEntry& e = rob_[i];
    const isa::Instruction& in = program_.instructions[e.instr_index];
    if (in.mnemonic == Mnemonic::Sdc1 && e.state == InstState::Committed)
      r.stores.push_back(stats::StoreCapture{in.fs, e.store_value});
  }
  // Final per-instruction timeline, program order.
  r.timeline.resize(program_.instructions.size());
  for (std::size_t i = 0; i < program_.instructions.size(); ++i) {
    r.timeline[i].index = static_cast<std::uint32_t>(i);
    r.timeline[i].text = isa::mnemonic_name(program_.instructions[i].mnemonic);
  }
  for (const RobEntry& e : rob_) {
    stats::InstrTimeline& t = r.timeline[e.instr_index];
    t.dispatched = true;
    t.dispatch = e.dispatch_cycle;
    if (e.issue_cycle) {
      t.issued = true;
      t.issue = e.issue_cycle;
    }
    if (e.state == InstState::Executed || e.state == InstState::Committed) {
      t.completed = true;
      t.complete = e.complete_cycle;
    }
    if (e.state == InstState::Committed) {
      t.committed = true;
      t.commit = e.commit_cycle;
    }
  }
  r.events = events_;
  return r;
}

}  // namespace fpe::engine
