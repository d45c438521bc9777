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

// 32-entry, 4-block out-of-order issue queue: round-robin allocation with
// per-block FIFO free lists, CAM-style wakeup gated by the Block Mapping
// Table, and a two-stage aging arbiter issuing up to 2 instructions per
// cycle. Tag comparison counts are the energy proxy.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "isa.hpp"
#include "regfile.hpp"

namespace fpe::iq {

inline constexpr int kBlocks = 4;
inline constexpr int kBlockSize = 8;

// 54-bit payload word, Fig-4.11 layout:
// format[53:49] src0[48:42] src1[41:35] src2[34:28] dest[27:21]
// resource[20:13] function[12:7] dir_rob[6:0].
struct PayloadEntry {
  std::uint8_t format = 17;  // 'D'; stored, not interpreted
  std::uint8_t src[3] = {0, 0, 0};
  std::uint8_t dest = 0;
  std::uint8_t resource_vector = 0;  // one-hot, bit = isa::Resource
  std::uint8_t function = 0;
  std::uint8_t dir_rob = 0;

  std::uint64_t pack() const;
  static PayloadEntry unpack(std::uint64_t word);
  bool operator==(const PayloadEntry&) const = default;
};

// Function-field encoding: compare ops carry their condition.
inline constexpr int kFunctionCmpBase = 32;
std::uint8_t function_code(isa::Mnemonic m, fp::CompareCond cond);

struct IqEntry {
  bool valid = false;
  PayloadEntry payload;
  bool ready[3] = {false, false, false};
  int used_sources = 0;
  std::uint64_t age = 0;          // monotone dispatch sequence number
  std::uint64_t eligible_at = 0;  // first cycle the arbiter may pick it
  std::uint32_t instr_index = 0;  // program position (model bookkeeping)

  bool all_ready() const { return ready[0] && ready[1] && ready[2]; }
};

struct EntryRef {
  int block = -1;
  int slot = -1;
  bool valid() const { return block >= 0; }
  bool operator==(const EntryRef&) const = default;
};

// Per-block ring of 8 free slot indices, 3 bits each.
class FreeFifo {
 public:
  FreeFifo();
  bool empty() const { return count_ == 0; }
  bool full() const { return count_ == kBlockSize; }
  int count() const { return count_; }
  int pop();
  void push(int slot);
  // Undo the most recent `n` pops (their cells are still in place).
  void unpop(int n);
  int rd_pointer() const { return rd_; }
  int wr_pointer() const { return wr_; }
  const std::array<std::uint8_t, kBlockSize>& cells() const { return cells_; }

  bool operator==(const FreeFifo&) const = default;

 private:
  std::array<std::uint8_t, kBlockSize> cells_;
  int rd_ = 0;
  int wr_ = 0;
  int count_ = kBlockSize;
};

// 128 x 4: row r column b set iff block b holds a valid, un-woken consumer
// of physical register r.
class Bmt {
 public:
  std::uint8_t row(int reg) const { return rows_[static_cast<std::size_t>(reg)]; }
  void set(int reg, int block) {
    rows_[static_cast<std::size_t>(reg)] |= static_cast<std::uint8_t>(1u << block);
  }
  void clear_row(int reg) { rows_[static_cast<std::size_t>(reg)] = 0; }
  void clear_all() { rows_.fill(0); }
  bool operator==(const Bmt&) const = default;

 private:
  std::array<std::uint8_t, rf::kRegCount> rows_{};
};

struct WakeupStats {
  int comparisons = 0;
  int blocks_enabled = 0;
  bool bmt_read = false;
  std::vector<EntryRef> woken;  // entries whose last missing source matched
};

struct AllocationResult {
  bool ok = false;
  std::array<int, 2> blocks = {-1, -1};
};

class IssueQueue {
 public:
  IssueQueue();

  // Round-robin assignment: each incoming instruction gets the next
  // non-full block in cyclic order, at most one per block per cycle.
  // Fails (back-pressure) when fewer non-full blocks than instructions.
  AllocationResult round_robin_assign(int active);
  int cursor() const { return cursor_; }
  void set_cursor(int c) { cursor_ = c; }

  // Pops a slot from `block`, writes the payload, seeds per-source ready
  // bits from the ready-bit vector and marks the BMT for the missing ones.
  EntryRef dispatch(const PayloadEntry& payload, int used_sources, int block,
                    const rf::ReadyBits& ready_vector, std::uint64_t age,
                    std::uint64_t eligible_at, std::uint32_t instr_index);

  // Tag broadcast. With the BMT enabled, comparisons run only in blocks the
  // tag's row names, then the row is cleared; otherwise every block is
  // scanned. Counts one comparison per pending source examined. Woken
  // entries become selectable no earlier than `eligible_at`.
  WakeupStats wakeup(int tag, bool bmt_enabled, std::uint64_t eligible_at);

  // Two-stage selection: stage 1 picks the oldest eligible entry per block,
  // stage 2 the `width` oldest of those (never two from one block). The
  // `admit` callback resolves functional-unit and port constraints per
  // candidate; rejected candidates retry in a later cycle.
  std::vector<EntryRef> select(
      std::uint64_t cycle, int width,
      const std::function<bool(const IqEntry&)>& eligible,
      const std::function<bool(const IqEntry&, int slot)>& admit);

  // Issue release: invalidates the entry and recycles its slot.
  void release(EntryRef ref);

  // Squashes every entry younger than `age_threshold`, rewinding each
  // block's free-list pops, and rebuilds the BMT from the survivors.
  // Returns the squashed instruction indices.
  std::vector<std::uint32_t> squash_younger(std::uint64_t age_threshold);

  const IqEntry& entry(EntryRef ref) const {
    return entries_[static_cast<std::size_t>(ref.block)]
                   [static_cast<std::size_t>(ref.slot)];
  }
  IqEntry& entry(EntryRef ref) {
    return entries_[static_cast<std::size_t>(ref.block)]
                   [static_cast<std::size_t>(ref.slot)];
  }
  const std::array<IqEntry, kBlockSize>& block_entries(int b) const {
    return entries_[static_cast<std::size_t>(b)];
  }
  const FreeFifo& fifo(int b) const { return fifos_[static_cast<std::size_t>(b)]; }
  const Bmt& bmt() const { return bmt_; }
  Bmt& bmt() { return bmt_; }

  bool block_full(int b) const { return fifos_[static_cast<std::size_t>(b)].empty(); }
  int valid_count() const;
  std::uint32_t valid_mask(int block) const;

  // Free-list entries plus occupied valid slots must be exactly {0..7} in
  // every block.
  bool conservation_holds() const;

 private:
  std::array<std::array<IqEntry, kBlockSize>, kBlocks> entries_;
  std::array<FreeFifo, kBlocks> fifos_;
  Bmt bmt_;
  int cursor_ = 0;
};

}  // namespace fpe::iq
