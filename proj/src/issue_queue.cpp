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

#include "issue_queue.hpp"

#include <algorithm>
#include <cassert>

namespace fpe::iq {

namespace {

constexpr std::uint64_t field(std::uint64_t v, int lo, int width) {
  return (v & ((std::uint64_t{1} << width) - 1)) << lo;
}

constexpr std::uint64_t take(std::uint64_t w, int lo, int width) {
  return (w >> lo) & ((std::uint64_t{1} << width) - 1);
}

}  // namespace

std::uint64_t PayloadEntry::pack() const {
  return field(format, 49, 5) | field(src[0], 42, 7) | field(src[1], 35, 7) |
         field(src[2], 28, 7) | field(dest, 21, 7) |
         field(resource_vector, 13, 8) | field(function, 7, 6) |
         field(dir_rob, 0, 7);
}

PayloadEntry PayloadEntry::unpack(std::uint64_t w) {
  PayloadEntry p;
  p.format = static_cast<std::uint8_t>(take(w, 49, 5));
  p.src[0] = static_cast<std::uint8_t>(take(w, 42, 7));
  p.src[1] = static_cast<std::uint8_t>(take(w, 35, 7));
  p.src[2] = static_cast<std::uint8_t>(take(w, 28, 7));
  p.dest = static_cast<std::uint8_t>(take(w, 21, 7));
  p.resource_vector = static_cast<std::uint8_t>(take(w, 13, 8));
  p.function = static_cast<std::uint8_t>(take(w, 7, 6));
  p.dir_rob = static_cast<std::uint8_t>(take(w, 0, 7));
  return p;
}

std::uint8_t function_code(isa::Mnemonic m, fp::CompareCond cond) {
  if (m == isa::Mnemonic::Cmp)
    return static_cast<std::uint8_t>(kFunctionCmpBase + static_cast<int>(cond));
  return static_cast<std::uint8_t>(m);
}

FreeFifo::FreeFifo() {
  for (int i = 0; i < kBlockSize; ++i) cells_[static_cast<std::size_t>(i)] =
      static_cast<std::uint8_t>(i);
}

int FreeFifo::pop() {
  assert(count_ > 0);
  int slot = cells_[static_cast<std::size_t>(rd_)];
  rd_ = (rd_ + 1) % kBlockSize;
  --count_;
  return slot;
}

void FreeFifo::push(int slot) {
  assert(count_ < kBlockSize);
  cells_[static_cast<std::size_t>(wr_)] = static_cast<std::uint8_t>(slot);
  wr_ = (wr_ + 1) % kBlockSize;
  ++count_;
}

void FreeFifo::unpop(int n) {
  assert(count_ + n <= kBlockSize);
  rd_ = (rd_ - n % kBlockSize + kBlockSize) % kBlockSize;
  count_ += n;
}

IssueQueue::IssueQueue() = default;

AllocationResult IssueQueue::round_robin_assign(int active) {
  assert(active >= 0 && active <= 2);
  AllocationResult res;
  int non_full = 0;
  for (int b = 0; b < kBlocks; ++b)
    if (!fifos_[static_cast<std::size_t>(b)].empty()) ++non_full;
  if (non_full < active) return res;  // full back-pressure

  int assigned = 0;
  int cur = cursor_;
  for (int step = 0; step < kBlocks && assigned < active; ++step) {
    int b = (cur + step) % kBlocks;
    if (fifos_[static_cast<std::size_t>(b)].empty()) continue;
    res.blocks[static_cast<std::size_t>(assigned++)] = b;
    cursor_ = (b + 1) % kBlocks;
  }
  res.ok = assigned == active;
  return res;
}

EntryRef IssueQueue::dispatch(const PayloadEntry& payload, int used_sources,
                              int block, const rf::ReadyBits& ready_vector,
                              std::uint64_t age, std::uint64_t eligible_at,
                              std::uint32_t instr_index) {
  FreeFifo& fifo = fifos_[static_cast<std::size_t>(block)];
  assert(!fifo.empty());
  int slot = fifo.pop();
  IqEntry& e = entries_[static_cast<std::size_t>(block)][static_cast<std::size_t>(slot)];
  assert(!e.valid);
  e.valid = true;
  e.payload = payload;
  e.used_sources = used_sources;
  e.age = age;
  e.eligible_at = eligible_at;
  e.instr_index = instr_index;
  for (int i = 0; i < 3; ++i) {
    if (i >= used_sources) {
      e.ready[i] = true;  // unused source slots are born ready
      continue;
    }
    int tag = payload.src[i];
    e.ready[i] = ready_vector.test(tag);
    if (!e.ready[i]) bmt_.set(tag, block);
  }
  return EntryRef{block, slot};
}

WakeupStats IssueQueue::wakeup(int tag, bool bmt_enabled,
                               std::uint64_t eligible_at) {
  WakeupStats stats;
  std::uint8_t enabled;
  if (bmt_enabled) {
    enabled = bmt_.row(tag);
    stats.bmt_read = true;
  } else {
    enabled = 0xF;
  }
  stats.blocks_enabled = __builtin_popcount(enabled);
  for (int b = 0; b < kBlocks; ++b) {
    if (!(enabled & (1u << b))) continue;
    for (int s = 0; s < kBlockSize; ++s) {
      IqEntry& e = entries_[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
      if (!e.valid) continue;
      bool was_ready = e.all_ready();
      bool hit = false;
      for (int i = 0; i < e.used_sources; ++i) {
        if (e.ready[i]) continue;
        ++stats.comparisons;
        if (e.payload.src[i] == tag) {
          e.ready[i] = true;
          hit = true;
        }
      }
      if (hit) {
        e.eligible_at = std::max(e.eligible_at, eligible_at);
        if (!was_ready && e.all_ready()) stats.woken.push_back(EntryRef{b, s});
      }
    }
  }
  // The row is cleared once its consumers have been woken; later consumers
  // of this tag read the ready-bit vector at dispatch instead.
  bmt_.clear_row(tag);
  return stats;
}

std::vector<EntryRef> IssueQueue::select(
    std::uint64_t cycle, int width,
    const std::function<bool(const IqEntry&)>& eligible,
    const std::function<bool(const IqEntry&, int slot)>& admit) {
  // Stage 1: oldest eligible candidate per block.
  std::array<EntryRef, kBlocks> candidates;
  for (int b = 0; b < kBlocks; ++b) {
    EntryRef best;
    std::uint64_t best_age = 0;
    for (int s = 0; s < kBlockSize; ++s) {
      const IqEntry& e =
          entries_[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
      if (!e.valid || !e.all_ready() || e.eligible_at > cycle) continue;
      if (eligible && !eligible(e)) continue;
      if (!best.valid() || e.age < best_age) {
        best = EntryRef{b, s};
        best_age = e.age;
      }
    }
    candidates[static_cast<std::size_t>(b)] = best;
  }

  // Stage 2: oldest-first over the block winners; the admit callback
  // resolves per-slot structural constraints.
  std::array<int, kBlocks> order{};
  int n = 0;
  for (int b = 0; b < kBlocks; ++b)
    if (candidates[static_cast<std::size_t>(b)].valid()) order[static_cast<std::size_t>(n++)] = b;
  std::sort(order.begin(), order.begin() + n, [&](int x, int y) {
    return entry(candidates[static_cast<std::size_t>(x)]).age <
           entry(candidates[static_cast<std::size_t>(y)]).age;
  });

  std::vector<EntryRef> picks;
  for (int i = 0; i < n && static_cast<int>(picks.size()) < width; ++i) {
    EntryRef ref = candidates[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    if (!admit || admit(entry(ref), static_cast<int>(picks.size())))
      picks.push_back(ref);
  }
  return picks;
}

void IssueQueue::release(EntryRef ref) {
  IqEntry& e = entry(ref);
  assert(e.valid);
  e.valid = false;
  fifos_[static_cast<std::size_t>(ref.block)].push(ref.slot);
}

std::vector<std::uint32_t> IssueQueue::squash_younger(
    std::uint64_t age_threshold) {
  std::vector<std::uint32_t> squashed;
  for (int b = 0; b < kBlocks; ++b) {
    int k = 0;
    for (int s = 0; s < kBlockSize; ++s) {
      IqEntry& e = entries_[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
      if (e.valid && e.age > age_threshold) {
        squashed.push_back(e.instr_index);
        e.valid = false;
        ++k;
      }
    }
    // The squashed entries hold the last k slots popped from this block's
    // free list, so rewinding the read pointer restores it exactly.
    fifos_[static_cast<std::size_t>(b)].unpop(k);
  }
  // Rebuild the BMT from the survivors: a row/column bit is set exactly when
  // a valid entry in that block still waits on that register.
  bmt_.clear_all();
  for (int b = 0; b < kBlocks; ++b) {
    for (int s = 0; s < kBlockSize; ++s) {
      const IqEntry& e =
          entries_[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
      if (!e.valid) continue;
      for (int i = 0; i < e.used_sources; ++i)
        if (!e.ready[i]) bmt_.set(e.payload.src[i], b);
    }
  }
  return squashed;
}

int IssueQueue::valid_count() const {
  int n = 0;
  for (const auto& block : entries_)
    for (const IqEntry& e : block) n += e.valid ? 1 : 0;
  return n;
}

std::uint32_t IssueQueue::valid_mask(int block) const {
  std::uint32_t m = 0;
  for (int s = 0; s < kBlockSize; ++s)
    if (entries_[static_cast<std::size_t>(block)][static_cast<std::size_t>(s)].valid)
      m |= 1u << s;
  return m;
}

bool IssueQueue::conservation_holds() const {
  for (int b = 0; b < kBlocks; ++b) {
    const FreeFifo& f = fifos_[static_cast<std::size_t>(b)];
    std::uint32_t seen = 0;
    for (int i = 0; i < f.count(); ++i) {
      int idx = (f.rd_pointer() + i) % kBlockSize;
      int slot = f.cells()[static_cast<std::size_t>(idx)];
      if (seen & (1u << slot)) return false;
      seen |= 1u << slot;
    }
    for (int s = 0; s < kBlockSize; ++s) {
      if (entries_[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)].valid) {
        if (seen & (1u << s)) return false;
        seen |= 1u << s;
      }
    }
    if (seen != 0xFF) return false;
  }
  return true;
}

}  // namespace fpe::iq
