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

// Shared helpers for the test suites: deterministic RNG, random trace
// programs with single-producer registers, and an in-order functional
// evaluator used as the dataflow oracle.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "isa.hpp"
#include "softfloat.hpp"

namespace testutil {

using fpe::fp::u64;

// Random well-formed trace program: loads first (so every consumed register
// has a producer), then compute ops over already-produced registers, with
// stores sprinkled in. Destinations are never reused — the engine is
// rename-free, so each register has a single producer.
struct ProgramOptions {
  int max_instructions = 64;
  bool allow_div = true;
  bool allow_branch = false;
  int mispredict_at = -1;  // instruction position for a marked branch
};

inline fpe::isa::Program random_program(std::mt19937_64& rng,
                                        const ProgramOptions& opt) {
  using namespace fpe::isa;
  Program p;
  std::vector<int> produced;  // registers with values (program order)
  int next_reg = 0;
  std::uint64_t next_load_cycle = 1 + rng() % 3;

  auto pick_src = [&]() {
    return produced[rng() % produced.size()];
  };

  int n_loads = 2 + static_cast<int>(rng() % 6);
  for (int i = 0; i < n_loads && next_reg < 32; ++i) {
    Instruction in;
    in.mnemonic = Mnemonic::Ldc1;
    in.fs = next_reg++;
    in.load_cycle = next_load_cycle;
    next_load_cycle += 1 + rng() % 4;
    // Finite values keep the dataflow oracle free of NaN-ordering noise.
    in.load_value = (rng() & fpe::fp::kFracMask) |
                    ((0x380ull + rng() % 0x80) << 52) |
                    ((rng() & 1) ? fpe::fp::kSignMask : 0);
    p.loads.push_back({in.load_cycle, in.load_value, in.fs});
    p.instructions.push_back(in);
    produced.push_back(in.fs);
  }

  int budget = opt.max_instructions - static_cast<int>(p.instructions.size());
  for (int i = 0; i < budget; ++i) {
    if (opt.mispredict_at >= 0 &&
        static_cast<int>(p.instructions.size()) == opt.mispredict_at) {
      Instruction br;
      br.mnemonic = (rng() & 1) ? Mnemonic::Bc1eqz : Mnemonic::Bc1nez;
      br.fs = pick_src();
      br.mispredict = true;
      p.instructions.push_back(br);
      continue;
    }
    int roll = static_cast<int>(rng() % 10);
    if (roll == 0) {
      Instruction st;
      st.mnemonic = Mnemonic::Sdc1;
      st.fs = pick_src();
      p.captures.push_back(st.fs);
      p.instructions.push_back(st);
      continue;
    }
    if (roll == 1 && opt.allow_branch) {
      Instruction br;
      br.mnemonic = (rng() & 1) ? Mnemonic::Bc1eqz : Mnemonic::Bc1nez;
      br.fs = pick_src();
      p.instructions.push_back(br);
      continue;
    }
    if (next_reg >= 32) break;
    Instruction in;
    static const Mnemonic pool[] = {
        Mnemonic::Add,  Mnemonic::Sub,  Mnemonic::Mul,   Mnemonic::Maddf,
        Mnemonic::Msubf, Mnemonic::Min, Mnemonic::Max,   Mnemonic::Abs,
        Mnemonic::Neg,  Mnemonic::Mov,  Mnemonic::Cmp,   Mnemonic::Class,
        Mnemonic::Div,  Mnemonic::Recip, Mnemonic::Mina, Mnemonic::Maxa,
    };
    in.mnemonic = pool[rng() % (sizeof pool / sizeof pool[0])];
    if (!opt.allow_div &&
        (in.mnemonic == Mnemonic::Div || in.mnemonic == Mnemonic::Recip))
      in.mnemonic = Mnemonic::Mul;
    if (in.mnemonic == Mnemonic::Cmp)
      in.cond = static_cast<fpe::fp::CompareCond>(rng() % 8);  // non-signaling
    in.fd = next_reg++;
    in.fs = pick_src();
    int nsrc = source_count(in.mnemonic);
    if (nsrc >= 2) in.ft = pick_src();
    if (nsrc >= 3) in.fr = pick_src();
    p.instructions.push_back(in);
    produced.push_back(in.fd);
  }

  // Always capture something so runs are comparable.
  if (p.captures.empty() && !produced.empty()) {
    Instruction st;
    st.mnemonic = Mnemonic::Sdc1;
    st.fs = produced.back();
    p.captures.push_back(st.fs);
    p.instructions.push_back(st);
  }
  return p;
}

// Pure in-order functional evaluation; the dataflow oracle for the engine.
inline std::vector<std::pair<int, u64>> evaluate_in_order(
    const fpe::isa::Program& p, fpe::fp::Rounding rm, bool flush) {
  using namespace fpe::isa;
  using namespace fpe::fp;
  u64 regs[32] = {};
  std::vector<std::pair<int, u64>> stores;
  for (const Instruction& in : p.instructions) {
    switch (in.mnemonic) {
      case Mnemonic::Ldc1: regs[in.fs] = in.load_value; break;
      case Mnemonic::Sdc1: stores.emplace_back(in.fs, regs[in.fs]); break;
      case Mnemonic::Add: regs[in.fd] = add_sub(regs[in.fs], regs[in.ft], false, rm, flush).bits; break;
      case Mnemonic::Sub: regs[in.fd] = add_sub(regs[in.fs], regs[in.ft], true, rm, flush).bits; break;
      case Mnemonic::Mul: regs[in.fd] = mul(regs[in.fs], regs[in.ft], rm, flush).bits; break;
      case Mnemonic::Div: regs[in.fd] = div(regs[in.fs], regs[in.ft], rm, flush).bits; break;
      case Mnemonic::Recip: regs[in.fd] = recip(regs[in.fs], rm, flush).bits; break;
      case Mnemonic::Maddf: regs[in.fd] = fmac(regs[in.fs], regs[in.ft], regs[in.fr], false, rm, flush).bits; break;
      case Mnemonic::Msubf: regs[in.fd] = fmac(regs[in.fs], regs[in.ft], regs[in.fr], true, rm, flush).bits; break;
      case Mnemonic::Cmp: regs[in.fd] = compare(in.cond, regs[in.fs], regs[in.ft]).bits; break;
      case Mnemonic::Class: regs[in.fd] = class_mask(regs[in.fs]); break;
      case Mnemonic::Min: regs[in.fd] = minmax(MinMaxKind::Min, regs[in.fs], regs[in.ft]).bits; break;
      case Mnemonic::Max: regs[in.fd] = minmax(MinMaxKind::Max, regs[in.fs], regs[in.ft]).bits; break;
      case Mnemonic::Mina: regs[in.fd] = minmax(MinMaxKind::MinA, regs[in.fs], regs[in.ft]).bits; break;
      case Mnemonic::Maxa: regs[in.fd] = minmax(MinMaxKind::MaxA, regs[in.fs], regs[in.ft]).bits; break;
      case Mnemonic::Abs: regs[in.fd] = move_family(MoveKind::Abs, regs[in.fs]); break;
      case Mnemonic::Neg: regs[in.fd] = move_family(MoveKind::Neg, regs[in.fs]); break;
      case Mnemonic::Mov: regs[in.fd] = move_family(MoveKind::Mov, regs[in.fs]); break;
      case Mnemonic::Bc1eqz:
      case Mnemonic::Bc1nez: break;
    }
  }
  return stores;
}

}  // namespace testutil
