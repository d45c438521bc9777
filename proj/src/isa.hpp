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

// Instruction subset, trace-program text format, and FCSR state shared by
// the engine and the CLI.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "softfloat.hpp"

namespace fpe::isa {

enum class Mnemonic : std::uint8_t {
  Add, Sub, Mul, Div, Recip, Maddf, Msubf, Cmp, Class,
  Min, Max, Mina, Maxa, Abs, Neg, Mov, Bc1eqz, Bc1nez, Ldc1, Sdc1,
};

// Functional-unit kinds of the payload resource vector, LSB first.
enum class Resource : std::uint8_t {
  Add = 0, Mul = 1, Div = 2, Sqrt = 3, Alu = 4, Mula = 5, MovToFrom = 6,
  Branch = 7,
};
inline constexpr int kResourceCount = 8;

const char* mnemonic_name(Mnemonic m);
const char* resource_name(Resource r);
Resource resource_of(Mnemonic m);

// Number of register sources the mnemonic reads (fused 3, binary 2, unary 1).
int source_count(Mnemonic m);
bool writes_dest(Mnemonic m);

struct Instruction {
  Mnemonic mnemonic = Mnemonic::Add;
  fp::CompareCond cond = fp::CompareCond::AF;  // CMP only
  int fd = -1;  // destination logical register
  int fs = -1;  // first source (also SDC1/BC1 operand, LDC1 dest)
  int ft = -1;
  int fr = -1;
  bool mispredict = false;       // branch marker
  std::uint64_t load_cycle = 0;  // LDC1 annotation
  fp::u64 load_value = 0;        // LDC1 annotation

  bool operator==(const Instruction&) const = default;
};

struct Program {
  struct Load {
    std::uint64_t cycle = 0;
    fp::u64 value = 0;
    int reg = 0;
    bool operator==(const Load&) const = default;
  };
  struct Expect {
    int reg = 0;
    fp::u64 bits = 0;
    bool operator==(const Expect&) const = default;
  };

  std::vector<Instruction> instructions;  // dispatch order
  std::vector<Load> loads;                // schedule derived from LDC1 lines
  std::vector<int> captures;              // SDC1 registers, program order
  std::vector<Expect> expects;            // golden footer

  bool operator==(const Program&) const = default;
};

struct ParseResult {
  bool ok = false;
  Program program;
  std::string error;  // includes the offending line number
  int line = 0;
};

ParseResult parse_program(std::string_view text);

// Canonical text form; parse_program(render_program(p)) reproduces p.
std::string render_program(const Program& p);

// Flag indices within Fcsr arrays.
inline constexpr int kFlagV = 0;
inline constexpr int kFlagZ = 1;
inline constexpr int kFlagO = 2;
inline constexpr int kFlagU = 3;
inline constexpr int kFlagI = 4;

struct Fcsr {
  fp::Rounding rm = fp::Rounding::Nearest;
  bool flags[5] = {};    // V Z O U I, accrued
  bool enables[5] = {};
  bool cause[5] = {};    // most recent operation
  bool cause_e = false;  // Unimplemented Operation, always enabled
  bool flush = false;    // FS
  // NAN2008 = 1 and ABS2008 = 1 are fixed for this model.

  bool operator==(const Fcsr&) const = default;
};

// Cause := flags of this operation, Flags |= flags; returns the trap
// indicator (any enabled cause, or the always-enabled E).
bool fcsr_accrue(Fcsr& fcsr, const fp::Flags& flags);

std::string format_flags(const fp::Flags& f);

}  // namespace fpe::isa
