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

// Bit-exact IEEE-754 double-precision functional units: add/sub, multiply,
// table-seeded Newton-Raphson reciprocal and divide, fused multiply-accumulate,
// and the compare/class/min-max/move family. Every operation returns a result
// bit pattern plus the five exception flags; nothing here traps or touches
// host floating-point state.

#pragma once

#include <array>
#include <cstdint>

namespace fpe::fp {

using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Format parameters for binary64.
inline constexpr int kPrecision = 53;
inline constexpr int kFracBits = 52;
inline constexpr int kExpBits = 11;
inline constexpr int kBias = 1023;
inline constexpr int kEmax = 1023;
inline constexpr int kEmin = -1022;  // = 1 - kEmax
inline constexpr u64 kFracMask = (u64{1} << kFracBits) - 1;
inline constexpr u64 kSignMask = u64{1} << 63;
inline constexpr u64 kAbsMask = ~kSignMask;
inline constexpr u64 kExpFieldMax = 0x7FF;
inline constexpr u64 kHiddenBit = u64{1} << kFracBits;
inline constexpr u64 kQuietBit = u64{1} << 51;
// New quiet NaN under the 2008 encoding.
inline constexpr u64 kDefaultQnan = 0x7FF8000000000000ULL;
inline constexpr u64 kPosInf = 0x7FF0000000000000ULL;
inline constexpr u64 kMaxFinite = 0x7FEFFFFFFFFFFFFFULL;

// FCSR RM field encodings.
enum class Rounding : std::uint8_t {
  Nearest = 0,   // RN, ties to even
  TowardZero = 1,  // RZ
  Upward = 2,    // RP
  Downward = 3,  // RM
};

// Operand/result classification, one kind per pattern. Enum values double as
// the bit positions of class_mask (LSB first).
enum class FpClass : std::uint8_t {
  SignalingNan = 0,
  QuietNan = 1,
  NegInfinity = 2,
  NegNormal = 3,
  NegSubnormal = 4,
  NegZero = 5,
  PosInfinity = 6,
  PosNormal = 7,
  PosSubnormal = 8,
  PosZero = 9,
};

// The five IEEE flag bits.
struct Flags {
  bool invalid = false;      // V
  bool div_zero = false;     // Z
  bool overflow = false;     // O
  bool underflow = false;    // U
  bool inexact = false;      // I

  void merge(const Flags& o) {
    invalid |= o.invalid;
    div_zero |= o.div_zero;
    overflow |= o.overflow;
    underflow |= o.underflow;
    inexact |= o.inexact;
  }
  bool any() const { return invalid || div_zero || overflow || underflow || inexact; }
  bool operator==(const Flags&) const = default;
};

struct Result {
  u64 bits = 0;
  Flags flags;
};

struct Decoded {
  bool sign = false;
  int exp_field = 0;  // biased, raw 11-bit field
  u64 fraction = 0;   // 52-bit
  FpClass cls = FpClass::PosZero;

  bool is_nan() const { return cls == FpClass::SignalingNan || cls == FpClass::QuietNan; }
  bool is_inf() const { return cls == FpClass::NegInfinity || cls == FpClass::PosInfinity; }
  bool is_zero() const { return cls == FpClass::NegZero || cls == FpClass::PosZero; }
  bool is_subnormal() const {
    return cls == FpClass::NegSubnormal || cls == FpClass::PosSubnormal;
  }
  bool is_finite_nonzero() const {
    return !is_nan() && !is_inf() && !is_zero();
  }
};

Decoded decode(u64 bits);
u64 pack(bool sign, int exp_field, u64 fraction);

// 10-bit class mask, exactly one bit set (bit index = FpClass value).
u16 class_mask(u64 bits);

// Guard/round/sticky accompanying a 53-bit working significand.
struct Grs {
  bool guard = false;
  bool round = false;
  bool sticky = false;
  bool any() const { return guard || round || sticky; }
};

struct Round53Result {
  u64 sig = 0;       // rounded 53-bit significand (post carry renormalize)
  bool carry = false;  // increment overflowed 53 bits
  bool inexact = false;
};

// Round a 53-bit significand under the given mode. RN is ties-to-even.
Round53Result round53(u64 sig, Grs grs, Rounding mode, bool sign);

// Leading-zero count over a 55-bit vector; 55 for all-zero.
int lzc55(u64 v);

// 55-bit Kogge-Stone adder; bit 55 of the result is the carry out.
u64 kogge_stone_add55(u64 x, u64 y, bool carry_in);

// Sign/operation readjustment so the magnitude datapath always produces a
// positive result; the result sign is the sign of the larger magnitude.
struct SignPlan {
  bool effective_sub = false;
  bool sign1 = false;
  bool sign2 = false;
};
SignPlan sign_plan(bool op_is_sub, bool s1, bool s2);

// 55-bit mantissa: [54] hidden bit, [53:2] fraction, [1:0] zero guards.
u64 wide_mantissa(const Decoded& d);

// 54x54 multiply decomposed into 18-bit blocks (9 partial products). Equals a
// plain wide multiplication; `block_bits` is parameterized for the tests.
u128 block_mul_3(u64 a, u64 b, int block_bits);
inline u128 block_mul54(u64 a, u64 b) { return block_mul_3(a, b, 18); }

// Reciprocal seed table: rom[a] = floor(2^16 / (1 + a*2^-7 + 2^-8)^2).
std::array<u16, 128> rom_generate();
const std::array<u16, 128>& rom_table();

// Inverts bits x8..x14 of a 15-bit window 1.x1..x14.
u32 operand_modifier(u32 top15);

// Two Newton-Raphson iterations from the table seed. `sig` is a 53-bit
// normalized significand (bit 52 set) for m in [1,2); returns a 2.60
// fixed-point approximation of 1/m with relative error <= 2^-52.
u64 recip_fixed(u64 sig);

// Arithmetic. Exceptions are reported through flags, never thrown.
Result add_sub(u64 a, u64 b, bool is_sub, Rounding mode, bool flush);
Result mul(u64 a, u64 b, Rounding mode, bool flush);
Result recip(u64 a, Rounding mode, bool flush = false);
Result div(u64 a, u64 b, Rounding mode, bool flush);
Result fmac(u64 a, u64 b, u64 c, bool is_sub, Rounding mode, bool flush);

// CMP.cond condition codes (Release 6). Bit 3 marks the signaling variants.
enum class CompareCond : std::uint8_t {
  AF = 0, UN = 1, EQ = 2, UEQ = 3, LT = 4, ULT = 5, LE = 6, ULE = 7,
  SAF = 8, SUN = 9, SEQ = 10, SUEQ = 11, SLT = 12, SULT = 13, SLE = 14, SULE = 15,
};

// Returns all-ones on true, all-zeros on false.
Result compare(CompareCond cond, u64 a, u64 b);

enum class MinMaxKind : std::uint8_t { Min, Max, MinA, MaxA };
Result minmax(MinMaxKind kind, u64 a, u64 b);

enum class MoveKind : std::uint8_t { Abs, Neg, Mov };
// Non-arithmetic (ABS2008): NaNs pass through bit-modified, no flags.
u64 move_family(MoveKind kind, u64 a);

}  // namespace fpe::fp
