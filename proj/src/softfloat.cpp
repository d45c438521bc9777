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

#include "softfloat.hpp"

#include <cassert>

namespace fpe::fp {

namespace {

inline u64 clamped_shr(u64 v, int n) {
  return n >= 64 ? 0 : v >> n;
}

// Right shift collecting every dropped bit into a sticky flag.
inline u64 shr_sticky(u64 v, int n, bool& sticky) {
  if (n <= 0) return v;
  if (n >= 64) {
    sticky |= v != 0;
    return 0;
  }
  sticky |= (v & ((u64{1} << n) - 1)) != 0;
  return v >> n;
}

inline u128 shr_sticky128(u128 v, int n, bool& sticky) {
  if (n <= 0) return v;
  if (n >= 128) {
    sticky |= v != 0;
    return 0;
  }
  sticky |= (v & ((u128{1} << n) - 1)) != 0;
  return v >> n;
}

inline int clz128(u128 v) {
  u64 hi = static_cast<u64>(v >> 64);
  if (hi != 0) return __builtin_clzll(hi);
  u64 lo = static_cast<u64>(v);
  if (lo != 0) return 64 + __builtin_clzll(lo);
  return 128;
}

// Normalized finite-nonzero operand: value = sig * 2^(exp - 52), sig in
// [2^52, 2^53). Subnormal inputs are renormalized into the extended range.
struct Unpacked {
  bool sign = false;
  int exp = 0;
  u64 sig = 0;
};

Unpacked unpack_finite(const Decoded& d) {
  Unpacked u;
  u.sign = d.sign;
  if (d.exp_field == 0) {
    int lz = __builtin_clzll(d.fraction) - (64 - kPrecision);
    u.sig = d.fraction << lz;
    u.exp = kEmin - lz;
  } else {
    u.sig = kHiddenBit | d.fraction;
    u.exp = d.exp_field - kBias;
  }
  return u;
}

inline u64 signed_zero(bool sign) { return sign ? kSignMask : 0; }
inline u64 signed_inf(bool sign) { return signed_zero(sign) | kPosInf; }

// Overflow default result per Table A.11, by rounding mode and sign.
u64 overflow_value(bool sign, Rounding mode) {
  switch (mode) {
    case Rounding::Nearest: return signed_inf(sign);
    case Rounding::TowardZero: return signed_zero(sign) | kMaxFinite;
    case Rounding::Upward: return sign ? (kSignMask | kMaxFinite) : kPosInf;
    case Rounding::Downward: return sign ? (kSignMask | kPosInf) : kMaxFinite;
  }
  return signed_inf(sign);
}

// Rounds and packs a normalized intermediate (sig in [2^52,2^53), value =
// sig * 2^(exp-52)) into a double, producing overflow/underflow/inexact
// flags. Tininess is detected after rounding: the intermediate is rounded
// once as if the exponent were unbounded to decide tininess, then rounded
// for real on the (possibly denormalized) destination grid.
Result pack_round(bool sign, int exp, u64 sig, Grs grs, Rounding mode, bool flush) {
  Result r;
  assert(sig >> kFracBits == 1);

  Round53Result full = round53(sig, grs, mode, sign);
  int exp_after = exp + (full.carry ? 1 : 0);
  bool tiny = exp_after < kEmin;

  if (exp_after > kEmax) {
    r.bits = overflow_value(sign, mode);
    r.flags.overflow = true;
    r.flags.inexact = true;  // overflowed results are inexact
    return r;
  }

  if (exp >= kEmin) {
    r.bits = pack(sign, exp_after - kEmin + 1, full.sig & kFracMask);
    r.flags.inexact = full.inexact;
    return r;
  }

  // Denormalize onto the subnormal grid and round there.
  int shift = kEmin - exp;
  bool sticky = grs.sticky;
  u64 wide = (sig << 2) | (u64{grs.guard} << 1) | u64{grs.round};  // 55 bits
  wide = shr_sticky(wide, shift, sticky);
  u64 dsig = wide >> 2;
  Grs dgrs{(wide & 2) != 0, (wide & 1) != 0, sticky};
  Round53Result den = round53(dsig, dgrs, mode, sign);
  r.flags.inexact = den.inexact;
  if (den.sig >> kFracBits) {
    // Rounded all the way up to the smallest normal.
    r.bits = pack(sign, 1, 0);
  } else {
    r.bits = pack(sign, 0, den.sig);
  }
  r.flags.underflow = tiny && r.flags.inexact;

  if (flush && (r.bits & kAbsMask) != 0 && ((r.bits >> kFracBits) & kExpFieldMax) == 0) {
    r.bits = signed_zero(sign);
    r.flags.underflow = true;
    r.flags.inexact = true;
  }
  return r;
}

// Flush an already-packed value if it is subnormal (FS=1 semantics).
Result flush_result(Result r) {
  u64 abs = r.bits & kAbsMask;
  if (abs != 0 && (abs >> kFracBits) == 0) {
    r.bits = signed_zero((r.bits & kSignMask) != 0);
    r.flags.underflow = true;
    r.flags.inexact = true;
  }
  return r;
}

// Round-and-pack an arbitrary-width magnitude: value = sum * 2^scale0 with
// sticky bits already dropped below bit 0. sum must be nonzero.
Result pack_wide(bool sign, int scale0, u128 sum, bool sticky, Rounding mode,
                 bool flush) {
  int msb = 127 - clz128(sum);
  int e = scale0 + msb;  // unbiased exponent of the leading bit
  // Bring the leading bit to position 54: sig = [54:2], G = [1], R = [0].
  int shift = msb - 54;
  u128 w = shift > 0 ? shr_sticky128(sum, shift, sticky) : sum << -shift;
  u64 lo = static_cast<u64>(w);
  u64 sig = lo >> 2;
  Grs grs{(lo & 2) != 0, (lo & 1) != 0, sticky};
  return pack_round(sign, e, sig, grs, mode, flush);
}

// NaN handling shared by the arithmetic ops: any SNaN raises V and yields the
// default quiet NaN; otherwise the first QNaN operand propagates as-is.
bool nan_result(Result& r, const Decoded* ops[], const u64* bits, int n) {
  bool any_nan = false;
  for (int i = 0; i < n; ++i) any_nan |= ops[i]->is_nan();
  if (!any_nan) return false;
  for (int i = 0; i < n; ++i) {
    if (ops[i]->cls == FpClass::SignalingNan) {
      r.bits = kDefaultQnan;
      r.flags.invalid = true;
      return true;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (ops[i]->cls == FpClass::QuietNan) {
      r.bits = bits[i];
      return true;
    }
  }
  return true;
}

Result invalid_qnan() {
  Result r;
  r.bits = kDefaultQnan;
  r.flags.invalid = true;
  return r;
}

}  // namespace

Decoded decode(u64 bits) {
  Decoded d;
  d.sign = (bits & kSignMask) != 0;
  d.exp_field = static_cast<int>((bits >> kFracBits) & kExpFieldMax);
  d.fraction = bits & kFracMask;
  if (d.exp_field == static_cast<int>(kExpFieldMax)) {
    if (d.fraction == 0) {
      d.cls = d.sign ? FpClass::NegInfinity : FpClass::PosInfinity;
    } else {
      // NAN2008 polarity: quiet bit is the fraction MSB.
      d.cls = (d.fraction & kQuietBit) ? FpClass::QuietNan : FpClass::SignalingNan;
    }
  } else if (d.exp_field == 0) {
    if (d.fraction == 0) {
      d.cls = d.sign ? FpClass::NegZero : FpClass::PosZero;
    } else {
      d.cls = d.sign ? FpClass::NegSubnormal : FpClass::PosSubnormal;
    }
  } else {
    d.cls = d.sign ? FpClass::NegNormal : FpClass::PosNormal;
  }
  return d;
}

u64 pack(bool sign, int exp_field, u64 fraction) {
  return (sign ? kSignMask : 0) | (static_cast<u64>(exp_field) << kFracBits) |
         (fraction & kFracMask);
}

u16 class_mask(u64 bits) {
  return static_cast<u16>(1u << static_cast<unsigned>(decode(bits).cls));
}

Round53Result round53(u64 sig, Grs grs, Rounding mode, bool sign) {
  Round53Result r;
  r.inexact = grs.any();
  bool inc = false;
  switch (mode) {
    case Rounding::Nearest:
      if (grs.guard && (grs.round || grs.sticky)) {
        inc = true;
      } else if (grs.guard) {
        inc = (sig & 1) != 0;  // tie: force even LSB
      }
      break;
    case Rounding::TowardZero:
      break;
    case Rounding::Upward:
      inc = r.inexact && !sign;
      break;
    case Rounding::Downward:
      inc = r.inexact && sign;
      break;
  }
  r.sig = sig + (inc ? 1 : 0);
  if (r.sig >> kPrecision) {
    r.carry = true;
    r.sig >>= 1;
  }
  return r;
}

int lzc55(u64 v) {
  v &= (u64{1} << 55) - 1;
  if (v == 0) return 55;
  return __builtin_clzll(v) - (64 - 55);
}

u64 kogge_stone_add55(u64 x, u64 y, bool carry_in) {
  constexpr u64 mask = (u64{1} << 55) - 1;
  x &= mask;
  y &= mask;
  u64 g = x & y;          // generate
  u64 p = x ^ y;          // propagate
  // Fold the carry-in into position 0 as an extra generate.
  if (carry_in) {
    g |= p & 1;
    p &= ~u64{1};
  }
  u64 gg = g;
  u64 pp = p;
  for (int shift = 1; shift < 64; shift <<= 1) {
    gg |= pp & (gg << shift);
    pp &= pp << shift;
  }
  u64 carries = (gg << 1) | (carry_in ? 1 : 0);
  u64 sum = (x ^ y ^ carries) & mask;
  u64 carry_out = (gg >> 54) & 1;
  return sum | (carry_out << 55);
}

SignPlan sign_plan(bool op_is_sub, bool s1, bool s2) {
  // Fig 4.19: fold the operation into the second sign, then subtract iff the
  // adjusted signs differ; the adjusted signs keep the larger operand's sign
  // in charge of the result.
  SignPlan p;
  bool t2 = s2 ^ op_is_sub;
  p.effective_sub = s1 != t2;
  p.sign1 = s1;
  p.sign2 = p.effective_sub ? !s1 : s1;
  return p;
}

u64 wide_mantissa(const Decoded& d) {
  u64 hidden = d.exp_field != 0 ? 1 : 0;
  return (hidden << 54) | (d.fraction << 2);
}

u128 block_mul_3(u64 a, u64 b, int block_bits) {
  u64 bmask = (u64{1} << block_bits) - 1;
  u128 acc = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      u64 pa = (a >> (i * block_bits)) & bmask;
      u64 pb = (b >> (j * block_bits)) & bmask;
      acc += static_cast<u128>(pa * pb) << ((i + j) * block_bits);
    }
  }
  return acc;
}

std::array<u16, 128> rom_generate() {
  std::array<u16, 128> rom{};
  for (u32 a = 0; a < 128; ++a) {
    // floor(2^16 / (1 + a*2^-7 + 2^-8)^2) with the denominator written over
    // 2^8: (256 + 2a + 1) / 256.
    u64 den = 256 + 2 * static_cast<u64>(a) + 1;
    rom[a] = static_cast<u16>((u64{1} << 32) / (den * den));
  }
  return rom;
}

const std::array<u16, 128>& rom_table() {
  static const std::array<u16, 128> rom = rom_generate();
  return rom;
}

u32 operand_modifier(u32 top15) {
  return (top15 & 0x7F80u) | (~top15 & 0x7Fu);
}

u64 recip_fixed(u64 sig) {
  assert(sig >> kFracBits == 1);
  u32 x1_7 = static_cast<u32>((sig >> 45) & 0x7F);
  u32 top15 = static_cast<u32>((sig >> 38) & 0x7FFF);
  u32 om = operand_modifier(top15);        // 1.14 fixed
  u32 seed = rom_table()[x1_7];            // 0.16 fixed
  u64 prod = static_cast<u64>(seed) * om;  // 0.30 fixed, < 2^30 for m >= 1
  // Truncate to 16 bits (1.28 alignment) and extend with zeros.
  u64 x = (prod >> 14) << 44;              // 2.60 fixed
  u128 big = static_cast<u128>(sig) << 8;  // m in 2.60 fixed
  for (int it = 0; it < 2; ++it) {
    u64 t = static_cast<u64>((big * x) >> 60);
    u64 two_minus = (u64{2} << 60) - t;
    x = static_cast<u64>((static_cast<u128>(x) * two_minus) >> 60);
  }
  return x;
}

Result add_sub(u64 a, u64 b, bool is_sub, Rounding mode, bool flush) {
  Decoded da = decode(a);
  Decoded db = decode(b);
  Result r;
  const Decoded* ops[] = {&da, &db};
  const u64 bits[] = {a, b};
  if (nan_result(r, ops, bits, 2)) return r;

  SignPlan plan = sign_plan(is_sub, da.sign, db.sign);
  bool sb_adj = db.sign ^ is_sub;  // operand 2 sign after folding the op

  // Initial conditions: infinities and zeros resolve without the datapath.
  if (da.is_inf() || db.is_inf()) {
    if (da.is_inf() && db.is_inf()) {
      if (da.sign == sb_adj) {
        r.bits = signed_inf(da.sign);
      } else {
        return invalid_qnan();  // magnitude subtraction of infinities
      }
    } else if (da.is_inf()) {
      r.bits = signed_inf(da.sign);
    } else {
      r.bits = signed_inf(sb_adj);
    }
    return r;
  }
  if (da.is_zero() && db.is_zero()) {
    if (da.sign == sb_adj) {
      r.bits = signed_zero(da.sign);
    } else {
      r.bits = signed_zero(mode == Rounding::Downward);
    }
    return r;
  }
  if (da.is_zero()) {
    r.bits = (b & kAbsMask) | signed_zero(sb_adj);
    return flush ? flush_result(r) : r;
  }
  if (db.is_zero()) {
    r.bits = a;
    return flush ? flush_result(r) : r;
  }

  // Identify the larger magnitude; its sign is the result sign.
  u64 mag_a = a & kAbsMask;
  u64 mag_b = b & kAbsMask;
  bool swap = mag_b > mag_a;
  const Decoded& big = swap ? db : da;
  const Decoded& small = swap ? da : db;
  bool rsign = swap ? sb_adj : da.sign;

  // Effective exponents; a subnormal contributes emin, which shows up as an
  // exponent-difference adjustment relative to the raw fields.
  int eb = big.exp_field == 0 ? 1 : big.exp_field;
  int es = small.exp_field == 0 ? 1 : small.exp_field;
  int diff = eb - es;

  u64 mb = wide_mantissa(big);
  u64 ms = wide_mantissa(small);
  bool sticky = false;
  ms = shr_sticky(ms, diff, sticky);

  u64 sum;
  if (plan.effective_sub) {
    constexpr u64 mask55 = (u64{1} << 55) - 1;
    // One's complement plus carry-in; sticky bits below the window borrow
    // one unit from the subtrahend.
    sum = kogge_stone_add55(mb, ~ms & mask55, !sticky) & mask55;
  } else {
    sum = kogge_stone_add55(mb, ms, false);
  }

  int exp = eb - kBias;  // unbiased exponent of the bit-54 position
  if (sum >> 55) {
    // Magnitude overflow: renormalize one position right.
    sum &= (u64{1} << 55) - 1;
    bool drop = (sum & 1) != 0;
    sum = (sum >> 1) | (u64{1} << 54);
    sticky |= drop;
    exp += 1;
  }

  if (sum == 0) {
    if (sticky) {
      // Cancellation can only be total when nothing was shifted out.
      assert(false);
    }
    r.bits = signed_zero(mode == Rounding::Downward);
    return r;
  }

  int lz = lzc55(sum);
  // Left-normalize, but never below the subnormal exponent floor.
  int max_shift = exp - kEmin;
  int shift = lz < max_shift ? lz : max_shift;
  if (shift > 0) {
    sum <<= shift;
    exp -= shift;
  }

  if ((sum >> 54) == 0) {
    // Subnormal result: exact by construction of the 55-bit window.
    assert(!sticky);
    u64 frac = (sum >> 2) & kFracMask;
    assert((sum & 3) == 0);
    r.bits = pack(rsign, 0, frac);
    return flush ? flush_result(r) : r;
  }

  u64 sig = sum >> 2;
  Grs grs{(sum & 2) != 0, (sum & 1) != 0, sticky};
  return pack_round(rsign, exp, sig, grs, mode, flush);
}

Result mul(u64 a, u64 b, Rounding mode, bool flush) {
  Decoded da = decode(a);
  Decoded db = decode(b);
  Result r;
  const Decoded* ops[] = {&da, &db};
  const u64 bits[] = {a, b};
  if (nan_result(r, ops, bits, 2)) return r;

  bool rsign = da.sign ^ db.sign;
  if (da.is_inf() || db.is_inf()) {
    if (da.is_zero() || db.is_zero()) return invalid_qnan();  // 0 x inf
    r.bits = signed_inf(rsign);
    return r;
  }
  if (da.is_zero() || db.is_zero()) {
    r.bits = signed_zero(rsign);
    return r;
  }

  Unpacked ua = unpack_finite(da);
  Unpacked ub = unpack_finite(db);
  // The 106-bit significand product comes from the 18-bit block multiplier
  // and equals a plain wide multiplication.
  u128 prod = block_mul54(ua.sig, ub.sig);  // in [2^104, 2^106)
  return pack_wide(rsign, ua.exp + ub.exp - 104, prod, false, mode, flush);
}

Result recip(u64 a, Rounding mode, bool flush) {
  Decoded da = decode(a);
  Result r;
  const Decoded* ops[] = {&da};
  const u64 bits[] = {a};
  if (nan_result(r, ops, bits, 1)) return r;

  if (da.is_inf()) {
    r.bits = signed_zero(da.sign);
    return r;
  }
  if (da.is_zero()) {
    r.bits = signed_inf(da.sign);
    r.flags.div_zero = true;
    return r;
  }

  Unpacked u = unpack_finite(da);
  if (u.sig == kHiddenBit) {
    // Power of two: exact reciprocal, one-position normalize (1/m = 1).
    return pack_round(u.sign, -u.exp, kHiddenBit, Grs{}, mode, flush);
  }
  u64 x = recip_fixed(u.sig);  // ~1/m in 2.60, m in (1,2)
  // 1/m is never representable for m != 1, so the result is always inexact.
  return pack_wide(u.sign, -u.exp - 60, x, /*sticky=*/true, mode, flush);
}

Result div(u64 a, u64 b, Rounding mode, bool flush) {
  Decoded da = decode(a);
  Decoded db = decode(b);
  Result r;
  const Decoded* ops[] = {&da, &db};
  const u64 bits[] = {a, b};
  if (nan_result(r, ops, bits, 2)) return r;

  bool rsign = da.sign ^ db.sign;
  if (da.is_inf()) {
    if (db.is_inf()) return invalid_qnan();  // inf/inf
    r.bits = signed_inf(rsign);
    return r;
  }
  if (db.is_inf()) {
    r.bits = signed_zero(rsign);
    return r;
  }
  if (db.is_zero()) {
    if (da.is_zero()) return invalid_qnan();  // 0/0
    r.bits = signed_inf(rsign);
    r.flags.div_zero = true;
    return r;
  }
  if (da.is_zero()) {
    r.bits = signed_zero(rsign);
    return r;
  }

  Unpacked ua = unpack_finite(da);
  Unpacked ub = unpack_finite(db);
  int exp = ua.exp - ub.exp;
  if (ub.sig == kHiddenBit) {
    // Power-of-two divisor: exact exponent adjustment.
    return pack_round(rsign, exp, ua.sig, Grs{}, mode, flush);
  }
  // Reciprocal mantissa then multiply, composed over an unbounded
  // intermediate exponent so extreme inputs stay within the error bound.
  u64 x = recip_fixed(ub.sig);             // 2.60
  u128 q = static_cast<u128>(ua.sig) * x;  // a/b mantissa ratio, scale 2^-112
  return pack_wide(rsign, exp - 112, q, false, mode, flush);
}

Result fmac(u64 a, u64 b, u64 c, bool is_sub, Rounding mode, bool flush) {
  Decoded da = decode(a);
  Decoded db = decode(b);
  Decoded dc = decode(c);
  Result r;
  const Decoded* ops[] = {&da, &db, &dc};
  const u64 bits[] = {a, b, c};
  if (nan_result(r, ops, bits, 3)) return r;

  bool psign = da.sign ^ db.sign;
  bool csign = dc.sign ^ is_sub;

  // Invalid products first, then infinity composition.
  if (da.is_inf() || db.is_inf()) {
    if (da.is_zero() || db.is_zero()) return invalid_qnan();  // 0 x inf
    if (dc.is_inf() && csign != psign) return invalid_qnan();  // inf - inf
    r.bits = signed_inf(psign);
    return r;
  }
  if (dc.is_inf()) {
    r.bits = signed_inf(csign);
    return r;
  }
  if (da.is_zero() || db.is_zero()) {
    if (dc.is_zero()) {
      r.bits = (psign == csign) ? signed_zero(psign)
                                : signed_zero(mode == Rounding::Downward);
      return r;
    }
    r.bits = (c & kAbsMask) | signed_zero(csign);
    return flush ? flush_result(r) : r;
  }

  Unpacked ua = unpack_finite(da);
  Unpacked ub = unpack_finite(db);
  u128 prod = block_mul54(ua.sig, ub.sig);  // [2^104, 2^106)
  int pscale = ua.exp + ub.exp - 104;       // weight of prod bit 0

  if (dc.is_zero()) {
    return pack_wide(psign, pscale, prod, false, mode, flush);
  }

  Unpacked uc = unpack_finite(dc);
  bool sub = psign != csign;
  int pmsb = (prod >> 105) ? 105 : 104;
  int wp = pscale + pmsb;  // top-bit weight of the product
  int wc = uc.exp;         // top-bit weight of the addend

  // Place the higher-weighted side with its top bit at position 120 of a
  // 128-bit window; align the other side against it, dropped bits go to
  // sticky. With 120 bits of window, sticky loss only occurs when the gap
  // exceeds the other side's width, so a subtraction can never cancel past
  // the guard bits once anything was shifted out.
  constexpr int kTop = 120;
  u128 big, small;
  bool big_sign;
  bool small_is_c;
  int scale0;
  bool sticky = false;
  if (wp >= wc) {
    int up = kTop - pmsb;
    big = prod << up;
    scale0 = pscale - up;
    big_sign = psign;
    small_is_c = true;
    int pos = (uc.exp - 52) - scale0;  // target position of addend bit 0
    small = pos >= 0 ? static_cast<u128>(uc.sig) << pos
                     : shr_sticky128(static_cast<u128>(uc.sig), -pos, sticky);
  } else {
    int up = kTop - 52;
    big = static_cast<u128>(uc.sig) << up;
    scale0 = (uc.exp - 52) - up;
    big_sign = csign;
    small_is_c = false;
    int pos = pscale - scale0;  // target position of product bit 0
    small = pos >= 0 ? prod << pos : shr_sticky128(prod, -pos, sticky);
  }
  (void)small_is_c;

  u128 sum;
  bool rsign;
  if (!sub) {
    sum = big + small;
    rsign = big_sign;
  } else if (big > small) {
    sum = big - small - (sticky ? 1 : 0);
    rsign = big_sign;
  } else if (small > big) {
    // Equal top weights with the nominally-smaller side larger as an
    // integer; nothing was shifted out in that case.
    assert(!sticky);
    sum = small - big;
    rsign = !big_sign;
  } else {
    assert(!sticky);
    r.bits = signed_zero(mode == Rounding::Downward);
    return r;
  }
  return pack_wide(rsign, scale0, sum, sticky, mode, flush);
}

Result compare(CompareCond cond, u64 a, u64 b) {
  Decoded da = decode(a);
  Decoded db = decode(b);
  Result r;
  unsigned c = static_cast<unsigned>(cond);
  bool signaling = (c & 8) != 0;
  bool unordered = da.is_nan() || db.is_nan();
  bool any_snan =
      da.cls == FpClass::SignalingNan || db.cls == FpClass::SignalingNan;
  if (any_snan || (signaling && unordered)) r.flags.invalid = true;

  bool less = false, equal = false;
  if (!unordered) {
    if (da.is_zero() && db.is_zero()) {
      equal = true;
    } else {
      // Order signed-magnitude patterns as integers.
      auto key = [](u64 v) -> std::int64_t {
        std::int64_t s = static_cast<std::int64_t>(v & kAbsMask);
        return (v & kSignMask) ? -s : s;
      };
      std::int64_t ka = key(a), kb = key(b);
      less = ka < kb;
      equal = ka == kb;
    }
  }
  bool un = unordered;
  bool truth = false;
  switch (c & 7) {
    case 0: truth = false; break;                 // AF
    case 1: truth = un; break;                    // UN
    case 2: truth = equal; break;                 // EQ
    case 3: truth = un || equal; break;           // UEQ
    case 4: truth = less; break;                  // LT
    case 5: truth = un || less; break;            // ULT
    case 6: truth = less || equal; break;         // LE
    case 7: truth = un || less || equal; break;   // ULE
  }
  r.bits = truth ? ~u64{0} : 0;
  return r;
}

Result minmax(MinMaxKind kind, u64 a, u64 b) {
  Decoded da = decode(a);
  Decoded db = decode(b);
  Result r;
  if (da.cls == FpClass::SignalingNan || db.cls == FpClass::SignalingNan) {
    r.bits = kDefaultQnan;
    r.flags.invalid = true;
    return r;
  }
  if (da.is_nan() && db.is_nan()) {
    r.bits = a;
    return r;
  }
  if (da.is_nan()) {
    r.bits = b;
    return r;
  }
  if (db.is_nan()) {
    r.bits = a;
    return r;
  }

  auto key = [](u64 v) -> std::int64_t {
    std::int64_t s = static_cast<std::int64_t>(v & kAbsMask);
    return (v & kSignMask) ? -s : s;
  };
  switch (kind) {
    case MinMaxKind::Min: {
      // -0 orders below +0.
      std::int64_t ka = key(a), kb = key(b);
      if (ka == kb) {
        r.bits = (a & kSignMask) ? a : b;  // prefer the negative zero
        if (!(a & kSignMask) && !(b & kSignMask)) r.bits = b;
      } else {
        r.bits = ka < kb ? a : b;
      }
      break;
    }
    case MinMaxKind::Max: {
      std::int64_t ka = key(a), kb = key(b);
      if (ka == kb) {
        r.bits = (a & kSignMask) ? b : a;
        if ((a & kSignMask) && (b & kSignMask)) r.bits = b;
      } else {
        r.bits = ka > kb ? a : b;
      }
      break;
    }
    case MinMaxKind::MinA: {
      u64 ma = a & kAbsMask, mb = b & kAbsMask;
      r.bits = ma == mb ? b : (ma < mb ? a : b);
      break;
    }
    case MinMaxKind::MaxA: {
      u64 ma = a & kAbsMask, mb = b & kAbsMask;
      r.bits = ma == mb ? b : (ma > mb ? a : b);
      break;
    }
  }
  return r;
}

u64 move_family(MoveKind kind, u64 a) {
  switch (kind) {
    case MoveKind::Abs: return a & kAbsMask;
    case MoveKind::Neg: return a ^ kSignMask;
    case MoveKind::Mov: return a;
  }
  return a;
}

}  // namespace fpe::fp
