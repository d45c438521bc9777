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

#include "reference_fpu.hpp"

#include <cfenv>
#include <cmath>
#include <cstring>

namespace fpe::ref {

using fp::Decoded;
using fp::Flags;
using fp::FpClass;
using fp::Result;
using fp::Rounding;
using fp::u64;

namespace {

double to_d(u64 b) {
  double d;
  std::memcpy(&d, &b, 8);
  return d;
}

u64 to_b(double d) {
  u64 b;
  std::memcpy(&b, &d, 8);
  return b;
}

int host_mode(Rounding m) {
  switch (m) {
    case Rounding::Nearest: return FE_TONEAREST;
    case Rounding::TowardZero: return FE_TOWARDZERO;
    case Rounding::Upward: return FE_UPWARD;
    case Rounding::Downward: return FE_DOWNWARD;
  }
  return FE_TONEAREST;
}

// NaN policy: SNaN operands raise V and produce the default quiet NaN; the
// first quiet-NaN operand otherwise propagates unchanged.
bool policy_nan(Result& r, const u64* ops, int n) {
  bool any = false;
  for (int i = 0; i < n; ++i) any |= fp::decode(ops[i]).is_nan();
  if (!any) return false;
  for (int i = 0; i < n; ++i) {
    if (fp::decode(ops[i]).cls == FpClass::SignalingNan) {
      r.bits = fp::kDefaultQnan;
      r.flags.invalid = true;
      return true;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (fp::decode(ops[i]).cls == FpClass::QuietNan) {
      r.bits = ops[i];
      return true;
    }
  }
  return true;
}

bool is_subnormal_bits(u64 b) {
  return (b & fp::kAbsMask) != 0 && ((b >> 52) & 0x7FF) == 0;
}

// After-rounding tininess for a result near the subnormal boundary: redo the
// operation with exactly scaled operands so the unbounded-exponent rounding
// is observable, then compare against the scaled smallest normal.
template <typename Op>
bool tiny_after_rounding(u64 result_bits, Op&& scaled_op) {
  u64 mag = result_bits & fp::kAbsMask;
  if (mag > 0x0010000000000000ULL) return false;  // above min normal
  if (mag < 0x0010000000000000ULL) return true;   // subnormal or zero, inexact
  double w = scaled_op();
  return std::fabs(w) < 0x1p-422;  // 2^-1022 * 2^600
}

struct HostEval {
  u64 bits;
  bool inexact;
  bool overflow;
  bool raw_underflow;
};

template <typename F>
HostEval eval(Rounding mode, F&& f) {
  int save = std::fegetround();
  std::fesetround(host_mode(mode));
  std::feclearexcept(FE_ALL_EXCEPT);
  double d = f();
  int ex = std::fetestexcept(FE_ALL_EXCEPT);
  std::fesetround(save);
  return HostEval{to_b(d), (ex & FE_INEXACT) != 0, (ex & FE_OVERFLOW) != 0,
                  (ex & FE_UNDERFLOW) != 0};
}

Result finish(const HostEval& h, Rounding mode, bool flush, bool tiny) {
  Result r;
  r.bits = h.bits;
  r.flags.inexact = h.inexact;
  r.flags.overflow = h.overflow;
  r.flags.underflow = tiny && h.inexact;
  if (flush && is_subnormal_bits(r.bits)) {
    r.bits = (r.bits & fp::kSignMask);
    r.flags.underflow = true;
    r.flags.inexact = true;
  }
  (void)mode;
  return r;
}

Result ref_add_sub(u64 a, u64 b, bool negate_b, Rounding mode, bool flush) {
  Result r;
  const u64 ops[] = {a, b};
  if (policy_nan(r, ops, 2)) return r;
  Decoded da = fp::decode(a);
  Decoded db = fp::decode(b);
  bool sb = db.sign ^ negate_b;
  if (da.is_inf() && db.is_inf() && da.sign != sb) {
    r.bits = fp::kDefaultQnan;
    r.flags.invalid = true;
    return r;
  }
  volatile double x = to_d(a);
  volatile double y = negate_b ? -to_d(b) : to_d(b);
  HostEval h = eval(mode, [&] { return x + y; });
  // Add/sub never produces an inexact tiny result, so U stays clear.
  return finish(h, mode, flush, false);
}

}  // namespace

Result add(u64 a, u64 b, Rounding mode, bool flush) {
  return ref_add_sub(a, b, false, mode, flush);
}

Result sub(u64 a, u64 b, Rounding mode, bool flush) {
  return ref_add_sub(a, b, true, mode, flush);
}

Result mul(u64 a, u64 b, Rounding mode, bool flush) {
  Result r;
  const u64 ops[] = {a, b};
  if (policy_nan(r, ops, 2)) return r;
  Decoded da = fp::decode(a);
  Decoded db = fp::decode(b);
  if ((da.is_inf() && db.is_zero()) || (db.is_inf() && da.is_zero())) {
    r.bits = fp::kDefaultQnan;
    r.flags.invalid = true;
    return r;
  }
  volatile double x = to_d(a);
  volatile double y = to_d(b);
  HostEval h = eval(mode, [&] { return x * y; });
  bool tiny = h.raw_underflow &&
              tiny_after_rounding(h.bits, [&] {
                int save = std::fegetround();
                std::fesetround(host_mode(mode));
                volatile double xs = to_d(a) * 0x1p300;
                volatile double ys = to_d(b) * 0x1p300;
                double w = xs * ys;
                std::fesetround(save);
                return w;
              });
  return finish(h, mode, flush, tiny);
}

Result div(u64 a, u64 b, Rounding mode, bool flush) {
  Result r;
  const u64 ops[] = {a, b};
  if (policy_nan(r, ops, 2)) return r;
  Decoded da = fp::decode(a);
  Decoded db = fp::decode(b);
  if ((da.is_zero() && db.is_zero()) || (da.is_inf() && db.is_inf())) {
    r.bits = fp::kDefaultQnan;
    r.flags.invalid = true;
    return r;
  }
  if (db.is_zero() && !da.is_zero() && !da.is_inf() && !da.is_nan()) {
    r.bits = (u64{da.sign != db.sign} << 63) | fp::kPosInf;
    r.flags.div_zero = true;
    return r;
  }
  volatile double x = to_d(a);
  volatile double y = to_d(b);
  HostEval h = eval(mode, [&] { return x / y; });
  bool tiny = h.raw_underflow &&
              tiny_after_rounding(h.bits, [&] {
                int save = std::fegetround();
                std::fesetround(host_mode(mode));
                volatile double xs = to_d(a) * 0x1p600;
                double w = xs / to_d(b);
                std::fesetround(save);
                return w;
              });
  return finish(h, mode, flush, tiny);
}

Result recip(u64 a, Rounding mode) {
  return fpe::ref::div(0x3FF0000000000000ULL, a, mode, false);
}

namespace {

Result ref_fma(u64 a, u64 b, u64 c, bool negate_c, Rounding mode, bool flush) {
  Result r;
  const u64 ops[] = {a, b, c};
  if (policy_nan(r, ops, 3)) return r;
  Decoded da = fp::decode(a);
  Decoded db = fp::decode(b);
  Decoded dc = fp::decode(c);
  bool psign = da.sign != db.sign;
  bool csign = dc.sign ^ negate_c;
  if ((da.is_inf() && db.is_zero()) || (db.is_inf() && da.is_zero())) {
    r.bits = fp::kDefaultQnan;
    r.flags.invalid = true;
    return r;
  }
  if ((da.is_inf() || db.is_inf()) && dc.is_inf() && psign != csign) {
    r.bits = fp::kDefaultQnan;
    r.flags.invalid = true;
    return r;
  }
  volatile double x = to_d(a);
  volatile double y = to_d(b);
  volatile double z = negate_c ? -to_d(c) : to_d(c);
  HostEval h = eval(mode, [&] { return std::fma((double)x, (double)y, (double)z); });
  bool tiny = h.raw_underflow &&
              tiny_after_rounding(h.bits, [&] {
                // Near-tiny fused results imply |c| is far below overflow, so
                // scaling by 2^300 per factor stays exact and in range.
                int save = std::fegetround();
                std::fesetround(host_mode(mode));
                volatile double xs = to_d(a) * 0x1p300;
                volatile double ys = to_d(b) * 0x1p300;
                volatile double zs = (negate_c ? -to_d(c) : to_d(c)) * 0x1p300 * 0x1p300;
                double w = std::fma((double)xs, (double)ys, (double)zs);
                std::fesetround(save);
                return w;
              });
  return finish(h, mode, flush, tiny);
}

}  // namespace

Result fmadd(u64 a, u64 b, u64 c, Rounding mode, bool flush) {
  return ref_fma(a, b, c, false, mode, flush);
}

Result fmsub(u64 a, u64 b, u64 c, Rounding mode, bool flush) {
  return ref_fma(a, b, c, true, mode, flush);
}

u64 ulp_distance(u64 a, u64 b) {
  Decoded da = fp::decode(a);
  Decoded db = fp::decode(b);
  if (da.is_nan() || db.is_nan()) return a == b ? 0 : ~u64{0};
  // Map to a monotone integer line (two's-complement ordering of patterns).
  auto line = [](u64 v) -> std::int64_t {
    if (v & fp::kSignMask) return -static_cast<std::int64_t>(v & fp::kAbsMask);
    return static_cast<std::int64_t>(v);
  };
  std::int64_t la = line(a), lb = line(b);
  return static_cast<u64>(la > lb ? la - lb : lb - la);
}

}  // namespace fpe::ref
