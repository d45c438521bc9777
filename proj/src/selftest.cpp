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

#include "selftest.hpp"

#include <cmath>
#include <sstream>

#include "reference_fpu.hpp"

namespace fpe::selftest {

using fp::u64;

namespace {

// xoshiro256** — small, seedable, reproducible across platforms.
std::uint64_t splitmix(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

OperandGen::OperandGen(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix(x);
}

std::uint64_t OperandGen::raw() {
  std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

u64 OperandGen::next() {
  std::uint64_t pick = raw();
  std::uint64_t v = raw();
  switch (pick % 8) {
    case 0:
    case 1:
    case 2: return v;  // uniform pattern
    case 3:            // around the subnormal boundary
      return (v & (fp::kSignMask | fp::kFracMask)) |
             ((raw() % 4) << fp::kFracBits);
    case 4:  // near overflow
      return (v & (fp::kSignMask | fp::kFracMask)) |
             ((0x7FDull + raw() % 3) << fp::kFracBits);
    case 5:  // exponents near 1.0
      return (v & (fp::kSignMask | fp::kFracMask)) |
             ((0x3FBull + raw() % 9) << fp::kFracBits);
    case 6: {  // specials
      static const u64 sp[] = {
          0, fp::kPosInf, fp::kDefaultQnan, 0x7FF0000000000001ULL,
          0x000FFFFFFFFFFFFFULL, 0x0000000000000001ULL,
          0x0010000000000000ULL, fp::kMaxFinite, 0x3FF0000000000000ULL,
          0x4000000000000000ULL};
      return sp[raw() % (sizeof sp / sizeof sp[0])] |
             ((raw() & 1) ? fp::kSignMask : 0);
    }
    default: {  // sparse patterns
      u64 w = 0;
      for (int i = 0; i < 6; ++i) w |= u64{1} << (raw() % 64);
      return w;
    }
  }
}

u64 OperandGen::next_finite() {
  for (;;) {
    u64 v = next();
    auto d = fp::decode(v);
    if (!d.is_nan() && !d.is_inf()) return v;
  }
}

u64 OperandGen::next_finite_nonzero() {
  for (;;) {
    u64 v = next_finite();
    if (!fp::decode(v).is_zero()) return v;
  }
}

SelfTestResult run_selftest(std::uint64_t seed, std::uint64_t count) {
  SelfTestResult res;
  OperandGen gen(seed);
  std::uint64_t mism = 0;

  for (std::uint64_t i = 0; i < count; ++i) {
    u64 a = gen.next(), b = gen.next(), c = gen.next();
    auto mode = static_cast<fp::Rounding>(i % 4);
    bool flush = (i % 7) == 0;
    auto check = [&](const fp::Result& mine, const fp::Result& want) {
      ++res.checked;
      if (mine.bits != want.bits || !(mine.flags == want.flags)) ++mism;
    };
    check(fp::add_sub(a, b, false, mode, flush), ref::add(a, b, mode, flush));
    check(fp::add_sub(a, b, true, mode, flush), ref::sub(a, b, mode, flush));
    check(fp::mul(a, b, mode, flush), ref::mul(a, b, mode, flush));
    check(fp::fmac(a, b, c, false, mode, flush), ref::fmadd(a, b, c, mode, flush));
    check(fp::fmac(a, b, c, true, mode, flush), ref::fmsub(a, b, c, mode, flush));
  }

  double worst_rel = 0.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    u64 a = gen.next_finite_nonzero();
    u64 b = gen.next_finite_nonzero();
    auto mode = static_cast<fp::Rounding>(i % 4);
    fp::Result mine = fp::div(a, b, mode, false);
    fp::Result want = ref::div(a, b, mode, false);
    res.div_max_ulp = std::max(res.div_max_ulp, ref::ulp_distance(mine.bits, want.bits));

    fp::Result mr = fp::recip(b, mode);
    fp::Result wr = ref::recip(b, mode);
    res.recip_max_ulp = std::max(res.recip_max_ulp, ref::ulp_distance(mr.bits, wr.bits));

    // Unrounded reciprocal error, measured exactly in integers:
    // |x*m - 1| = |x*M - 2^112| * 2^-112 with x in 2.60 fixed point.
    u64 sig = fp::decode(b).exp_field == 0
                  ? 0  // subnormals are pre-normalized inside recip
                  : (fp::kHiddenBit | fp::decode(b).fraction);
    if (sig > fp::kHiddenBit) {
      u64 x = fp::recip_fixed(sig);
      fp::u128 prod = static_cast<fp::u128>(x) * sig;
      fp::u128 one = static_cast<fp::u128>(1) << 112;
      fp::u128 err = prod > one ? prod - one : one - prod;
      double rel = std::ldexp(static_cast<double>(err), -112);
      worst_rel = std::max(worst_rel, rel);
    }
  }
  res.recip_max_rel_err_log2 = worst_rel > 0 ? std::log2(worst_rel) : -1074.0;

  res.mismatches = mism;
  res.ok = mism == 0 && res.div_max_ulp <= 2 && res.recip_max_ulp <= 1 &&
           worst_rel <= std::ldexp(1.0, -52);

  std::ostringstream os;
  os << (res.ok ? "PASS" : "FAIL") << ": " << res.checked
     << " add/sub/mul/fmac cases, " << mism << " mismatches; div max ulp "
     << res.div_max_ulp << " (<=2); recip max ulp " << res.recip_max_ulp
     << " (<=1); recip unrounded rel err 2^" << res.recip_max_rel_err_log2
     << " (<=2^-52)";
  res.summary = os.str();
  return res;
}

}  // namespace fpe::selftest
