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

#pragma once

#include <cstdint>
#include <string>

#include "softfloat.hpp"

namespace fpe::selftest {

// Seeded operand generator mixing uniform patterns with boosted special
// classes (zeros, subnormals, huge exponents, infinities, NaNs).
class OperandGen {
 public:
  explicit OperandGen(std::uint64_t seed);
  fp::u64 next();
  fp::u64 next_finite();
  fp::u64 next_finite_nonzero();

 private:
  std::uint64_t s_[4];
  std::uint64_t raw();
};

struct SelfTestResult {
  bool ok = false;
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t div_max_ulp = 0;
  std::uint64_t recip_max_ulp = 0;
  double recip_max_rel_err_log2 = 0.0;  // log2 of worst unrounded rel error
  std::string summary;
};

// Runs the soft-float datapaths against the host-FPU reference: add/sub,
// mul, fused mac compared bit-exactly with flags; div/recip checked for
// ulp distance and the unrounded reciprocal error bound.
SelfTestResult run_selftest(std::uint64_t seed, std::uint64_t count);

}  // namespace fpe::selftest
