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

// Correctly rounded reference operations evaluated on the host FPU, wrapped
// with the engine's NaN-propagation policy and after-rounding underflow
// detection. This path is independent of the soft-float datapaths and exists
// so they can be checked against it.

#pragma once

#include "softfloat.hpp"

namespace fpe::ref {

fp::Result add(fp::u64 a, fp::u64 b, fp::Rounding mode, bool flush);
fp::Result sub(fp::u64 a, fp::u64 b, fp::Rounding mode, bool flush);
fp::Result mul(fp::u64 a, fp::u64 b, fp::Rounding mode, bool flush);
fp::Result div(fp::u64 a, fp::u64 b, fp::Rounding mode, bool flush);
fp::Result fmadd(fp::u64 a, fp::u64 b, fp::u64 c, fp::Rounding mode, bool flush);
fp::Result fmsub(fp::u64 a, fp::u64 b, fp::u64 c, fp::Rounding mode, bool flush);
fp::Result recip(fp::u64 a, fp::Rounding mode);

// Unsigned distance in representable steps between two same-sign finite
// patterns (saturates at a large value for sign/class mismatches).
fp::u64 ulp_distance(fp::u64 a, fp::u64 b);

}  // namespace fpe::ref
