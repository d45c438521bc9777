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

#include "regfile.hpp"

#include <algorithm>

namespace fpe::rf {

void RegFile::begin_cycle() { written_this_cycle_.clear(); }

void RegFile::check_write(int port, int reg) {
  assert(port >= 0 && port < ports_.writes);
  assert(reg >= 0 && reg < kRegCount);
  // Two same-cycle writes never target one register; hardware forbids it
  // structurally, the model asserts it.
  assert(std::find(written_this_cycle_.begin(), written_this_cycle_.end(),
                   reg) == written_this_cycle_.end());
  written_this_cycle_.push_back(reg);
  (void)port;
}

void RegFile::check_read(int port, int reg) const {
  assert(port >= 0 && port < ports_.reads);
  assert(reg >= 0 && reg < kRegCount);
  (void)port;
  (void)reg;
}

std::unique_ptr<RegFile> make_regfile(Model model, PortConfig ports) {
  switch (model) {
    case Model::Reference: return std::make_unique<ReferenceFile>(ports);
    case Model::Xor: return std::make_unique<XorFile>(ports);
    case Model::Lvt: return std::make_unique<LvtFile>(ports);
  }
  return nullptr;
}

void ReferenceFile::write(int port, int reg, fp::u64 value) {
  check_write(port, reg);
  regs_[static_cast<std::size_t>(reg)] = value;
}

fp::u64 ReferenceFile::read(int port, int reg) const {
  check_read(port, reg);
  return regs_[static_cast<std::size_t>(reg)];
}

LvtFile::LvtFile(PortConfig ports) : RegFile(ports) {
  banks_.resize(static_cast<std::size_t>(ports_.writes));
  for (auto& group : banks_) {
    group.resize(static_cast<std::size_t>(ports_.reads));
    for (auto& bank : group) bank.fill(0);
  }
}

void LvtFile::write(int port, int reg, fp::u64 value) {
  check_write(port, reg);
  for (auto& bank : banks_[static_cast<std::size_t>(port)])
    bank[static_cast<std::size_t>(reg)] = value;
  lvt_[static_cast<std::size_t>(reg)] = static_cast<std::uint8_t>(port);
}

fp::u64 LvtFile::read(int port, int reg) const {
  check_read(port, reg);
  int group = lvt_[static_cast<std::size_t>(reg)];
  return banks_[static_cast<std::size_t>(group)][static_cast<std::size_t>(port)]
               [static_cast<std::size_t>(reg)];
}

XorFile::XorFile(PortConfig ports) : RegFile(ports) {
  banks_.resize(static_cast<std::size_t>(ports_.writes));
  for (auto& group : banks_) {
    group.resize(static_cast<std::size_t>(ports_.writes - 1 + ports_.reads));
    for (auto& bank : group) bank.fill(0);
  }
}

void XorFile::write(int port, int reg, fp::u64 value) {
  check_write(port, reg);
  // Read the other groups' banks at this address and store the XOR so that
  // a read across all groups cancels them back out.
  fp::u64 data = value;
  for (int other = 0; other < ports_.writes; ++other) {
    if (other == port) continue;
    data ^= banks_[static_cast<std::size_t>(other)]
                  [static_cast<std::size_t>(write_column(other, port))]
                  [static_cast<std::size_t>(reg)];
  }
  for (auto& bank : banks_[static_cast<std::size_t>(port)])
    bank[static_cast<std::size_t>(reg)] = data;
}

fp::u64 XorFile::read(int port, int reg) const {
  check_read(port, reg);
  fp::u64 v = 0;
  for (int w = 0; w < ports_.writes; ++w)
    v ^= banks_[static_cast<std::size_t>(w)]
               [static_cast<std::size_t>(read_column(port))]
               [static_cast<std::size_t>(reg)];
  return v;
}

}  // namespace fpe::rf
