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

// 64-bit x 128-entry physical register file in three interchangeable
// models (flat reference array, LVT-banked, XOR-banked) plus the 128-bit
// ready-bit vector. Same-cycle writes commit before reads; two same-cycle
// writes to one register are a contract violation checked by assertion.

#pragma once

#include <array>
#include <bitset>
#include <cassert>
#include <cstdint>
#include <memory>
#include <vector>

#include "softfloat.hpp"

namespace fpe::rf {

inline constexpr int kRegCount = 128;

enum class Model : std::uint8_t { Reference = 0, Xor = 1, Lvt = 2 };

struct PortConfig {
  int reads = 6;
  int writes = 6;
};
inline constexpr PortConfig kPortsV1{6, 6};
inline constexpr PortConfig kPortsV2{7, 3};

class RegFile {
 public:
  virtual ~RegFile() = default;
  virtual void write(int port, int reg, fp::u64 value) = 0;
  virtual fp::u64 read(int port, int reg) const = 0;
  virtual Model model() const = 0;
  // Number of underlying single-port memory blocks (1 for the flat model).
  virtual int bank_count() const = 0;

  const PortConfig& ports() const { return ports_; }
  // Marks the start of a cycle; same-cycle same-register write conflicts are
  // detected from here.
  void begin_cycle();

 protected:
  explicit RegFile(PortConfig ports) : ports_(ports) {}
  void check_write(int port, int reg);
  void check_read(int port, int reg) const;

  PortConfig ports_;
  std::vector<int> written_this_cycle_;
};

std::unique_ptr<RegFile> make_regfile(Model model, PortConfig ports);

class ReferenceFile final : public RegFile {
 public:
  explicit ReferenceFile(PortConfig ports) : RegFile(ports) { regs_.fill(0); }
  void write(int port, int reg, fp::u64 value) override;
  fp::u64 read(int port, int reg) const override;
  Model model() const override { return Model::Reference; }
  int bank_count() const override { return 1; }

 private:
  std::array<fp::u64, kRegCount> regs_;
};

// Live-Value-Table model: one replicated 1W/nR bank group per write port
// and a 128-entry table naming the group that last wrote each register.
class LvtFile final : public RegFile {
 public:
  explicit LvtFile(PortConfig ports);
  void write(int port, int reg, fp::u64 value) override;
  fp::u64 read(int port, int reg) const override;
  Model model() const override { return Model::Lvt; }
  int bank_count() const override { return ports_.writes * ports_.reads; }

 private:
  // banks_[w][r][reg]: replica r of write-port w's group.
  std::vector<std::vector<std::array<fp::u64, kRegCount>>> banks_;
  std::array<std::uint8_t, kRegCount> lvt_{};
};

// XOR model: m * (m - 1 + n) banks; a read XORs one bank per write group so
// stale values cancel (A ^ B ^ B = A).
class XorFile final : public RegFile {
 public:
  explicit XorFile(PortConfig ports);
  void write(int port, int reg, fp::u64 value) override;
  fp::u64 read(int port, int reg) const override;
  Model model() const override { return Model::Xor; }
  int bank_count() const override {
    return ports_.writes * (ports_.writes - 1 + ports_.reads);
  }

 private:
  // banks_[w][k][reg]: group w, column k. Columns 0..m-2 face the other
  // write ports, columns m-1..m-2+n face the read ports. All columns of a
  // group hold identical content.
  std::vector<std::vector<std::array<fp::u64, kRegCount>>> banks_;
  // Column of group `other` dedicated to write port `w`.
  int write_column(int other, int w) const { return other > w ? w : w - 1; }
  int read_column(int r) const { return ports_.writes - 1 + r; }
};

// One ready bit per physical register; set on writeback (and early, at tag
// broadcast), cleared when a register is re-allocated as a destination.
class ReadyBits {
 public:
  using Snapshot = std::bitset<kRegCount>;

  bool test(int reg) const { return bits_[static_cast<std::size_t>(reg)]; }
  void set(int reg) { bits_[static_cast<std::size_t>(reg)] = true; }
  void clear(int reg) { bits_[static_cast<std::size_t>(reg)] = false; }
  void set_to(int reg, bool v) { bits_[static_cast<std::size_t>(reg)] = v; }
  Snapshot snapshot() const { return bits_; }
  void restore(const Snapshot& s) { bits_ = s; }
  bool operator==(const ReadyBits&) const = default;

 private:
  Snapshot bits_;
};

}  // namespace fpe::rf
