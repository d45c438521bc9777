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

#include "stats.hpp"

#include <cstdio>
#include <sstream>

namespace fpe::stats {

RunReport finalize(const Counters& c, std::uint64_t cycles) {
  RunReport r;
  r.cycles = cycles;
  r.dispatched = c.dispatched;
  r.issued = c.issued;
  r.committed = c.committed;
  if (cycles > 0 && c.committed > 0)
    r.ipc = static_cast<double>(c.committed) / static_cast<double>(cycles);
  r.comparisons_total = c.comparisons_total;
  if (c.committed > 0)
    r.comparisons_per_committed = static_cast<double>(c.comparisons_total) /
                                  static_cast<double>(c.committed);
  r.bmt_reads = c.bmt_reads;
  r.blocks_enabled_hist = c.blocks_enabled_hist;
  for (const auto& [name, cycles_busy] : c.fu_busy_cycles)
    r.fu_busy_cycles.emplace_back(name, cycles_busy);
  r.comparisons_per_cycle = c.comparisons_per_cycle;
  return r;
}

namespace {

std::string hex64(fp::u64 v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llX", static_cast<unsigned long long>(v));
  return buf;
}

std::string ratio(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

}  // namespace

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "status: " << status_message << "\n";
  if (!config_summary.empty()) os << "config: " << config_summary << "\n";
  os << "cycles: " << cycles << "\n";
  os << "dispatched: " << dispatched << "\n";
  os << "issued: " << issued << "\n";
  os << "committed: " << committed << "\n";
  os << "ipc: " << ratio(ipc) << "\n";
  os << "comparisons_total: " << comparisons_total << "\n";
  os << "comparisons_per_committed: " << ratio(comparisons_per_committed) << "\n";
  os << "bmt_reads: " << bmt_reads << "\n";
  os << "blocks_enabled_histogram:";
  for (int i = 0; i < 5; ++i)
    os << " " << i << "=" << blocks_enabled_hist[static_cast<std::size_t>(i)];
  os << "\n";
  for (const auto& [name, busy] : fu_busy_cycles)
    os << "fu_busy." << name << ": " << busy << "\n";
  const char* names = "VZOUI";
  os << "fcsr_flags: ";
  for (int i = 0; i < 5; ++i) os << (fcsr_flags[i] ? names[i] : '-');
  os << "\n";
  for (const StoreCapture& s : stores)
    os << "store: $f" << s.reg << " = " << hex64(s.bits) << "\n";
  os << "timeline: index mnemonic dispatch issue complete commit\n";
  for (const InstrTimeline& t : timeline) {
    os << "  [" << t.index << "] " << t.text;
    auto cell = [&](bool have, std::uint64_t v) {
      if (have) os << " " << v; else os << " -";
    };
    cell(t.dispatched, t.dispatch);
    cell(t.issued, t.issue);
    cell(t.completed, t.complete);
    cell(t.committed, t.commit);
    os << "\n";
  }
  return os.str();
}

std::string RunReport::csv_header() {
  return "name,status,cycles,dispatched,issued,committed,ipc,"
         "comparisons_total,comparisons_per_committed,bmt_reads,stores";
}

std::string RunReport::to_csv_row(const std::string& name) const {
  std::ostringstream os;
  os << name << "," << status << "," << cycles << "," << dispatched << ","
     << issued << "," << committed << "," << ratio(ipc) << ","
     << comparisons_total << "," << ratio(comparisons_per_committed) << ","
     << bmt_reads << ",";
  for (std::size_t i = 0; i < stores.size(); ++i) {
    if (i) os << ";";
    os << "$f" << stores[i].reg << "=" << hex64(stores[i].bits);
  }
  return os.str();
}

}  // namespace fpe::stats
