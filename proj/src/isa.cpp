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

#include "isa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace fpe::isa {

namespace {

const std::map<std::string, Mnemonic, std::less<>> kMnemonics = {
    {"ADD", Mnemonic::Add},     {"SUB", Mnemonic::Sub},
    {"MUL", Mnemonic::Mul},     {"DIV", Mnemonic::Div},
    {"RECIP", Mnemonic::Recip}, {"MADDF", Mnemonic::Maddf},
    {"MSUBF", Mnemonic::Msubf}, {"CMP", Mnemonic::Cmp},
    {"CLASS", Mnemonic::Class}, {"MIN", Mnemonic::Min},
    {"MAX", Mnemonic::Max},     {"MINA", Mnemonic::Mina},
    {"MAXA", Mnemonic::Maxa},   {"ABS", Mnemonic::Abs},
    {"NEG", Mnemonic::Neg},     {"MOV", Mnemonic::Mov},
    {"BC1EQZ", Mnemonic::Bc1eqz}, {"BC1NEZ", Mnemonic::Bc1nez},
    {"LDC1", Mnemonic::Ldc1},   {"SDC1", Mnemonic::Sdc1},
};

// Recognized MIPS64 R6 FPU mnemonics outside the modeled subset.
const std::set<std::string, std::less<>> kUnimplemented = {
    "SQRT", "RSQRT", "CVT", "RINT", "CEIL", "FLOOR", "ROUND", "TRUNC",
    "MFC1", "MTC1", "CFC1", "CTC1", "DMFC1", "DMTC1", "MFHC1", "MTHC1",
    "SEL", "SELEQZ", "SELNEZ", "LWC1", "SWC1",
};

const std::map<std::string, fp::CompareCond, std::less<>> kConds = {
    {"AF", fp::CompareCond::AF},   {"UN", fp::CompareCond::UN},
    {"EQ", fp::CompareCond::EQ},   {"UEQ", fp::CompareCond::UEQ},
    {"LT", fp::CompareCond::LT},   {"ULT", fp::CompareCond::ULT},
    {"LE", fp::CompareCond::LE},   {"ULE", fp::CompareCond::ULE},
    {"SAF", fp::CompareCond::SAF}, {"SUN", fp::CompareCond::SUN},
    {"SEQ", fp::CompareCond::SEQ}, {"SUEQ", fp::CompareCond::SUEQ},
    {"SLT", fp::CompareCond::SLT}, {"SULT", fp::CompareCond::SULT},
    {"SLE", fp::CompareCond::SLE}, {"SULE", fp::CompareCond::SULE},
};

const char* cond_name(fp::CompareCond c) {
  static const char* names[] = {"AF", "UN", "EQ", "UEQ", "LT", "ULT",
                                "LE", "ULE", "SAF", "SUN", "SEQ", "SUEQ",
                                "SLT", "SULT", "SLE", "SULE"};
  return names[static_cast<int>(c)];
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

struct LineError {
  std::string message;
};

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char ch : line) {
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

int parse_reg(const std::string& tok) {
  std::string t = upper(tok);
  if (t.size() < 3 || t[0] != '$' || t[1] != 'F') return -1;
  int n = 0;
  auto [p, ec] = std::from_chars(t.data() + 2, t.data() + t.size(), n);
  if (ec != std::errc{} || p != t.data() + t.size()) return -1;
  if (n < 0 || n > 31) return -1;
  return n;
}

bool parse_hex64(const std::string& tok, fp::u64& out) {
  std::string t = upper(tok);
  if (t.size() != 18 || t[0] != '0' || t[1] != 'X') return false;
  fp::u64 v = 0;
  auto [p, ec] = std::from_chars(t.data() + 2, t.data() + t.size(), v, 16);
  if (ec != std::errc{} || p != t.data() + t.size()) return false;
  out = v;
  return true;
}

}  // namespace

const char* mnemonic_name(Mnemonic m) {
  static const char* names[] = {"ADD", "SUB", "MUL", "DIV", "RECIP",
                                "MADDF", "MSUBF", "CMP", "CLASS", "MIN",
                                "MAX", "MINA", "MAXA", "ABS", "NEG",
                                "MOV", "BC1EQZ", "BC1NEZ", "LDC1", "SDC1"};
  return names[static_cast<int>(m)];
}

const char* resource_name(Resource r) {
  static const char* names[] = {"ADD", "MUL", "DIV", "SQRT", "ALU",
                                "MULA", "MOVTOFROM", "BRANCH"};
  return names[static_cast<int>(r)];
}

Resource resource_of(Mnemonic m) {
  switch (m) {
    case Mnemonic::Add:
    case Mnemonic::Sub: return Resource::Add;
    case Mnemonic::Mul: return Resource::Mul;
    case Mnemonic::Div:
    case Mnemonic::Recip: return Resource::Div;
    case Mnemonic::Maddf:
    case Mnemonic::Msubf: return Resource::Mula;
    case Mnemonic::Bc1eqz:
    case Mnemonic::Bc1nez: return Resource::Branch;
    default: return Resource::Alu;
  }
}

int source_count(Mnemonic m) {
  switch (m) {
    case Mnemonic::Maddf:
    case Mnemonic::Msubf: return 3;
    case Mnemonic::Add:
    case Mnemonic::Sub:
    case Mnemonic::Mul:
    case Mnemonic::Div:
    case Mnemonic::Cmp:
    case Mnemonic::Min:
    case Mnemonic::Max:
    case Mnemonic::Mina:
    case Mnemonic::Maxa: return 2;
    case Mnemonic::Ldc1: return 0;
    default: return 1;  // RECIP, CLASS, ABS, NEG, MOV, BC1*, SDC1
  }
}

bool writes_dest(Mnemonic m) {
  switch (m) {
    case Mnemonic::Sdc1:
    case Mnemonic::Bc1eqz:
    case Mnemonic::Bc1nez:
    case Mnemonic::Ldc1: return false;  // loads write via the load schedule
    default: return true;
  }
}

ParseResult parse_program(std::string_view text) {
  ParseResult res;
  Program& prog = res.program;
  std::set<std::uint64_t> load_cycles;
  int lineno = 0;
  std::size_t pos = 0;

  auto fail = [&](std::string msg) {
    res.ok = false;
    res.line = lineno;
    res.error = "line " + std::to_string(lineno) + ": " + std::move(msg);
    return res;
  };

  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    auto toks = tokenize(line);
    if (toks.empty()) continue;

    std::string head = upper(toks[0]);
    if (head == "EXPECT") {
      if (toks.size() != 3) return fail("EXPECT takes a register and a value");
      int reg = parse_reg(toks[1]);
      fp::u64 v = 0;
      if (reg < 0) return fail("bad register '" + toks[1] + "'");
      if (!parse_hex64(toks[2], v))
        return fail("bad value '" + toks[2] + "' (want 0x + 16 hex digits)");
      prog.expects.push_back({reg, v});
      continue;
    }

    // Split the mnemonic from .cond / .fmt suffixes.
    std::vector<std::string> parts;
    {
      std::size_t start = 0;
      while (start <= head.size()) {
        std::size_t dot = head.find('.', start);
        if (dot == std::string::npos) {
          parts.push_back(head.substr(start));
          break;
        }
        parts.push_back(head.substr(start, dot - start));
        start = dot + 1;
      }
    }
    const std::string& base = parts[0];
    auto it = kMnemonics.find(base);
    if (it == kMnemonics.end()) {
      if (kUnimplemented.count(base))
        return fail("unimplemented instruction '" + base + "'");
      return fail("unknown mnemonic '" + base + "'");
    }

    Instruction inst;
    inst.mnemonic = it->second;
    bool have_cond = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i] == "D") continue;  // optional format suffix
      auto ci = kConds.find(parts[i]);
      if (inst.mnemonic == Mnemonic::Cmp && ci != kConds.end() && !have_cond) {
        inst.cond = ci->second;
        have_cond = true;
        continue;
      }
      if (parts[i] == "S" || parts[i] == "W" || parts[i] == "L" || parts[i] == "PS")
        return fail("format '" + parts[i] + "' not supported (D only)");
      return fail("bad suffix '." + parts[i] + "' on " + base);
    }
    if (inst.mnemonic == Mnemonic::Cmp && !have_cond)
      return fail("CMP needs a condition, e.g. CMP.EQ");

    switch (inst.mnemonic) {
      case Mnemonic::Ldc1: {
        if (toks.size() != 4) return fail("LDC1 wants: LDC1 $fN @cycle=N value=0x...");
        inst.fs = parse_reg(toks[1]);
        if (inst.fs < 0) return fail("bad register '" + toks[1] + "'");
        std::string cyc = upper(toks[2]);
        if (cyc.rfind("@CYCLE=", 0) != 0) return fail("missing @cycle= annotation");
        std::uint64_t n = 0;
        auto body = cyc.substr(7);
        auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), n);
        if (ec != std::errc{} || p != body.data() + body.size())
          return fail("bad cycle '" + toks[2] + "'");
        std::string val = upper(toks[3]);
        if (val.rfind("VALUE=", 0) != 0) return fail("missing value= annotation");
        fp::u64 v = 0;
        if (!parse_hex64(toks[3].substr(6), v))
          return fail("bad value '" + toks[3] + "' (want 0x + 16 hex digits)");
        if (!load_cycles.insert(n).second)
          return fail("duplicate load cycle " + std::to_string(n) +
                      " (one load port per cycle)");
        inst.load_cycle = n;
        inst.load_value = v;
        prog.loads.push_back({n, v, inst.fs});
        break;
      }
      case Mnemonic::Sdc1: {
        if (toks.size() != 2) return fail("SDC1 wants: SDC1 $fN");
        inst.fs = parse_reg(toks[1]);
        if (inst.fs < 0) return fail("bad register '" + toks[1] + "'");
        prog.captures.push_back(inst.fs);
        break;
      }
      case Mnemonic::Bc1eqz:
      case Mnemonic::Bc1nez: {
        if (toks.size() < 2 || toks.size() > 3)
          return fail("branch wants: BC1EQZ $fN [!mispredict]");
        inst.fs = parse_reg(toks[1]);
        if (inst.fs < 0) return fail("bad register '" + toks[1] + "'");
        if (toks.size() == 3) {
          if (upper(toks[2]) != "!MISPREDICT")
            return fail("bad annotation '" + toks[2] + "'");
          inst.mispredict = true;
        }
        break;
      }
      default: {
        int nsrc = source_count(inst.mnemonic);
        std::size_t want = 2 + static_cast<std::size_t>(nsrc);
        if (toks.size() != want)
          return fail(std::string(mnemonic_name(inst.mnemonic)) + " wants " +
                      std::to_string(nsrc) + " source register(s)");
        int regs[4] = {-1, -1, -1, -1};
        for (std::size_t i = 1; i < toks.size(); ++i) {
          regs[i - 1] = parse_reg(toks[i]);
          if (regs[i - 1] < 0) return fail("bad register '" + toks[i] + "'");
        }
        inst.fd = regs[0];
        inst.fs = regs[1];
        if (nsrc >= 2) inst.ft = regs[2];
        if (nsrc >= 3) inst.fr = regs[3];
        break;
      }
    }
    prog.instructions.push_back(inst);
  }

  res.ok = true;
  return res;
}

std::string render_program(const Program& p) {
  std::ostringstream os;
  char hex[32];
  for (const Instruction& in : p.instructions) {
    switch (in.mnemonic) {
      case Mnemonic::Ldc1:
        std::snprintf(hex, sizeof hex, "0x%016llX",
                      static_cast<unsigned long long>(in.load_value));
        os << "LDC1 $f" << in.fs << " @cycle=" << in.load_cycle
           << " value=" << hex << "\n";
        break;
      case Mnemonic::Sdc1:
        os << "SDC1 $f" << in.fs << "\n";
        break;
      case Mnemonic::Bc1eqz:
      case Mnemonic::Bc1nez:
        os << mnemonic_name(in.mnemonic) << " $f" << in.fs
           << (in.mispredict ? " !mispredict" : "") << "\n";
        break;
      case Mnemonic::Cmp:
        os << "CMP." << cond_name(in.cond) << " $f" << in.fd << ", $f" << in.fs
           << ", $f" << in.ft << "\n";
        break;
      default: {
        os << mnemonic_name(in.mnemonic) << " $f" << in.fd << ", $f" << in.fs;
        int nsrc = source_count(in.mnemonic);
        if (nsrc >= 2) os << ", $f" << in.ft;
        if (nsrc >= 3) os << ", $f" << in.fr;
        os << "\n";
        break;
      }
    }
  }
  for (const Program::Expect& e : p.expects) {
    std::snprintf(hex, sizeof hex, "0x%016llX",
                  static_cast<unsigned long long>(e.bits));
    os << "EXPECT $f" << e.reg << " " << hex << "\n";
  }
  return os.str();
}

bool fcsr_accrue(Fcsr& fcsr, const fp::Flags& flags) {
  const bool f[5] = {flags.invalid, flags.div_zero, flags.overflow,
                     flags.underflow, flags.inexact};
  bool trap = fcsr.cause_e;
  for (int i = 0; i < 5; ++i) {
    fcsr.cause[i] = f[i];
    fcsr.flags[i] |= f[i];
    trap |= fcsr.enables[i] && fcsr.cause[i];
  }
  return trap;
}

std::string format_flags(const fp::Flags& f) {
  std::string s;
  s += f.invalid ? 'V' : '-';
  s += f.div_zero ? 'Z' : '-';
  s += f.overflow ? 'O' : '-';
  s += f.underflow ? 'U' : '-';
  s += f.inexact ? 'I' : '-';
  return s;
}

}  // namespace fpe::isa
