#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringlab/registers.hpp"
#include "ringlab/types.hpp"

namespace ringlab {

// Per-processor local state. Which fields a protocol uses varies: the
// coarse protocols touch only x; the scan protocols use the cursor k and
// the accumulators s/j or the bit buffer g.
struct ProcState {
  Value x = 0;     // counter
  Value t = kBot;  // last resolved read
  std::vector<uint8_t> g;  // scanned bit buffer
  int32_t s = 0;   // scan count / refresh cursor
  Value j = kBot;  // scanned index
  int32_t k = 0;   // loop cursor
  int32_t pc = 0;

  bool operator==(const ProcState&) const = default;
};

struct InflightOp {
  bool write = false;
  int reg = -1;
  int field = -1;
  Value value = 0;
  uint64_t start = 0;
};

// Full system snapshot: locals, registers, one optional in-flight
// operation per processor (processors are sequential), and the global
// tick. The tick is bookkeeping, not state: renderings and state
// comparisons ignore it.
struct Configuration {
  std::vector<ProcState> procs;
  std::vector<RegisterState> regs;
  std::vector<std::optional<InflightOp>> inflight;
  int regs_per_link = 1;
  uint64_t tick = 0;

  int n() const { return int(procs.size()); }
};

// Canonical text form: x=[..];pc=[..];regs=[..] with an extra ;in=[..]
// section when operations are in flight. Registers render per link —
// decimal for scalar registers (kBot as '-'), bit strings otherwise.
std::string render(const Configuration& c);

// Field-wise comparison ignoring ticks and completed history; used for
// cycle certificates.
bool same_state(const Configuration& a, const Configuration& b);

std::map<Value, int> label_multiset(const Configuration& c);

// Parses "x=[..]" / "pc=[..]" / "regs=[..]" sections out of a rendering
// (or a subset of one). Values keyed by section name.
struct ConfigSections {
  std::optional<std::vector<Value>> x;
  std::optional<std::vector<int>> pc;
  std::optional<std::vector<std::string>> regs;  // raw per-link tokens
};
ConfigSections parse_config_sections(const std::string& text);

}  // namespace ringlab
