#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ringlab/config.hpp"
#include "ringlab/gray.hpp"
#include "ringlab/registers.hpp"
#include "ringlab/types.hpp"

namespace ringlab {

enum class StepKind { ReadBegin, ReadEnd, WriteBegin, WriteEnd, Internal, Guarded };

// What an actor's next micro-step is. For fine-grained protocols the pc
// walks an implicit per-processor table of these actions; the coarse
// protocols execute one Guarded command per step.
struct StepInfo {
  StepKind kind = StepKind::Internal;
  int reg = -1;    // flat register index
  int field = -1;  // composite field
  Value value = 0; // value a WriteBegin will write
  bool needs_resolution = false;
};

// Everything a resolution policy needs to pick a read result.
struct ReadContext {
  int actor = 0;
  int reg = -1;
  bool composite = false;
  std::vector<Value> legal;              // scalar reads
  RegisterState::CompositeView view;     // composite reads
  Value correct = 0;                     // quiescent/true value
  std::vector<Value> domain;
};

struct Resolution {
  Value v = kBot;
  std::vector<Value> bits;  // composite read result
};

using Resolver = std::function<Resolution(const ReadContext&)>;

// Immutable description of one protocol instance. Stepping is a pure
// function of (protocol, configuration, event); all mutation goes
// through proto_step below.
struct Protocol {
  ProtocolKind kind = ProtocolKind::DijkstraCentral;
  int n = 0;
  int K = 0;
  int m = 0;           // Gray bit width
  int label_bits = 0;  // composite label width L
  int fields = 0;      // composite field count 3 + 3L
  int regs_per_link = 1;

  bool coarse() const {
    return kind == ProtocolKind::DijkstraCentral || kind == ProtocolKind::DijkstraRw;
  }
  bool has_bot_writes() const { return kind == ProtocolKind::RegularBot; }
  // Actors the daemon schedules: processors, except the read/write
  // atomicity ring where reads and writes are separate atomic actions.
  int actor_count() const { return kind == ProtocolKind::DijkstraRw ? 2 * n : n; }

  int link_count() const { return kind == ProtocolKind::DijkstraCentral ? 0 : n; }
  int in_base(int proc) const;   // flat index of proc's input block
  int out_base(int proc) const;  // flat index of proc's output block
  int link_writer(int link) const;

  StepInfo peek(const Configuration& c, int actor) const;
  void commit(Configuration& c, int actor, const std::optional<Resolution>& res) const;
  bool enabled(const Configuration& c, int actor) const;  // coarse kinds

  Configuration initial_configuration() const;
  Configuration configuration_from_counters(
      const std::vector<Value>& xs,
      const std::optional<std::vector<std::string>>& reg_tokens = std::nullopt,
      const std::optional<std::vector<int>>& pcs = std::nullopt) const;

  // Register contents that encode counter value x (what a quiescent
  // correct writer publishes).
  std::vector<Value> encoded_block(Value x) const;
};

Protocol make_protocol(ProtocolKind kind, int n, std::optional<int> k_override = std::nullopt,
                       bool paper_label_width = false);

// Executes exactly one micro-step (or one full guarded command for the
// coarse protocols) for `actor`, consulting `resolver` when the step
// resolves a read. Returns the step that ran.
StepInfo proto_step(const Protocol& proto, Configuration& c, int actor, const Resolver& resolver);

// Resolver that always returns the correct/quiescent value.
Resolution resolve_exact(const ReadContext& ctx);

}  // namespace ringlab
