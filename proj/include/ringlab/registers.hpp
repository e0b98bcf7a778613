#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ringlab/types.hpp"

namespace ringlab {

enum class RegisterModel { Atomic, Regular, Safe, CompositeSafe, Randomized };

struct RegisterSpec {
  RegisterModel model = RegisterModel::Safe;
  int writer = 0;            // 0-based processor index
  std::vector<int> readers;  // 0-based; at most two in this project
  int domain_size = 2;       // values 0..domain_size-1
  bool with_bot = false;     // domain additionally contains kBot
  int fields = 0;            // composite only: number of one-bit fields
  double p_correct = 1.0;    // randomized only

  bool is_reader(int p) const {
    for (int r : readers)
      if (r == p) return true;
    return false;
  }
};

// One write, scalar or single composite field. Operation time is integer
// ticks; an operation occupies the closed interval [start, end]. Two
// operations are concurrent iff their intervals intersect.
struct WriteRecord {
  uint64_t seq = 0;
  Value value = 0;  // scalar value, or the bit for a composite field
  int field = -1;   // composite field index, -1 for scalar registers
  uint64_t start = 0;
  uint64_t end = 0;
  bool done = false;
};

// Single-writer register with an interval-semantics write history.
// `committed` is the value of the last completed write. The history is
// pruned to the last completed write per field plus anything that may
// still overlap a live read.
class RegisterState {
 public:
  RegisterState() = default;
  RegisterState(RegisterSpec spec, Value initial);
  RegisterState(RegisterSpec spec, std::vector<Value> initial_fields);

  const RegisterSpec& spec() const { return spec_; }
  Value committed() const { return committed_.at(0); }
  const std::vector<Value>& committed_fields() const { return committed_; }

  bool write_open() const { return open_index_ >= 0; }
  const WriteRecord* open_write() const {
    return open_index_ >= 0 ? &history_[size_t(open_index_)] : nullptr;
  }
  const std::vector<WriteRecord>& history() const { return history_; }

  void begin_write(Value v, int field, uint64_t tick);
  // prune_before: oldest start tick of any still-open read of this
  // register (or the current tick when none) — completed writes older
  // than that can no longer be returned by anything.
  void end_write(uint64_t tick, uint64_t prune_before);

  // Instantaneous write for coarse atomic stepping; bypasses intervals.
  void set_committed(Value v);

  // Admissible values for a scalar read over [rs, re] under this
  // register's model. Atomic: the committed value. Regular: the last
  // write completed before rs plus every overlapping write, filtered by
  // the reader's monotonicity floor. Safe/randomized: the full domain on
  // overlap (always, for randomized), otherwise the committed value.
  std::vector<Value> legal_read_values(uint64_t rs, uint64_t re, int reader) const;

  // Composite read: committed field vector plus the indices of fields
  // whose writes overlap [rs, re] (each may independently read as 0/1).
  struct CompositeView {
    std::vector<Value> baseline;
    std::vector<int> corruptible;
  };
  CompositeView composite_view(uint64_t rs, uint64_t re) const;

  // Record which write a regular read resolved to; jumping more than one
  // write ahead raises this reader's floor so later reads cannot fall
  // more than one write behind the resolved one.
  void note_read_resolved(int reader, uint64_t rs, uint64_t re, Value v);

  void prune(uint64_t prune_before);

  std::vector<Value> full_domain() const;

  bool state_equal(const RegisterState& o) const;

 private:
  const WriteRecord* last_completed_before(uint64_t rs, int field) const;
  uint64_t floor_of(int reader) const;
  void raise_floor(int reader, uint64_t seq);

  RegisterSpec spec_;
  std::vector<Value> committed_;
  std::vector<WriteRecord> history_;
  int open_index_ = -1;
  uint64_t next_seq_ = 1;
  std::vector<std::pair<int, uint64_t>> reader_floor_;
};

// Spec-level event wrappers used by tests and trace tooling.
struct WriteEvent {
  enum Kind { Begin, End } kind;
  Value value = 0;
  int field = -1;
  uint64_t tick = 0;
};
RegisterState apply_write_event(RegisterState state, const WriteEvent& ev);

enum class ResolvePolicy { AdversaryChoice, UniformRandom, CorrectWithP };

// Picks a concrete value out of a legal set. AdversaryChoice takes the
// scripted value and certifies it is legal; CorrectWithP returns
// `correct` with probability p and otherwise a uniform wrong value.
Value resolve_read(const std::vector<Value>& legal, ResolvePolicy policy,
                   std::optional<Value> scripted, Value correct, double p, Rng* rng);

// Whole-register composite read with an optional adversarial corruption
// of one concurrently written field.
std::vector<Value> composite_read(const RegisterState& state,
                                  std::optional<std::pair<int, Value>> corrupt_choice,
                                  uint64_t rs, uint64_t re);

}  // namespace ringlab
