#include "ringlab/registers.hpp"

#include <algorithm>

namespace ringlab {

RegisterState::RegisterState(RegisterSpec spec, Value initial) : spec_(std::move(spec)) {
  committed_.assign(1, initial);
  // Seed the history with a virtual completed write so the "last write
  // before the read" rule is uniform from tick zero.
  history_.push_back(WriteRecord{0, initial, -1, 0, 0, true});
}

RegisterState::RegisterState(RegisterSpec spec, std::vector<Value> initial_fields)
    : spec_(std::move(spec)), committed_(std::move(initial_fields)) {
  if (int(committed_.size()) != spec_.fields)
    throw ShapeError("composite initial value has wrong field count");
}

void RegisterState::begin_write(Value v, int field, uint64_t tick) {
  if (open_index_ >= 0) throw ProtocolViolation("write begun while another is open");
  if (spec_.model == RegisterModel::CompositeSafe) {
    if (field < 0 || field >= spec_.fields) throw ShapeError("composite field out of range");
    if (v != 0 && v != 1) throw RangeError("composite fields hold bits");
  } else {
    if (field != -1) throw ShapeError("scalar register written with a field index");
    if (v == kBot) {
      if (!spec_.with_bot) throw RangeError("bottom not in register domain");
    } else if (v < 0 || v >= spec_.domain_size) {
      throw RangeError("write value outside register domain");
    }
  }
  history_.push_back(WriteRecord{next_seq_++, v, field, tick, 0, false});
  open_index_ = int(history_.size()) - 1;
}

void RegisterState::end_write(uint64_t tick, uint64_t prune_before) {
  if (open_index_ < 0) throw ProtocolViolation("write ended with none open");
  WriteRecord& rec = history_[size_t(open_index_)];
  if (tick <= rec.start) throw ProtocolViolation("write must span at least one tick");
  rec.end = tick;
  rec.done = true;
  size_t idx = rec.field < 0 ? 0 : size_t(rec.field);
  committed_.at(idx) = rec.value;
  open_index_ = -1;
  prune(prune_before);
}

void RegisterState::set_committed(Value v) {
  if (open_index_ >= 0) throw ProtocolViolation("atomic write during an open write");
  committed_.at(0) = v;
}

void RegisterState::prune(uint64_t prune_before) {
  // Keep: open writes, writes that may overlap a live read, and per
  // field both the most recent completed write and the most recent one
  // finished before the horizon — the latter is the "old value" a read
  // started at the horizon falls back to.
  std::vector<int> last_done(committed_.size(), -1);
  std::vector<int> base_at_horizon(committed_.size(), -1);
  for (int i = 0; i < int(history_.size()); ++i) {
    const WriteRecord& r = history_[size_t(i)];
    if (!r.done) continue;
    size_t idx = r.field < 0 ? 0 : size_t(r.field);
    if (last_done[idx] < 0 || history_[size_t(last_done[idx])].seq < r.seq) last_done[idx] = i;
    if (r.end < prune_before &&
        (base_at_horizon[idx] < 0 || history_[size_t(base_at_horizon[idx])].seq < r.seq))
      base_at_horizon[idx] = i;
  }
  std::vector<WriteRecord> kept;
  kept.reserve(history_.size());
  int open_seq = open_index_ >= 0 ? int(history_[size_t(open_index_)].seq) : -1;
  for (int i = 0; i < int(history_.size()); ++i) {
    const WriteRecord& r = history_[size_t(i)];
    bool keep = !r.done || r.end >= prune_before;
    for (int ld : last_done)
      if (ld == i) keep = true;
    for (int bh : base_at_horizon)
      if (bh == i) keep = true;
    if (keep) kept.push_back(r);
  }
  history_ = std::move(kept);
  open_index_ = -1;
  if (open_seq >= 0) {
    for (int i = 0; i < int(history_.size()); ++i)
      if (!history_[size_t(i)].done && int(history_[size_t(i)].seq) == open_seq) open_index_ = i;
  }
}

const WriteRecord* RegisterState::last_completed_before(uint64_t rs, int field) const {
  const WriteRecord* best = nullptr;
  for (const WriteRecord& r : history_) {
    if (!r.done || r.field != field) continue;
    if (r.end < rs && (!best || r.seq > best->seq)) best = &r;
  }
  return best;
}

uint64_t RegisterState::floor_of(int reader) const {
  for (const auto& [r, f] : reader_floor_)
    if (r == reader) return f;
  return 0;
}

void RegisterState::raise_floor(int reader, uint64_t seq) {
  for (auto& [r, f] : reader_floor_) {
    if (r == reader) {
      f = std::max(f, seq);
      return;
    }
  }
  reader_floor_.emplace_back(reader, seq);
}

std::vector<Value> RegisterState::full_domain() const {
  std::vector<Value> d;
  if (spec_.with_bot) d.push_back(kBot);
  for (Value v = 0; v < spec_.domain_size; ++v) d.push_back(v);
  return d;
}

std::vector<Value> RegisterState::legal_read_values(uint64_t rs, uint64_t re, int reader) const {
  if (!spec_.is_reader(reader)) throw AccessError("processor is not a reader of this register");
  if (spec_.model == RegisterModel::CompositeSafe)
    throw ShapeError("composite registers are read whole; use composite_read");

  bool overlap = false;
  for (const WriteRecord& r : history_) {
    if (r.seq == 0) continue;
    if (r.start <= re && (!r.done || r.end > rs)) overlap = true;
  }

  switch (spec_.model) {
    case RegisterModel::Atomic:
      return {committed_.at(0)};
    case RegisterModel::Randomized:
      // Probabilistic registers can be wrong even when quiescent.
      return full_domain();
    case RegisterModel::Safe:
      if (overlap) return full_domain();
      return {committed_.at(0)};
    case RegisterModel::Regular: {
      const WriteRecord* base = last_completed_before(rs, -1);
      uint64_t base_seq = base ? base->seq : 0;
      uint64_t floor = floor_of(reader);
      std::vector<Value> out;
      auto add = [&out](Value v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      };
      if (base && base_seq >= floor) add(base->value);
      if (!base && floor == 0) {
        // The virtual initial write.
        for (const WriteRecord& r : history_)
          if (r.seq == 0) add(r.value);
      }
      for (const WriteRecord& r : history_) {
        if (r.seq == 0) continue;
        if (r.start <= re && (!r.done || r.end > rs) && r.seq >= floor) add(r.value);
      }
      if (out.empty())
        throw EngineError("regular read has no admissible value (floor bug)");
      return out;
    }
    default:
      throw ShapeError("unknown register model");
  }
}

void RegisterState::note_read_resolved(int reader, uint64_t rs, uint64_t re, Value v) {
  if (spec_.model != RegisterModel::Regular) return;
  const WriteRecord* base = last_completed_before(rs, -1);
  uint64_t base_seq = base ? base->seq : 0;
  // Smallest write the value could have come from; the conservative
  // choice admits the most later behaviours.
  uint64_t resolved_seq = UINT64_MAX;
  if (base && base->value == v) resolved_seq = base_seq;
  if (!base) {
    for (const WriteRecord& r : history_)
      if (r.seq == 0 && r.value == v) resolved_seq = 0;
  }
  if (resolved_seq == UINT64_MAX) {
    for (const WriteRecord& r : history_) {
      if (r.seq == 0) continue;
      if (r.start <= re && (!r.done || r.end > rs) && r.value == v)
        resolved_seq = std::min(resolved_seq, r.seq);
    }
  }
  if (resolved_seq == UINT64_MAX) return;
  // Only a jump of more than one write ahead of the base constrains
  // later reads: they may no longer return anything two writes back.
  if (resolved_seq > base_seq + 1) raise_floor(reader, resolved_seq - 1);
}

RegisterState::CompositeView RegisterState::composite_view(uint64_t rs, uint64_t re) const {
  if (spec_.model != RegisterModel::CompositeSafe)
    throw ShapeError("composite_view on a scalar register");
  CompositeView view;
  view.baseline = committed_;
  for (const WriteRecord& r : history_) {
    if (r.seq == 0 || r.field < 0) continue;
    if (r.start <= re && (!r.done || r.end > rs)) {
      if (std::find(view.corruptible.begin(), view.corruptible.end(), r.field) ==
          view.corruptible.end())
        view.corruptible.push_back(r.field);
    }
  }
  std::sort(view.corruptible.begin(), view.corruptible.end());
  return view;
}

bool RegisterState::state_equal(const RegisterState& o) const {
  if (committed_ != o.committed_) return false;
  if ((open_index_ >= 0) != (o.open_index_ >= 0)) return false;
  if (open_index_ >= 0) {
    const WriteRecord& a = history_[size_t(open_index_)];
    const WriteRecord& b = o.history_[size_t(o.open_index_)];
    if (a.value != b.value || a.field != b.field) return false;
  }
  return reader_floor_ == o.reader_floor_;
}

RegisterState apply_write_event(RegisterState state, const WriteEvent& ev) {
  if (ev.kind == WriteEvent::Begin)
    state.begin_write(ev.value, ev.field, ev.tick);
  else
    state.end_write(ev.tick, ev.tick);
  return state;
}

Value resolve_read(const std::vector<Value>& legal, ResolvePolicy policy,
                   std::optional<Value> scripted, Value correct, double p, Rng* rng) {
  if (legal.empty()) throw EngineError("empty legal set");
  switch (policy) {
    case ResolvePolicy::AdversaryChoice: {
      if (!scripted) throw ScenarioError("adversary resolution missing a value");
      if (std::find(legal.begin(), legal.end(), *scripted) == legal.end())
        throw ScenarioError("scripted read value is not legal here");
      return *scripted;
    }
    case ResolvePolicy::UniformRandom:
      if (legal.size() == 1) return legal[0];
      if (!rng) throw EngineError("random resolution without rng");
      return legal[size_t(rng->below(legal.size()))];
    case ResolvePolicy::CorrectWithP: {
      if (!rng) throw EngineError("random resolution without rng");
      if (rng->chance(p)) return correct;
      std::vector<Value> wrong;
      for (Value v : legal)
        if (v != correct) wrong.push_back(v);
      if (wrong.empty()) return correct;
      return wrong[size_t(rng->below(wrong.size()))];
    }
  }
  throw EngineError("unknown resolve policy");
}

std::vector<Value> composite_read(const RegisterState& state,
                                  std::optional<std::pair<int, Value>> corrupt_choice,
                                  uint64_t rs, uint64_t re) {
  auto view = state.composite_view(rs, re);
  std::vector<Value> out = view.baseline;
  if (corrupt_choice) {
    auto [field, bit] = *corrupt_choice;
    if (std::find(view.corruptible.begin(), view.corruptible.end(), field) ==
        view.corruptible.end())
      throw ScenarioError("corruption names a field with no concurrent write");
    if (bit != 0 && bit != 1) throw RangeError("corrupt bit must be 0 or 1");
    out.at(size_t(field)) = bit;
  }
  return out;
}

}  // namespace ringlab
