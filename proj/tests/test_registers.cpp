#include <algorithm>
#include <set>

#include "doctest.h"
#include "ringlab/registers.hpp"

using namespace ringlab;

namespace {

RegisterSpec scalar_spec(RegisterModel model, int domain, bool with_bot = false) {
  RegisterSpec s;
  s.model = model;
  s.writer = 0;
  s.readers = {1};
  s.domain_size = domain;
  s.with_bot = with_bot;
  return s;
}

std::set<Value> as_set(const std::vector<Value>& v) { return {v.begin(), v.end()}; }

// Reference model for the regular-register read rule, kept deliberately
// naive: full unpruned history, per-read relative indices, and the
// literal "once x^k with k>1, never below x^(k-1) again" constraint.
struct NaiveRegular {
  struct W {
    Value value;
    uint64_t start, end;
    bool done;
  };
  Value initial;
  std::vector<W> writes;
  uint64_t min_seq = 0;  // absolute floor, 0 = unconstrained

  std::set<Value> legal(uint64_t rs, uint64_t re) const {
    std::set<Value> out;
    // base = last write completed strictly before the read started
    int base = -1;
    for (int i = 0; i < int(writes.size()); ++i)
      if (writes[size_t(i)].done && writes[size_t(i)].end < rs) base = i;
    uint64_t base_seq = uint64_t(base + 1);
    if (base_seq >= min_seq) out.insert(base < 0 ? initial : writes[size_t(base)].value);
    for (int i = 0; i < int(writes.size()); ++i) {
      const W& w = writes[size_t(i)];
      uint64_t seq = uint64_t(i + 1);
      bool overlaps = w.start <= re && (!w.done || w.end > rs);
      if (overlaps && seq >= min_seq) out.insert(w.value);
    }
    return out;
  }

  void resolved(uint64_t rs, uint64_t re, Value v) {
    int base = -1;
    for (int i = 0; i < int(writes.size()); ++i)
      if (writes[size_t(i)].done && writes[size_t(i)].end < rs) base = i;
    uint64_t base_seq = uint64_t(base + 1);
    uint64_t smallest = UINT64_MAX;
    if ((base < 0 ? initial : writes[size_t(base)].value) == v) smallest = base_seq;
    if (smallest == UINT64_MAX) {
      for (int i = 0; i < int(writes.size()); ++i) {
        const W& w = writes[size_t(i)];
        if (w.start <= re && (!w.done || w.end > rs) && w.value == v) {
          smallest = uint64_t(i + 1);
          break;
        }
      }
    }
    if (smallest != UINT64_MAX && smallest > base_seq + 1)
      min_seq = std::max(min_seq, smallest - 1);
  }
};

}  // namespace

TEST_CASE("write bookkeeping commits on write-end") {
  RegisterState r(scalar_spec(RegisterModel::Regular, 8), 0);
  r.begin_write(1, -1, 5);
  CHECK(r.committed() == 0);
  CHECK(r.write_open());
  r.end_write(9, 9);
  CHECK(r.committed() == 1);
  CHECK_FALSE(r.write_open());
}

TEST_CASE("two write-begins without an end are a protocol violation") {
  RegisterState r(scalar_spec(RegisterModel::Regular, 8), 0);
  r.begin_write(1, -1, 5);
  CHECK_THROWS_AS(r.begin_write(2, -1, 6), ProtocolViolation);
  RegisterState q(scalar_spec(RegisterModel::Regular, 8), 0);
  CHECK_THROWS_AS(q.end_write(3, 3), ProtocolViolation);
}

TEST_CASE("composite write-begin opens only the named field") {
  RegisterSpec spec;
  spec.model = RegisterModel::CompositeSafe;
  spec.fields = 9;
  spec.readers = {1};
  RegisterState r(spec, std::vector<Value>{1, 1, 1, 0, 0, 0, 1, 1, 1});
  r.begin_write(0, 4, 5);
  auto view = r.composite_view(6, 7);
  CHECK(view.corruptible == std::vector<int>{4});
}

TEST_CASE("quiescent regular read returns exactly the committed value") {
  RegisterState r(scalar_spec(RegisterModel::Regular, 10), 0);
  r.begin_write(7, -1, 2);
  r.end_write(4, 4);
  CHECK(as_set(r.legal_read_values(6, 8, 1)) == std::set<Value>{7});
}

TEST_CASE("regular read overlapping one write sees old or new") {
  RegisterState r(scalar_spec(RegisterModel::Regular, 10), 0);
  r.begin_write(1, -1, 5);
  CHECK(as_set(r.legal_read_values(6, 7, 1)) == std::set<Value>{0, 1});
}

TEST_CASE("safe read overlapping a write may return the whole domain") {
  RegisterState r(scalar_spec(RegisterModel::Safe, 5, true), 0);
  r.begin_write(0, -1, 5);  // even rewriting the same value
  auto legal = as_set(r.legal_read_values(6, 7, 1));
  CHECK(legal == std::set<Value>{kBot, 0, 1, 2, 3, 4});
  RegisterState q(scalar_spec(RegisterModel::Safe, 5, true), 3);
  CHECK(as_set(q.legal_read_values(2, 4, 1)) == std::set<Value>{3});
}

TEST_CASE("reader authorization is enforced") {
  RegisterState r(scalar_spec(RegisterModel::Regular, 4), 0);
  CHECK_THROWS_AS(r.legal_read_values(1, 2, 7), AccessError);
}

TEST_CASE("atomic within regular within safe on random histories") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int domain = 2 + int(rng.below(4));
    RegisterState atomic(scalar_spec(RegisterModel::Atomic, domain), 0);
    RegisterState regular(scalar_spec(RegisterModel::Regular, domain), 0);
    RegisterState safe(scalar_spec(RegisterModel::Safe, domain), 0);
    uint64_t tick = 1;
    bool open = false;
    uint64_t rs = 0;
    bool reading = false;
    for (int ev = 0; ev < 30; ++ev) {
      ++tick;
      switch (rng.below(3)) {
        case 0:
          if (!open) {
            Value v = Value(rng.below(uint64_t(domain)));
            atomic.begin_write(v, -1, tick);
            regular.begin_write(v, -1, tick);
            safe.begin_write(v, -1, tick);
            open = true;
          }
          break;
        case 1:
          if (open) {
            uint64_t horizon = reading ? rs : tick;
            atomic.end_write(tick, horizon);
            regular.end_write(tick, horizon);
            safe.end_write(tick, horizon);
            open = false;
          }
          break;
        case 2:
          if (!reading) {
            rs = tick;
            reading = true;
          } else {
            auto a = as_set(atomic.legal_read_values(rs, tick, 1));
            auto r = as_set(regular.legal_read_values(rs, tick, 1));
            auto s = as_set(safe.legal_read_values(rs, tick, 1));
            CHECK(std::includes(r.begin(), r.end(), a.begin(), a.end()));
            CHECK(std::includes(s.begin(), s.end(), r.begin(), r.end()));
            reading = false;
          }
          break;
      }
    }
  }
}

TEST_CASE("regular monotonicity matches the naive reference model") {
  // Random histories of a slow writer and a fast reader; the pruned
  // implementation must produce the same legal sets as the unpruned
  // reference, including the jump-ahead floor.
  Rng rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const int domain = 3 + int(rng.below(3));
    RegisterState impl(scalar_spec(RegisterModel::Regular, domain), 0);
    NaiveRegular ref;
    ref.initial = 0;
    uint64_t tick = 1;
    bool open = false;
    bool reading = false;
    uint64_t rs = 0;
    for (int ev = 0; ev < 60; ++ev) {
      ++tick;
      switch (rng.below(3)) {
        case 0:
          if (!open) {
            Value v = Value(rng.below(uint64_t(domain)));
            impl.begin_write(v, -1, tick);
            ref.writes.push_back({v, tick, 0, false});
            open = true;
          }
          break;
        case 1:
          if (open) {
            impl.end_write(tick, reading ? rs : tick);
            ref.writes.back().end = tick;
            ref.writes.back().done = true;
            open = false;
          }
          break;
        case 2:
          if (!reading) {
            rs = tick;
            reading = true;
          } else {
            auto got = as_set(impl.legal_read_values(rs, tick, 1));
            auto want = ref.legal(rs, tick);
            CHECK(got == want);
            if (got != want) return;
            // Resolve adversarially: prefer the newest value.
            Value v = *got.rbegin();
            if (rng.below(2)) v = *got.begin();
            impl.note_read_resolved(1, rs, tick, v);
            ref.resolved(rs, tick, v);
            impl.prune(tick);
            reading = false;
          }
          break;
      }
    }
  }
}

TEST_CASE("once a read jumps ahead, later reads cannot fall two behind") {
  RegisterState r(scalar_spec(RegisterModel::Regular, 10), 0);
  // Writer issues 1,2,3 overlapping one long read.
  r.begin_write(1, -1, 2);
  r.end_write(4, 2);
  r.begin_write(2, -1, 5);
  r.end_write(6, 2);
  r.begin_write(3, -1, 7);
  // Read [2, 8] may return 0..3.
  auto legal = as_set(r.legal_read_values(2, 8, 1));
  CHECK(legal == std::set<Value>{0, 1, 2, 3});
  r.note_read_resolved(1, 2, 8, 3);  // x^3: two writes past the base
  r.prune(9);
  // Next read overlaps write 3 only; values 0 and 1 are gone for good.
  auto later = as_set(r.legal_read_values(9, 10, 1));
  CHECK(later == std::set<Value>{2, 3});
}

TEST_CASE("resolve_read policies") {
  Rng rng(7);
  CHECK(resolve_read({7}, ResolvePolicy::AdversaryChoice, 7, 7, 1.0, &rng) == 7);
  CHECK(resolve_read({0, 1}, ResolvePolicy::AdversaryChoice, 1, 0, 1.0, &rng) == 1);
  CHECK_THROWS_AS(resolve_read({0, 1}, ResolvePolicy::AdversaryChoice, 2, 0, 1.0, &rng),
                  ScenarioError);
}

TEST_CASE("correct-with-p frequencies") {
  // Binary domain: correct 0 with probability p, 1 with 1-p.
  for (double p : {0.25, 0.5, 0.75, 1.0}) {
    Rng rng(uint64_t(p * 1000) + 5);
    const int draws = 100000;
    int correct = 0;
    for (int i = 0; i < draws; ++i)
      if (resolve_read({0, 1}, ResolvePolicy::CorrectWithP, std::nullopt, 0, p, &rng) == 0)
        ++correct;
    CHECK(std::abs(double(correct) / draws - p) < 0.01);
  }
}

TEST_CASE("composite read corrupts at most the in-flight field") {
  RegisterSpec spec;
  spec.model = RegisterModel::CompositeSafe;
  spec.fields = 9;
  spec.readers = {1};
  RegisterState r(spec, std::vector<Value>{1, 1, 1, 0, 0, 0, 1, 1, 1});

  CHECK(composite_read(r, std::nullopt, 3, 4) ==
        std::vector<Value>{1, 1, 1, 0, 0, 0, 1, 1, 1});

  // First field under a concurrent write, adversarially read as 0.
  r.begin_write(1, 0, 5);
  CHECK(composite_read(r, std::make_pair(0, 0), 6, 7) ==
        std::vector<Value>{0, 1, 1, 0, 0, 0, 1, 1, 1});
  // Naming a quiescent field is a scenario error.
  CHECK_THROWS_AS(composite_read(r, std::make_pair(5, 1), 6, 7), ScenarioError);
}
