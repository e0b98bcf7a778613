#include "doctest.h"
#include "ringlab/protocol.hpp"
#include "ringlab/ring.hpp"

using namespace ringlab;

namespace {

std::vector<Value> counters(const Configuration& c) {
  std::vector<Value> xs;
  for (const ProcState& p : c.procs) xs.push_back(p.x);
  return xs;
}

// Step one processor until it has executed `steps` micro-steps, reads
// resolved to the committed value.
void drive(const Protocol& proto, Configuration& c, int actor, int steps) {
  for (int i = 0; i < steps; ++i) proto_step(proto, c, actor, resolve_exact);
}

}  // namespace

TEST_CASE("make_protocol instantiates the documented shapes") {
  Protocol rb = make_protocol(ProtocolKind::RegularBot, 3);
  CHECK(rb.K == 7);
  CHECK(rb.regs_per_link == 1);
  Configuration c = rb.initial_configuration();
  REQUIRE(c.regs.size() == 3);
  CHECK(c.regs[0].spec().model == RegisterModel::Regular);
  CHECK(c.regs[0].spec().domain_size == 7);
  CHECK(c.regs[0].spec().with_bot);

  Protocol su = make_protocol(ProtocolKind::SafeUnary, 3);
  CHECK(su.K == 7);
  CHECK(su.regs_per_link == 7);
  Configuration cu = su.initial_configuration();
  CHECK(cu.regs.size() == 21);
  CHECK(cu.regs[0].spec().model == RegisterModel::Safe);
  CHECK(cu.regs[0].spec().domain_size == 2);
  CHECK(cu.regs[0].spec().readers.size() == 2);  // the writer reads its own output

  Protocol rw = make_protocol(ProtocolKind::DijkstraRw, 3);
  CHECK(rw.K == 5);
  CHECK(rw.actor_count() == 6);

  Protocol sg = make_protocol(ProtocolKind::SafeGray, 3);
  CHECK(sg.m == 3);
  CHECK(sg.K == 8);
  CHECK(sg.regs_per_link == 4);

  Protocol cs = make_protocol(ProtocolKind::CompositeSafe, 3);
  CHECK(cs.label_bits == 3);
  CHECK(cs.fields == 12);
  Protocol csp = make_protocol(ProtocolKind::CompositeSafe, 3, std::nullopt, true);
  CHECK(csp.label_bits == 8);  // the wide published layout

  CHECK_THROWS_AS(make_protocol(ProtocolKind::DijkstraCentral, 1), ConfigError);
  CHECK_THROWS_AS(make_protocol(ProtocolKind::SafeUnary, 3, 9), ConfigError);
}

TEST_CASE("central guarded command in one step") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 3, 3);
  Configuration c = p.configuration_from_counters({0, 0, 0});
  proto_step(p, c, 0, resolve_exact);
  CHECK(counters(c) == std::vector<Value>{1, 0, 0});
  // A processor whose guard fails changes nothing.
  proto_step(p, c, 2, resolve_exact);
  CHECK(counters(c) == std::vector<Value>{1, 0, 0});
  proto_step(p, c, 1, resolve_exact);
  CHECK(counters(c) == std::vector<Value>{1, 1, 0});
}

TEST_CASE("regular-bot distinguished cycle: increment, separator, value") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  Configuration c = p.initial_configuration();
  // read-begin, read-end (quiescent 0 = own counter)
  drive(p, c, 0, 2);
  CHECK(c.procs[0].t == 0);
  // test fires the increment
  drive(p, c, 0, 1);
  CHECK(c.procs[0].x == 1);
  CHECK(c.procs[0].pc == 3);
  // separator write
  drive(p, c, 0, 2);
  CHECK(c.regs[1].committed() == kBot);
  // value write
  drive(p, c, 0, 2);
  CHECK(c.regs[1].committed() == 1);
  CHECK(c.procs[0].pc == 0);
}

TEST_CASE("regular-bot guard failure republishes without separator") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  Configuration c = p.configuration_from_counters({1, 0, 0});
  // p1 reads 0 (written by p3) != x1: else branch, plain write of x1.
  drive(p, c, 0, 3);
  CHECK(c.procs[0].pc == 7);
  drive(p, c, 0, 2);
  CHECK(c.regs[1].committed() == 1);
  CHECK(c.procs[0].x == 1);
}

TEST_CASE("resolved separator is never adopted") {
  Protocol p = make_protocol(ProtocolKind::NaiveRegular, 3);
  Configuration c = p.configuration_from_counters({1, 0, 0}, {{"-", "1", "0"}});
  // p1's input r1 holds the separator; reading it must not increment.
  drive(p, c, 0, 3);
  CHECK(c.procs[0].t == kBot);
  CHECK(c.procs[0].x == 1);
  CHECK(c.procs[0].pc == 7);  // straight to the republish branch
}

TEST_CASE("safe-unary full cycle keeps a consistent ring consistent") {
  Protocol p = make_protocol(ProtocolKind::SafeUnary, 3);
  Configuration c = p.initial_configuration();
  // One full cycle of p2: 7 refresh iterations (read+test), 7 scan
  // iterations (read+test), one decision. Nothing should change.
  int refresh_steps = 7 * 3;  // no writes needed: register agrees
  int scan_steps = 7 * 3;
  drive(p, c, 1, refresh_steps + scan_steps + 1);
  CHECK(c.procs[1].pc == 0);
  CHECK(c.procs[1].x == 0);
  CHECK(c.procs[1].s == 1);
  CHECK(c.procs[1].j == 0);
}

TEST_CASE("safe-unary counter change rewrites exactly two registers") {
  Protocol p = make_protocol(ProtocolKind::SafeUnary, 3);
  Configuration c = p.initial_configuration();
  drive(p, c, 0, 7 * 3 + 7 * 3 + 1);
  CHECK(c.procs[0].x == 1);  // read its own value echoed: s=1, j=x
  // Second cycle: refresh clears the old index and sets the new one —
  // two writes, nothing else.
  int writes = 0;
  int second_cycle = 7 * 3 + 2 * 2 + 7 * 3 + 1;
  for (int i = 0; i < second_cycle; ++i) {
    StepInfo info = proto_step(p, c, 0, resolve_exact);
    if (info.kind == StepKind::WriteBegin) ++writes;
  }
  CHECK(writes == 2);
  CHECK(c.procs[0].pc == 0);
  CHECK(c.procs[0].k == 0);
  CHECK(c.regs[size_t(p.out_base(0) + 0)].committed() == 0);
  CHECK(c.regs[size_t(p.out_base(0) + 1)].committed() == 1);
  CHECK(c.procs[0].x == 1);  // scan saw the stale input: no increment
}

TEST_CASE("safe-gray copies through the buffer and decodes") {
  Protocol p = make_protocol(ProtocolKind::SafeGray, 3);
  Configuration c = p.initial_configuration();
  // Publish counter 5 on p1's output by hand, then let p2 scan it.
  auto enc = p.encoded_block(5);
  for (int k = 0; k <= p.m; ++k)
    c.regs[size_t(p.in_base(1) + k)].set_committed(enc[size_t(k)]);
  // p2: refresh pass (m+1 read/test pairs), scan pass, decide.
  drive(p, c, 1, (p.m + 1) * 3 + (p.m + 1) * 2 + 1);
  CHECK(c.procs[1].x == 5);
}

TEST_CASE("safe-gray parity mismatch discards the scan") {
  Protocol p = make_protocol(ProtocolKind::SafeGray, 3);
  Configuration c = p.initial_configuration();
  auto enc = p.encoded_block(5);
  enc[size_t(p.m)] = 1 - enc[size_t(p.m)];  // break the parity bit
  for (int k = 0; k <= p.m; ++k)
    c.regs[size_t(p.in_base(1) + k)].set_committed(enc[size_t(k)]);
  drive(p, c, 1, (p.m + 1) * 3 + (p.m + 1) * 2 + 1);
  CHECK(c.procs[1].x == 0);
}

TEST_CASE("composite update publishes through the guard window") {
  Protocol p = make_protocol(ProtocolKind::CompositeSafe, 3);
  Configuration c = p.initial_configuration();
  // p1's input holds its own value, so p1 increments and runs the update
  // sequence on its output: guard down, label bits, guard up.
  drive(p, c, 0, 3);
  CHECK(c.procs[0].x == 1);
  drive(p, c, 0, 2 * (p.fields + 3));
  CHECK(c.procs[0].pc == 0);
  auto want = composite_encode(1, 1, p.label_bits);
  CHECK(c.regs[1].committed_fields() == std::vector<Value>(want.begin(), want.end()));
  // p2 reads quiescently and adopts the label.
  drive(p, c, 1, 3);
  CHECK(c.procs[1].x == 1);
}

TEST_CASE("composite reader discards lowered guards and alien labels") {
  Protocol p = make_protocol(ProtocolKind::CompositeSafe, 3);
  auto token = [&](uint32_t label, int guard) {
    auto bits = composite_encode(label, guard, p.label_bits);
    std::string s;
    for (uint8_t b : bits) s += char('0' + b);
    return s;
  };
  // p2's input publishes label 3 with the guard down: ignored.
  Configuration c = p.configuration_from_counters(
      {0, 0, 0}, {{token(0, 1), token(3, 0), token(0, 1)}});
  drive(p, c, 1, 3);
  CHECK(c.procs[1].t == kBot);
  CHECK(c.procs[1].x == 0);
  // A label outside [0,K) is ignored even with the guard up.
  Configuration d = p.configuration_from_counters(
      {0, 0, 0}, {{token(0, 1), token(7, 1), token(0, 1)}});
  drive(p, d, 1, 3);
  CHECK(d.procs[1].t == kBot);
  CHECK(d.procs[1].x == 0);
}

TEST_CASE("dijkstra-rw alternates internal moves and register copies") {
  Protocol p = make_protocol(ProtocolKind::DijkstraRw, 3);
  Configuration c = p.initial_configuration();
  // Actor 0 = p1's read action: sees 0 == x1, increments.
  proto_step(p, c, 0, resolve_exact);
  CHECK(c.procs[0].x == 1);
  CHECK(c.regs[0].committed() == 0);
  // Actor 1 = p1's write action: publishes.
  proto_step(p, c, 1, resolve_exact);
  CHECK(c.regs[0].committed() == 1);
  // Actor 2 = p2's read action: adopts the published 1.
  proto_step(p, c, 2, resolve_exact);
  CHECK(c.procs[1].x == 1);
  // Virtual privilege: exactly one enabled node once all agree.
  Configuration legit = p.initial_configuration();
  auto priv = privileged(p, legit);
  CHECK(priv == std::vector<int>{1});
}
