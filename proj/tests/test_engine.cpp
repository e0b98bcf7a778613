#include "doctest.h"
#include "ringlab/analysis.hpp"
#include "ringlab/engine.hpp"

using namespace ringlab;

namespace {

std::vector<Value> counters(const Configuration& c) {
  std::vector<Value> xs;
  for (const ProcState& p : c.procs) xs.push_back(p.x);
  return xs;
}

}  // namespace

TEST_CASE("scripted central run follows the script") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 3, 3);
  Schedule sched;
  sched.mode = ScheduleMode::CentralAdversary;
  sched.script = acts({1});
  Trace t = run(p, sched, p.configuration_from_counters({0, 0, 0}), 100);
  CHECK(t.events.size() == 1);
  CHECK(counters(t.final_config) == std::vector<Value>{1, 0, 0});
}

TEST_CASE("the five-step counter chain") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 5, 3);
  Schedule sched;
  sched.mode = ScheduleMode::CentralAdversary;
  sched.script = acts({1, 5, 4, 3, 2});
  Configuration init = p.configuration_from_counters({0, 0, 2, 1, 0});
  Engine eng(p, init, sched);
  std::vector<std::vector<Value>> seen;
  while (eng.step()) seen.push_back(counters(eng.config()));
  std::vector<std::vector<Value>> expect = {{1, 0, 2, 1, 0},
                                            {1, 0, 2, 1, 1},
                                            {1, 0, 2, 2, 1},
                                            {1, 0, 0, 2, 1},
                                            {1, 1, 0, 2, 1}};
  CHECK(seen == expect);
}

TEST_CASE("activating a disabled actor under the adversary daemon fails") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 3, 3);
  Schedule sched;
  sched.mode = ScheduleMode::CentralAdversary;
  sched.script = acts({2});  // p2 has no privilege in the all-equal ring
  Engine eng(p, p.configuration_from_counters({0, 0, 0}), sched);
  CHECK_THROWS_AS(eng.step(), ScenarioError);

  Schedule bad;
  bad.mode = ScheduleMode::CentralAdversary;
  bad.script = acts({9});
  Engine eng2(p, p.configuration_from_counters({0, 0, 0}), bad);
  CHECK_THROWS_AS(eng2.step(), ScenarioError);
}

TEST_CASE("identical seeds give byte-identical traces") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  Schedule sched;
  sched.mode = ScheduleMode::FineRandom;
  sched.seed = 7;
  Trace a = run(p, sched, p.initial_configuration(), 5000);
  Trace b = run(p, sched, p.initial_configuration(), 5000);
  CHECK(render(a) == render(b));
  Schedule other = sched;
  other.seed = 8;
  Trace c = run(p, other, p.initial_configuration(), 5000);
  CHECK(render(a) != render(c));
}

TEST_CASE("fair daemon activates every processor at rate 1/n") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 3, 2);
  Schedule sched;
  sched.mode = ScheduleMode::FairDaemon;
  sched.seed = 42;
  Engine eng(p, p.initial_configuration(), sched);
  std::vector<int> hits(3, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    TraceEvent ev;
    eng.step(&ev);
    hits[size_t(ev.actor)]++;
  }
  for (int z = 0; z < 3; ++z)
    CHECK(std::abs(double(hits[size_t(z)]) / draws - 1.0 / 3) < 0.01);
}

TEST_CASE("trace rendering uses the register event grammar") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  Schedule sched;
  sched.mode = ScheduleMode::FineAdversary;
  sched.script = acts({1, 1, 1, 1, 1, 1, 1});
  Trace t = run(p, sched, p.initial_configuration(), 100);
  std::string text = render(t);
  CHECK(text.find("R+ p1 r1") != std::string::npos);
  CHECK(text.find("R p1 r1 -> 0") != std::string::npos);
  CHECK(text.find("W+ p1 r2 -") != std::string::npos);  // separator write
  CHECK(text.find("W- p1 r2") != std::string::npos);
  CHECK(text.find("final x=[1,0,0]") != std::string::npos);
}

TEST_CASE("replay reproduces the final configuration") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 4);
  Schedule sched;
  sched.mode = ScheduleMode::FineRandom;
  sched.seed = 123;
  Trace t = run(p, sched, p.initial_configuration(), 2000);
  Configuration last = t.init;
  replay(p, t, [&](const Configuration& c, const TraceEvent*) { last = c; });
  CHECK(render(last) == render(t.final_config));
  CHECK(same_state(last, t.final_config));
}

TEST_CASE("an ambiguous read requires an explicit resolution") {
  Protocol p = make_protocol(ProtocolKind::NaiveRegular, 3);
  Schedule sched;
  sched.mode = ScheduleMode::FineAdversary;
  // p1 write-begins, then p2 read-begins and tries to read-end with a
  // bare act while old and new values are both legal.
  sched.script = acts({1, 1, 1, 1, 2, 2});
  Engine eng(p, p.initial_configuration(), sched);
  for (int i = 0; i < 5; ++i) eng.step();
  CHECK_THROWS_AS(eng.step(), ScenarioError);
}

TEST_CASE("budget zero yields an empty trace") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  Schedule sched;
  sched.mode = ScheduleMode::FineRandom;
  sched.seed = 1;
  Trace t = run(p, sched, p.initial_configuration(), 0);
  CHECK(t.events.empty());
  CHECK(render(t.final_config) == render(t.init));
}
