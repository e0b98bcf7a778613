#include "doctest.h"
#include "ringlab/analysis.hpp"
#include "ringlab/scenario.hpp"

using namespace ringlab;

TEST_CASE("steps_to_legitimacy") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 3, 3);
  LegitimacyPredicate one{PredKind::ExactlyOnePrivileged};

  Schedule noop;
  noop.mode = ScheduleMode::CentralAdversary;
  Trace t0 = run(p, noop, p.configuration_from_counters({0, 0, 0}), 10);
  CHECK(steps_to_legitimacy(p, t0, one) == 0);

  // The five-step chain never becomes legitimate.
  Protocol p5 = make_protocol(ProtocolKind::DijkstraCentral, 5, 3);
  Schedule chain;
  chain.mode = ScheduleMode::CentralAdversary;
  chain.script = acts({1, 5, 4, 3, 2});
  Trace t1 = run(p5, chain, p5.configuration_from_counters({0, 0, 2, 1, 0}), 10);
  CHECK(steps_to_legitimacy(p5, t1, one) == kNever);

  // Round-robin over enabled processors from [1,0,2]: p2 moves first and
  // the ring is immediately down to one privilege.
  Schedule rr;
  rr.mode = ScheduleMode::CentralAdversary;
  rr.script = acts({2});
  Trace t2 = run(p, rr, p.configuration_from_counters({1, 0, 2}), 10);
  CHECK(steps_to_legitimacy(p, t2, one) == 1);
}

TEST_CASE("three labels on five processors admit an illegitimate cycle") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 5, 3);
  LegitimacyPredicate one{PredKind::ExactlyOnePrivileged};
  Verdict v = exhaustive_convergence(p, one);
  REQUIRE(v.kind == Verdict::Lasso);
  validate_lasso(p, one, v);
  // The certificate keeps all three labels alive in every configuration.
  for (const Configuration& c : v.cycle) CHECK(label_multiset(c).size() == 3);
  std::string json = verdict_json(v);
  CHECK(json.find("\"kind\":\"lasso\"") != std::string::npos);
  CHECK(json.find("\"cycle\":") != std::string::npos);
}

TEST_CASE("enough labels force convergence under any daemon") {
  LegitimacyPredicate one{PredKind::ExactlyOnePrivileged};
  for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 3}, {4, 4}}) {
    Protocol p = make_protocol(ProtocolKind::DijkstraCentral, n, k);
    Verdict v = exhaustive_convergence(p, one);
    CHECK(v.kind == Verdict::Converges);
    CHECK(v.steps > 0);
  }
}

TEST_CASE("read/write atomicity ring converges with 2n-1 labels") {
  Protocol p = make_protocol(ProtocolKind::DijkstraRw, 3);
  LegitimacyPredicate one{PredKind::ExactlyOnePrivileged};
  Verdict v = exhaustive_convergence(p, one);
  CHECK(v.kind == Verdict::Converges);
}

TEST_CASE("a convergence verdict agrees with random simulation") {
  LegitimacyPredicate one{PredKind::ExactlyOnePrivileged};
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 4, 4);
  Verdict v = exhaustive_convergence(p, one);
  REQUIRE(v.kind == Verdict::Converges);
  const uint64_t bound = 4 * 4 * 4 * 4 + 1;  // acyclic: one pass suffices
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Value> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(Value(rng.below(4)));
    Schedule sched;
    sched.mode = ScheduleMode::CentralRandom;
    sched.seed = 1000 + uint64_t(trial);
    Trace t = run(p, sched, p.configuration_from_counters(xs), bound);
    CHECK(steps_to_legitimacy(p, t, one) != kNever);
  }
}

TEST_CASE("state-space bound raises a resource error") {
  Protocol p = make_protocol(ProtocolKind::DijkstraCentral, 5, 5);
  CHECK_THROWS_AS(exhaustive_convergence(p, {PredKind::ExactlyOnePrivileged}, 100),
                  ResourceError);
}

TEST_CASE("sampled legitimate configurations hold one privilege") {
  for (ProtocolKind kind : {ProtocolKind::RegularBot, ProtocolKind::SafeUnary,
                            ProtocolKind::SafeGray, ProtocolKind::CompositeSafe}) {
    Protocol p = make_protocol(kind, 3);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      Configuration c = random_legitimate_configuration(p, rng);
      CHECK(privileged(p, c).size() == 1);
    }
  }
}

TEST_CASE("random configurations are well formed and replayable") {
  for (ProtocolKind kind : {ProtocolKind::RegularBot, ProtocolKind::SafeUnary,
                            ProtocolKind::SafeGray, ProtocolKind::CompositeSafe}) {
    Protocol p = make_protocol(kind, 3);
    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
      Configuration c = random_configuration(p, rng);
      Schedule sched;
      sched.mode = ScheduleMode::FineRandom;
      sched.seed = uint64_t(i);
      Engine eng(p, c, sched);
      for (int s = 0; s < 200; ++s) eng.step();  // must not throw
    }
  }
}

TEST_CASE("closure holds for the unary encoding from legitimate starts") {
  Protocol p = make_protocol(ProtocolKind::SafeUnary, 3);
  ClosureReport r = closure_check(p, {PredKind::ExactlyOnePrivileged}, 50, 3000, 77);
  CHECK(r.ok());
  CHECK(r.trials == 50);
}

TEST_CASE("closure holds for the separator protocol from legitimate starts") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  ClosureReport r = closure_check(p, {PredKind::ExactlyOnePrivileged}, 50, 3000, 78);
  CHECK(r.ok());
}

TEST_CASE("closure check is deterministic across job counts") {
  Protocol p = make_protocol(ProtocolKind::SafeUnary, 3);
  ClosureReport a = closure_check(p, {PredKind::ExactlyOnePrivileged}, 20, 1000, 5, 1);
  ClosureReport b = closure_check(p, {PredKind::ExactlyOnePrivileged}, 20, 1000, 5, 4);
  CHECK(a.violations == b.violations);
}

TEST_CASE("probe detects convergence of the separator protocol") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    Configuration c = random_configuration(p, rng);
    ConvergenceProbe probe = probe_convergence(p, c, 200000, 5000, 900 + uint64_t(i));
    CHECK(probe.converged);
  }
}

TEST_CASE("empirical fraction is exact for always-correct reads") {
  double f = empirical_legit_fraction(3, 1.0, 20000, 80, 3);
  CHECK(f == 1.0);
}

TEST_CASE("empirical fraction is stable under doubling the run") {
  for (double p : {1.0, 0.75, 0.5, 0.25}) {
    double half = empirical_legit_fraction(3, p, 500000, 80, 41);
    double full = empirical_legit_fraction(3, p, 1000000, 80, 42);
    CHECK(std::abs(full - half) < 0.005);
  }
}

TEST_CASE("safe-configuration predicate for the separator protocol") {
  Protocol p = make_protocol(ProtocolKind::RegularBot, 3);
  CHECK(is_safe_configuration(p, p.initial_configuration()));
  CHECK_FALSE(is_safe_configuration(p, p.configuration_from_counters({1, 0, 0})));
  // Same counters but a register lagging behind: not safe.
  CHECK_FALSE(is_safe_configuration(
      p, p.configuration_from_counters({1, 1, 1}, {{"1", "1", "0"}})));
}
