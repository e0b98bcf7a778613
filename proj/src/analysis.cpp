#include "ringlab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

namespace ringlab {

uint64_t steps_to_legitimacy(const Protocol& proto, const Trace& trace,
                             const LegitimacyPredicate& pred) {
  uint64_t found = kNever;
  uint64_t index = 0;
  replay(proto, trace, [&](const Configuration& c, const TraceEvent*) {
    if (found == kNever && is_legitimate(proto, c, pred)) found = index;
    ++index;
  });
  return found;
}

namespace {

// Packs the coarse state spaces: counters for the central-daemon ring,
// counters plus registers for the read/write one.
struct CoarseCodec {
  explicit CoarseCodec(const Protocol& p) : proto(p) {
    digits = p.kind == ProtocolKind::DijkstraRw ? 2 * p.n : p.n;
    count = 1;
    for (int i = 0; i < digits; ++i) {
      if (count > UINT64_MAX / uint64_t(p.K)) throw ResourceError("state space overflow");
      count *= uint64_t(p.K);
    }
  }

  void decode(uint64_t idx, std::vector<Value>& out) const {
    out.resize(size_t(digits));
    for (int i = digits - 1; i >= 0; --i) {
      out[size_t(i)] = Value(idx % uint64_t(proto.K));
      idx /= uint64_t(proto.K);
    }
  }

  uint64_t encode(const Configuration& c) const {
    uint64_t idx = 0;
    for (int i = 0; i < proto.n; ++i) idx = idx * uint64_t(proto.K) + uint64_t(c.procs[size_t(i)].x);
    if (proto.kind == ProtocolKind::DijkstraRw)
      for (int i = 0; i < proto.n; ++i)
        idx = idx * uint64_t(proto.K) + uint64_t(c.regs[size_t(i)].committed());
    return idx;
  }

  Configuration config(uint64_t idx) const {
    std::vector<Value> vals;
    decode(idx, vals);
    std::vector<Value> xs(vals.begin(), vals.begin() + proto.n);
    if (proto.kind == ProtocolKind::DijkstraRw) {
      std::vector<std::string> regs;
      for (int i = 0; i < proto.n; ++i) regs.push_back(std::to_string(vals[size_t(proto.n + i)]));
      return proto.configuration_from_counters(xs, regs);
    }
    return proto.configuration_from_counters(xs);
  }

  bool all_labels(uint64_t idx) const {
    std::vector<Value> vals;
    decode(idx, vals);
    std::vector<bool> seen(size_t(proto.K), false);
    for (Value v : vals) seen[size_t(v)] = true;
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }

  const Protocol& proto;
  int digits = 0;
  uint64_t count = 0;
};

// Iterative DFS over the illegitimate subgraph, optionally restricted to
// a node mask. Returns the cycle + the DFS entry path if one exists.
bool find_illegit_cycle(const std::vector<std::vector<uint32_t>>& succ,
                        const std::vector<bool>& illegit, const std::vector<bool>* mask,
                        std::vector<uint32_t>* cycle, std::vector<uint32_t>* entry) {
  const uint32_t nstates = uint32_t(succ.size());
  std::vector<uint8_t> color(nstates, 0);  // 0 white, 1 on stack, 2 done
  std::vector<std::pair<uint32_t, uint32_t>> stack;  // node, next-edge
  auto in_scope = [&](uint32_t s) { return illegit[s] && (!mask || (*mask)[s]); };

  for (uint32_t root = 0; root < nstates; ++root) {
    if (!in_scope(root) || color[root] != 0) continue;
    stack.clear();
    stack.emplace_back(root, 0);
    color[root] = 1;
    while (!stack.empty()) {
      auto& [node, edge] = stack.back();
      if (edge < succ[node].size()) {
        uint32_t next = succ[node][edge++];
        if (!in_scope(next)) continue;
        if (color[next] == 1) {
          // Back edge: the stack from `next` onward is the cycle.
          size_t at = 0;
          while (stack[at].first != next) ++at;
          entry->clear();
          for (size_t i = 0; i < at; ++i) entry->push_back(stack[i].first);
          cycle->clear();
          for (size_t i = at; i < stack.size(); ++i) cycle->push_back(stack[i].first);
          return true;
        }
        if (color[next] == 0) {
          color[next] = 1;
          stack.emplace_back(next, 0);
        }
      } else {
        color[node] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace

Verdict exhaustive_convergence(const Protocol& proto, const LegitimacyPredicate& pred,
                               uint64_t state_bound) {
  if (!proto.coarse())
    throw ConfigError("exhaustive search handles the coarse protocols only");
  CoarseCodec codec(proto);
  if (codec.count > state_bound)
    throw ResourceError("state space " + std::to_string(codec.count) + " exceeds bound " +
                        std::to_string(state_bound));
  const uint32_t nstates = uint32_t(codec.count);
  const int actors = proto.actor_count();

  std::vector<std::vector<uint32_t>> succ(nstates);
  std::vector<bool> illegit(nstates, false);
  for (uint32_t s = 0; s < nstates; ++s) {
    Configuration base = codec.config(s);
    illegit[s] = !is_legitimate(proto, base, pred);
    for (int a = 0; a < actors; ++a) {
      if (!proto.enabled(base, a)) continue;
      Configuration nxt = base;
      proto_step(proto, nxt, a, resolve_exact);
      succ[s].push_back(uint32_t(codec.encode(nxt)));
    }
    if (succ[s].empty()) throw InvariantViolation("deadlocked configuration found");
  }

  Verdict verdict;
  std::vector<uint32_t> cycle, entry;
  // Configurations keeping every label alive first; they are where
  // non-converging executions live when too few labels exist.
  std::vector<bool> mask(nstates, false);
  bool any_masked = false;
  if (proto.K <= codec.digits) {
    for (uint32_t s = 0; s < nstates; ++s) {
      mask[s] = codec.all_labels(s);
      any_masked = any_masked || mask[s];
    }
  }
  bool found = any_masked && find_illegit_cycle(succ, illegit, &mask, &cycle, &entry);
  if (!found) found = find_illegit_cycle(succ, illegit, nullptr, &cycle, &entry);

  if (found) {
    verdict.kind = Verdict::Lasso;
    for (uint32_t s : entry) verdict.entry.push_back(codec.config(s));
    for (uint32_t s : cycle) verdict.cycle.push_back(codec.config(s));
    return verdict;
  }

  // Acyclic: every illegitimate configuration drains into a legitimate
  // one. The longest path bounds the worst adversarial schedule.
  std::vector<int64_t> depth(nstates, -1);
  std::vector<std::pair<uint32_t, uint32_t>> stack;
  uint64_t worst = 0;
  for (uint32_t s0 = 0; s0 < nstates; ++s0) {
    if (!illegit[s0] || depth[s0] >= 0) continue;
    stack.emplace_back(s0, 0);
    while (!stack.empty()) {
      auto& [node, edge] = stack.back();
      if (!illegit[node]) {
        depth[node] = 0;
        stack.pop_back();
        continue;
      }
      if (edge < succ[node].size()) {
        uint32_t next = succ[node][edge++];
        if (depth[next] < 0 && illegit[next]) stack.emplace_back(next, 0);
      } else {
        int64_t best = 0;
        for (uint32_t next : succ[node])
          best = std::max(best, (illegit[next] ? depth[next] : 0) + 1);
        depth[node] = best;
        worst = std::max(worst, uint64_t(best));
        stack.pop_back();
      }
    }
  }
  verdict.kind = Verdict::Converges;
  verdict.steps = worst;
  return verdict;
}

void validate_lasso(const Protocol& proto, const LegitimacyPredicate& pred, const Verdict& v) {
  if (v.kind != Verdict::Lasso) throw InvariantViolation("verdict is not a lasso");
  if (v.cycle.empty()) throw InvariantViolation("empty cycle");
  auto check_edge = [&](const Configuration& from, const Configuration& to) {
    for (int a = 0; a < proto.actor_count(); ++a) {
      if (!proto.enabled(from, a)) continue;
      Configuration nxt = from;
      proto_step(proto, nxt, a, resolve_exact);
      bool same = true;
      for (int i = 0; i < proto.n && same; ++i)
        same = nxt.procs[size_t(i)].x == to.procs[size_t(i)].x;
      if (proto.kind == ProtocolKind::DijkstraRw)
        for (int i = 0; i < proto.n && same; ++i)
          same = nxt.regs[size_t(i)].committed() == to.regs[size_t(i)].committed();
      if (same) return;
    }
    throw InvariantViolation("cycle edge is not a legal protocol step");
  };
  for (const Configuration& c : v.cycle)
    if (is_legitimate(proto, c, pred))
      throw InvariantViolation("legitimate configuration on the cycle");
  for (size_t i = 0; i + 1 < v.entry.size(); ++i) check_edge(v.entry[i], v.entry[i + 1]);
  if (!v.entry.empty()) check_edge(v.entry.back(), v.cycle.front());
  for (size_t i = 0; i < v.cycle.size(); ++i)
    check_edge(v.cycle[i], v.cycle[(i + 1) % v.cycle.size()]);
}

std::string verdict_json(const Verdict& v) {
  std::ostringstream os;
  auto list = [&](const std::vector<Configuration>& cs) {
    os << "[";
    for (size_t i = 0; i < cs.size(); ++i) os << (i ? "," : "") << "\"" << render(cs[i]) << "\"";
    os << "]";
  };
  os << "{\"kind\":\"";
  switch (v.kind) {
    case Verdict::Converges: os << "converges"; break;
    case Verdict::Lasso: os << "lasso"; break;
    case Verdict::Timeout: os << "timeout"; break;
  }
  os << "\"";
  if (v.kind == Verdict::Converges) os << ",\"steps\":" << v.steps;
  if (v.kind == Verdict::Lasso) {
    os << ",\"cycle\":";
    list(v.cycle);
    os << ",\"entry\":";
    list(v.entry);
  }
  os << "}";
  return os.str();
}

Configuration random_configuration(const Protocol& proto, Rng& rng) {
  std::vector<Value> xs;
  for (int i = 0; i < proto.n; ++i) xs.push_back(Value(rng.below(uint64_t(proto.K))));
  std::optional<std::vector<std::string>> regs;
  if (proto.kind != ProtocolKind::DijkstraCentral) {
    std::vector<std::string> toks;
    for (int link = 0; link < proto.n; ++link) {
      if (proto.kind == ProtocolKind::DijkstraRw) {
        toks.push_back(std::to_string(rng.below(uint64_t(proto.K))));
      } else if (proto.regs_per_link == 1 && proto.kind != ProtocolKind::CompositeSafe) {
        // Scalar link register: any label or the separator value.
        uint64_t v = rng.below(uint64_t(proto.K) + 1);
        toks.push_back(v == uint64_t(proto.K) ? "-" : std::to_string(v));
      } else {
        int bits = proto.kind == ProtocolKind::CompositeSafe ? proto.fields : proto.regs_per_link;
        std::string s;
        for (int b = 0; b < bits; ++b) s += char('0' + rng.below(2));
        toks.push_back(s);
      }
    }
    regs = toks;
  }
  Configuration c = proto.configuration_from_counters(xs, regs);

  // Scratch state and resumable program counters are part of an
  // arbitrary initial configuration too.
  auto pick = [&](std::initializer_list<int> pcs) {
    std::vector<int> v(pcs);
    return v[size_t(rng.below(v.size()))];
  };
  for (int i = 0; i < proto.n; ++i) {
    ProcState& ps = c.procs[size_t(i)];
    switch (proto.kind) {
      case ProtocolKind::DijkstraCentral:
      case ProtocolKind::DijkstraRw:
        break;
      case ProtocolKind::NaiveRegular:
      case ProtocolKind::NaiveSafe:
      case ProtocolKind::RegularBot: {
        ps.pc = pick({0, 2, 3, 5, 7});
        uint64_t t = rng.below(uint64_t(proto.K) + 1);
        ps.t = t == uint64_t(proto.K) ? kBot : Value(t);
        break;
      }
      case ProtocolKind::SafeUnary:
        ps.pc = pick({0, 2, 3, 5, 7, 8});
        ps.k = int(rng.below(uint64_t(proto.K)));
        ps.s = int(rng.below(3));
        ps.j = Value(rng.below(uint64_t(proto.K)));
        ps.t = Value(rng.below(2));
        break;
      case ProtocolKind::SafeGray:
        ps.pc = pick({0, 2, 3, 5, 8});
        ps.k = int(rng.below(uint64_t(proto.m) + 1));
        ps.t = Value(rng.below(2));
        for (auto& b : ps.g) b = uint8_t(rng.below(2));
        break;
      case ProtocolKind::CompositeSafe: {
        ps.pc = pick({0, 2, 3, 5});
        ps.k = int(rng.below(uint64_t(proto.fields + 3)));
        ps.s = int(rng.below(uint64_t(proto.fields)));
        uint64_t t = rng.below(uint64_t(proto.K) + 1);
        ps.t = t == uint64_t(proto.K) ? kBot : Value(t);
        break;
      }
    }
  }
  return c;
}

Configuration random_legitimate_configuration(const Protocol& proto, Rng& rng) {
  Value v = Value(rng.below(uint64_t(proto.K)));
  Value w = (v + 1) % proto.K;
  int front = int(rng.below(uint64_t(proto.n)));  // 0 = all equal
  std::vector<Value> xs(size_t(proto.n), v);
  for (int i = 0; i < front; ++i) xs[size_t(i)] = w;
  Configuration c = proto.configuration_from_counters(xs);
  if (privileged(proto, c).size() != 1)
    throw InvariantViolation("sampled configuration is not legitimate");
  return c;
}

ClosureReport closure_check(const Protocol& proto, const LegitimacyPredicate& pred, int trials,
                            uint64_t budget, uint64_t seed, int jobs) {
  ClosureReport report;
  report.trials = trials;
  std::mutex mu;
  jobs = std::max(1, jobs);

  auto run_trial = [&](int trial) {
    Rng sample_rng(seed * 0x9e3779b97f4a7c15ULL + uint64_t(trial));
    Configuration init = random_legitimate_configuration(proto, sample_rng);
    Schedule sched;
    sched.mode = ScheduleMode::FineRandom;
    sched.seed = seed + uint64_t(trial) + 1;
    Engine eng(proto, init, sched);
    for (uint64_t step = 1; step <= budget; ++step) {
      eng.step();
      if (!is_legitimate(proto, eng.config(), pred)) {
        std::lock_guard<std::mutex> lock(mu);
        ++report.violations;
        if (report.first_violation_trial < 0 || trial < report.first_violation_trial) {
          report.first_violation_trial = trial;
          report.first_violation_step = step;
          report.detail = "trial " + std::to_string(trial) + " step " + std::to_string(step) +
                          ": " + render(eng.config());
        }
        return;
      }
    }
  };

  if (jobs == 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next(0);
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (int t = next++; t < trials; t = next++) run_trial(t);
      });
    for (auto& th : pool) th.join();
  }
  if (!report.ok()) {
    // Reconstruct the offending execution so the report carries a
    // replayable trace, not just a description.
    int trial = report.first_violation_trial;
    Rng sample_rng(seed * 0x9e3779b97f4a7c15ULL + uint64_t(trial));
    Configuration init = random_legitimate_configuration(proto, sample_rng);
    Schedule sched;
    sched.mode = ScheduleMode::FineRandom;
    sched.seed = seed + uint64_t(trial) + 1;
    report.violation = run(proto, sched, init, report.first_violation_step);
  }
  return report;
}

ConvergenceProbe probe_convergence(const Protocol& proto, const Configuration& init,
                                   uint64_t budget, uint64_t window, uint64_t seed) {
  Schedule sched;
  sched.mode = ScheduleMode::FineRandom;
  sched.seed = seed;
  Engine eng(proto, init, sched);
  ConvergenceProbe probe;
  LegitimacyPredicate pred{PredKind::ExactlyOnePrivileged};
  if (!is_legitimate(proto, init, pred)) probe.last_violation = 0;
  for (uint64_t step = 1; step <= budget; ++step) {
    eng.step();
    if (!is_legitimate(proto, eng.config(), pred)) probe.last_violation = step;
    probe.steps_run = step;
    if (step - probe.last_violation >= window) {
      probe.converged = true;
      return probe;
    }
  }
  return probe;
}

double empirical_legit_fraction(int n, double p, uint64_t steps, uint64_t burn_in,
                                uint64_t seed) {
  if (steps <= burn_in) throw ConfigError("need more steps than burn-in");
  Protocol proto = make_protocol(ProtocolKind::DijkstraCentral, n, 2);
  Schedule sched;
  sched.mode = ScheduleMode::FairDaemon;
  sched.seed = seed;
  sched.p_correct = p;
  Engine eng(proto, proto.initial_configuration(), sched);
  LegitimacyPredicate pred{n == 3 ? PredKind::MarkovNot010_101 : PredKind::ExactlyOnePrivileged};
  uint64_t legit = 0;
  for (uint64_t i = 1; i <= steps; ++i) {
    eng.step();
    if (i > burn_in && is_legitimate(proto, eng.config(), pred)) ++legit;
  }
  return double(legit) / double(steps - burn_in);
}

}  // namespace ringlab
