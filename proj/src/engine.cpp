#include "ringlab/engine.hpp"

#include <algorithm>
#include <sstream>

namespace ringlab {

std::string to_string(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::CentralAdversary: return "central-adversary";
    case ScheduleMode::CentralRandom: return "central-random";
    case ScheduleMode::FairDaemon: return "fair-daemon";
    case ScheduleMode::FineAdversary: return "fine-adversary";
    case ScheduleMode::FineRandom: return "fine-random";
  }
  return "?";
}

std::optional<ScheduleMode> schedule_mode_from(const std::string& name) {
  for (ScheduleMode m : {ScheduleMode::CentralAdversary, ScheduleMode::CentralRandom,
                         ScheduleMode::FairDaemon, ScheduleMode::FineAdversary,
                         ScheduleMode::FineRandom}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

Engine::Engine(Protocol proto, Configuration init, Schedule sched)
    : proto_(std::move(proto)), config_(std::move(init)), sched_(std::move(sched)),
      rng_(sched_.seed) {
  bool central = sched_.mode == ScheduleMode::CentralAdversary ||
                 sched_.mode == ScheduleMode::CentralRandom ||
                 sched_.mode == ScheduleMode::FairDaemon;
  if (central && !proto_.coarse())
    throw ConfigError("central daemons drive coarse protocols only");
  if (!central && proto_.coarse())
    throw ConfigError("fine-grained schedules drive register protocols only");
}

int Engine::pick_actor() {
  const int actors = proto_.actor_count();
  switch (sched_.mode) {
    case ScheduleMode::FairDaemon:
    case ScheduleMode::FineRandom:
      return int(rng_.below(uint64_t(actors)));
    case ScheduleMode::CentralRandom: {
      std::vector<int> enabled;
      for (int a = 0; a < actors; ++a)
        if (proto_.enabled(config_, a)) enabled.push_back(a);
      if (enabled.empty()) throw EngineError("no enabled actor (deadlock?)");
      return enabled[size_t(rng_.below(enabled.size()))];
    }
    case ScheduleMode::CentralAdversary:
    case ScheduleMode::FineAdversary: {
      if (script_pos_ >= sched_.script.size()) return -1;
      current_directive_ = &sched_.script[script_pos_++];
      int a = current_directive_->actor;
      if (a < 0 || a >= actors)
        throw ScenarioError("script names actor p" + std::to_string(a + 1) +
                            " outside the ring");
      if (sched_.mode == ScheduleMode::CentralAdversary && !proto_.enabled(config_, a))
        throw ScenarioError("script activates disabled actor p" + std::to_string(a + 1));
      return a;
    }
  }
  throw EngineError("unknown schedule mode");
}

Resolution Engine::resolve(const ReadContext& ctx) {
  switch (sched_.mode) {
    case ScheduleMode::CentralAdversary:
    case ScheduleMode::CentralRandom:
      return resolve_exact(ctx);
    case ScheduleMode::FairDaemon: {
      Resolution r;
      r.v = resolve_read(ctx.domain, ResolvePolicy::CorrectWithP, std::nullopt, ctx.correct,
                         sched_.p_correct, &rng_);
      return r;
    }
    case ScheduleMode::FineRandom: {
      Resolution r;
      if (ctx.composite) {
        r.bits = ctx.view.baseline;
        size_t options = 1 + 2 * ctx.view.corruptible.size();
        size_t pick = size_t(rng_.below(options));
        if (pick > 0) {
          int field = ctx.view.corruptible[(pick - 1) / 2];
          r.bits[size_t(field)] = Value((pick - 1) % 2);
        }
      } else {
        r.v = resolve_read(ctx.legal, ResolvePolicy::UniformRandom, std::nullopt, ctx.correct,
                           1.0, &rng_);
      }
      return r;
    }
    case ScheduleMode::FineAdversary: {
      const Directive* d = current_directive_;
      if (!d) throw EngineError("resolution outside a scripted step");
      if (d->type == Directive::Resolve) {
        if (d->reg >= 0 && d->reg != ctx.reg)
          throw ScenarioError("resolve names register r" + std::to_string(d->reg + 1) +
                              " but the read is on r" + std::to_string(ctx.reg + 1));
        if (ctx.composite) {
          if (d->res.bits.empty()) throw ScenarioError("composite read needs a bit vector");
          Resolution r;
          r.bits.assign(d->res.bits.begin(), d->res.bits.end());
          return r;
        }
        Resolution r;
        r.v = resolve_read(ctx.legal, ResolvePolicy::AdversaryChoice, d->res.v, ctx.correct,
                           1.0, &rng_);
        return r;
      }
      // A bare act may complete a read only when there is no choice.
      if (ctx.composite) {
        if (!ctx.view.corruptible.empty())
          throw ScenarioError("ambiguous composite read needs an explicit resolve");
        Resolution r;
        r.bits = ctx.view.baseline;
        return r;
      }
      if (ctx.legal.size() != 1)
        throw ScenarioError("ambiguous read needs an explicit resolve");
      Resolution r;
      r.v = ctx.legal[0];
      return r;
    }
  }
  throw EngineError("unknown schedule mode");
}

bool Engine::step(TraceEvent* ev) {
  int actor = pick_actor();
  if (actor < 0) return false;  // script exhausted

  if (sched_.mode == ScheduleMode::FineAdversary && current_directive_ &&
      current_directive_->type == Directive::Resolve) {
    StepInfo next = proto_.peek(config_, actor);
    if (next.kind != StepKind::ReadEnd)
      throw ScenarioError("resolve directive but p" + std::to_string(actor + 1) +
                          " is not ending a read");
  }

  Resolution res;
  bool resolved = false;
  StepInfo info = proto_step(proto_, config_, actor, [&](const ReadContext& ctx) {
    res = resolve(ctx);
    resolved = true;
    return res;
  });
  ++steps_;

  if (ev) {
    ev->tick = config_.tick;
    ev->actor = actor;
    ev->kind = info.kind;
    ev->reg = info.reg;
    ev->field = info.field;
    ev->value = info.value;
    ev->bits.clear();
    if (resolved) {
      // Record what the read returned so traces replay exactly.
      if (res.bits.empty())
        ev->value = res.v;
      else
        ev->bits.assign(res.bits.begin(), res.bits.end());
    }
  }
  current_directive_ = nullptr;
  return true;
}

namespace {

std::string render_bits(const std::vector<uint8_t>& bits) {
  std::string s;
  for (uint8_t b : bits) s += char('0' + b);
  return s;
}

}  // namespace

std::string render(const Trace& t) {
  std::ostringstream os;
  os << "protocol=" << t.protocol << " n=" << t.n << " k=" << t.K << " seed=" << t.seed
     << "\n";
  os << "init " << render(t.init) << "\n";
  for (const TraceEvent& e : t.events) {
    os << e.tick << " ";
    switch (e.kind) {
      case StepKind::WriteBegin:
        os << "W+ p" << (e.actor + 1) << " r" << (e.reg + 1);
        if (e.field >= 0) os << "." << e.field;
        os << " " << (e.value == kBot ? std::string("-") : std::to_string(e.value));
        break;
      case StepKind::WriteEnd:
        os << "W- p" << (e.actor + 1) << " r" << (e.reg + 1);
        break;
      case StepKind::ReadBegin:
        os << "R+ p" << (e.actor + 1) << " r" << (e.reg + 1);
        break;
      case StepKind::ReadEnd:
        os << "R p" << (e.actor + 1) << " r" << (e.reg + 1) << " -> "
           << (e.bits.empty()
                   ? (e.value == kBot ? std::string("-") : std::to_string(e.value))
                   : render_bits(e.bits));
        break;
      case StepKind::Internal:
        os << "S p" << (e.actor + 1);
        break;
      case StepKind::Guarded:
        os << "G p" << (e.actor + 1) << " -> "
           << (e.value == kBot ? std::string("-") : std::to_string(e.value));
        break;
    }
    os << "\n";
  }
  os << "final " << render(t.final_config) << "\n";
  return os.str();
}

Trace run(const Protocol& proto, const Schedule& sched, const Configuration& init,
          uint64_t budget) {
  Trace t;
  t.protocol = to_string(proto.kind);
  t.n = proto.n;
  t.K = proto.K;
  t.seed = sched.seed;
  t.init = init;

  Engine eng(proto, init, sched);
  for (uint64_t i = 0; i < budget; ++i) {
    TraceEvent ev;
    if (!eng.step(&ev)) break;
    t.events.push_back(std::move(ev));
  }
  t.final_config = eng.config();
  return t;
}

void replay(const Protocol& proto, const Trace& trace,
            const std::function<void(const Configuration&, const TraceEvent*)>& visit) {
  Configuration c = trace.init;
  visit(c, nullptr);
  for (const TraceEvent& e : trace.events) {
    proto_step(proto, c, e.actor, [&](const ReadContext& ctx) {
      Resolution r;
      if (ctx.composite) {
        r.bits.assign(e.bits.begin(), e.bits.end());
      } else {
        r.v = e.value;
      }
      return r;
    });
    visit(c, &e);
  }
}

std::vector<Directive> acts(const std::vector<int>& actors_1based) {
  std::vector<Directive> out;
  for (int a : actors_1based) {
    Directive d;
    d.type = Directive::Act;
    d.actor = a - 1;
    out.push_back(d);
  }
  return out;
}

}  // namespace ringlab
