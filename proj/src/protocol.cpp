#include "ringlab/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace ringlab {

std::string to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::DijkstraCentral: return "dijkstra-central";
    case ProtocolKind::DijkstraRw: return "dijkstra-rw";
    case ProtocolKind::NaiveRegular: return "naive-regular";
    case ProtocolKind::NaiveSafe: return "naive-safe";
    case ProtocolKind::RegularBot: return "regular-bot";
    case ProtocolKind::SafeUnary: return "safe-unary";
    case ProtocolKind::SafeGray: return "safe-gray";
    case ProtocolKind::CompositeSafe: return "composite-safe";
  }
  return "?";
}

std::optional<ProtocolKind> protocol_kind_from(const std::string& name) {
  for (ProtocolKind k :
       {ProtocolKind::DijkstraCentral, ProtocolKind::DijkstraRw, ProtocolKind::NaiveRegular,
        ProtocolKind::NaiveSafe, ProtocolKind::RegularBot, ProtocolKind::SafeUnary,
        ProtocolKind::SafeGray, ProtocolKind::CompositeSafe}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

int ceil_log2(int v) {
  int m = 0;
  while ((1 << m) < v) ++m;
  return m;
}

}  // namespace

Protocol make_protocol(ProtocolKind kind, int n, std::optional<int> k_override,
                       bool paper_label_width) {
  if (n < 2) throw ConfigError("ring size must be at least 2");
  Protocol p;
  p.kind = kind;
  p.n = n;
  switch (kind) {
    case ProtocolKind::DijkstraCentral:
      p.K = k_override.value_or(n);
      if (p.K < 2) throw ConfigError("at least two labels required");
      p.regs_per_link = 1;
      break;
    case ProtocolKind::DijkstraRw:
      p.K = 2 * n - 1;
      break;
    case ProtocolKind::NaiveRegular:
    case ProtocolKind::NaiveSafe:
    case ProtocolKind::RegularBot:
      p.K = 2 * n + 1;
      break;
    case ProtocolKind::SafeUnary:
      p.K = 2 * n + 1;
      p.regs_per_link = p.K;
      break;
    case ProtocolKind::SafeGray:
      // A counter modulus of 2^m keeps every cyclic counter transition a
      // single-bit Gray change, including the wrap.
      p.m = ceil_log2(2 * n + 1);
      p.K = 1 << p.m;
      p.regs_per_link = p.m + 1;
      break;
    case ProtocolKind::CompositeSafe:
      p.K = 2 * n + 1;
      p.label_bits = paper_label_width ? 2 * (n + 1) : ceil_log2(2 * n + 1);
      p.fields = 3 + 3 * p.label_bits;
      break;
  }
  if (k_override && kind != ProtocolKind::DijkstraCentral && *k_override != p.K)
    throw ConfigError("label count is fixed for " + to_string(kind));
  return p;
}

int Protocol::in_base(int proc) const {
  if (kind == ProtocolKind::DijkstraRw) return (proc - 1 + n) % n;
  return proc * regs_per_link;
}

int Protocol::out_base(int proc) const {
  if (kind == ProtocolKind::DijkstraRw) return proc;
  return ((proc + 1) % n) * regs_per_link;
}

int Protocol::link_writer(int link) const {
  if (kind == ProtocolKind::DijkstraRw) return link;
  return (link - 1 + n) % n;
}

std::vector<Value> Protocol::encoded_block(Value x) const {
  switch (kind) {
    case ProtocolKind::DijkstraCentral:
      return {};
    case ProtocolKind::DijkstraRw:
    case ProtocolKind::NaiveRegular:
    case ProtocolKind::NaiveSafe:
    case ProtocolKind::RegularBot:
      return {x};
    case ProtocolKind::SafeUnary: {
      std::vector<Value> bits(size_t(K), 0);
      bits[size_t(x)] = 1;
      return bits;
    }
    case ProtocolKind::SafeGray: {
      auto g = graycode_encode(uint32_t(x), m);
      std::vector<Value> bits(g.begin(), g.end());
      bits.push_back(parity(g));
      return bits;
    }
    case ProtocolKind::CompositeSafe: {
      auto bits = composite_encode(uint32_t(x), 1, label_bits);
      return std::vector<Value>(bits.begin(), bits.end());
    }
  }
  return {};
}

namespace {

RegisterSpec link_spec(const Protocol& p, int link) {
  RegisterSpec s;
  s.writer = p.link_writer(link);
  switch (p.kind) {
    case ProtocolKind::DijkstraRw:
      s.model = RegisterModel::Atomic;
      s.domain_size = p.K;
      s.readers = {(link + 1) % p.n};
      break;
    case ProtocolKind::NaiveRegular:
    case ProtocolKind::RegularBot:
      s.model = RegisterModel::Regular;
      s.domain_size = p.K;
      s.with_bot = true;
      s.readers = {link};
      break;
    case ProtocolKind::NaiveSafe:
      s.model = RegisterModel::Safe;
      s.domain_size = p.K;
      s.with_bot = true;
      s.readers = {link};
      break;
    case ProtocolKind::SafeUnary:
    case ProtocolKind::SafeGray:
      s.model = RegisterModel::Safe;
      s.domain_size = 2;
      s.readers = {link, s.writer};  // the writer reads its own output
      break;
    case ProtocolKind::CompositeSafe:
      s.model = RegisterModel::CompositeSafe;
      s.fields = p.fields;
      s.readers = {link};
      break;
    default:
      throw ConfigError("protocol has no registers");
  }
  return s;
}

}  // namespace

Configuration Protocol::initial_configuration() const {
  std::vector<Value> xs(size_t(n), 0);
  return configuration_from_counters(xs);
}

Configuration Protocol::configuration_from_counters(
    const std::vector<Value>& xs, const std::optional<std::vector<std::string>>& reg_tokens,
    const std::optional<std::vector<int>>& pcs) const {
  if (int(xs.size()) != n) throw ShapeError("counter list has wrong length");
  Configuration c;
  c.regs_per_link = regs_per_link;
  c.procs.resize(size_t(n));
  c.inflight.assign(size_t(n), std::nullopt);
  for (int i = 0; i < n; ++i) {
    Value x = xs[size_t(i)];
    if (x < 0 || x >= K) throw RangeError("counter outside label domain");
    c.procs[size_t(i)].x = x;
    if (kind == ProtocolKind::SafeGray) c.procs[size_t(i)].g.assign(size_t(m), 0);
  }
  if (pcs) {
    if (int(pcs->size()) != n) throw ShapeError("pc list has wrong length");
    // Only positions with no operation pending can be restored from text.
    std::vector<int> allowed;
    switch (kind) {
      case ProtocolKind::DijkstraCentral:
      case ProtocolKind::DijkstraRw: allowed = {0}; break;
      case ProtocolKind::NaiveRegular:
      case ProtocolKind::NaiveSafe:
      case ProtocolKind::RegularBot: allowed = {0, 2, 3, 5, 7}; break;
      case ProtocolKind::SafeUnary: allowed = {0, 2, 3, 5, 7, 8}; break;
      case ProtocolKind::SafeGray: allowed = {0, 2, 3, 5, 8}; break;
      case ProtocolKind::CompositeSafe: allowed = {0, 2, 3, 5}; break;
    }
    for (int i = 0; i < n; ++i) {
      int pc = (*pcs)[size_t(i)];
      if (std::find(allowed.begin(), allowed.end(), pc) == allowed.end())
        throw ShapeError("pc " + std::to_string(pc) + " is not a resumable position");
      c.procs[size_t(i)].pc = pc;
    }
  }
  if (kind == ProtocolKind::DijkstraCentral) return c;

  if (reg_tokens && int(reg_tokens->size()) != n)
    throw ShapeError("register list has wrong length");
  for (int link = 0; link < n; ++link) {
    std::vector<Value> content;
    if (reg_tokens) {
      const std::string& tok = (*reg_tokens)[size_t(link)];
      if (kind == ProtocolKind::DijkstraRw || kind == ProtocolKind::NaiveRegular ||
          kind == ProtocolKind::NaiveSafe || kind == ProtocolKind::RegularBot) {
        content.push_back(tok == "-" ? kBot : Value(std::stol(tok)));
      } else {
        for (char ch : tok) {
          if (ch != '0' && ch != '1') throw ScenarioError("register bits must be 0/1");
          content.push_back(ch - '0');
        }
      }
    } else {
      content = encoded_block(xs[size_t(link_writer(link))]);
    }
    RegisterSpec spec = link_spec(*this, link);
    if (kind == ProtocolKind::CompositeSafe) {
      if (int(content.size()) != fields) throw ShapeError("composite register needs all fields");
      c.regs.emplace_back(spec, content);
    } else {
      if (int(content.size()) != regs_per_link)
        throw ShapeError("register block has wrong width");
      for (Value v : content) c.regs.emplace_back(spec, v);
    }
  }
  return c;
}

// --- micro-step tables ------------------------------------------------
//
// Bottom-separated regular family (pc):
//   0 read-begin(in) 1 read-end->t 2 test
//   3 write-begin(out:=bot) 4 write-end       (skipped by the naive kinds)
//   5 write-begin(out:=x) 6 write-end
//   7 write-begin(out:=x) 8 write-end         (guard failed: republish)
//
// Unary/Gray (pc): 0-4 refresh own output (read k, test, maybe write),
// 5-7 scan input, 8 decide.
//
// Composite (pc): 0-1 whole-register read, 2 test, 3-4 update sequence
// (guard down, label, guard up), 5-6 one-field refresh.

StepInfo Protocol::peek(const Configuration& c, int actor) const {
  if (actor < 0 || actor >= actor_count()) throw ShapeError("actor out of range");
  StepInfo info;
  if (kind == ProtocolKind::DijkstraCentral) {
    info.kind = StepKind::Guarded;
    info.needs_resolution = true;
    return info;
  }
  if (kind == ProtocolKind::DijkstraRw) {
    int z = actor / 2;
    info.kind = StepKind::Guarded;
    if (actor % 2 == 0) {  // read action
      info.reg = in_base(z);
      info.needs_resolution = true;
    }
    return info;
  }

  const ProcState& ps = c.procs[size_t(actor)];
  switch (kind) {
    case ProtocolKind::NaiveRegular:
    case ProtocolKind::NaiveSafe:
    case ProtocolKind::RegularBot: {
      switch (ps.pc) {
        case 0: info = {StepKind::ReadBegin, in_base(actor), -1, 0, false}; break;
        case 1: info = {StepKind::ReadEnd, in_base(actor), -1, 0, true}; break;
        case 2: info.kind = StepKind::Internal; break;
        case 3: info = {StepKind::WriteBegin, out_base(actor), -1, kBot, false}; break;
        case 5: case 7:
          info = {StepKind::WriteBegin, out_base(actor), -1, ps.x, false};
          break;
        case 4: case 6: case 8:
          info = {StepKind::WriteEnd, out_base(actor), -1, 0, false};
          break;
        default: throw EngineError("pc outside table");
      }
      return info;
    }
    case ProtocolKind::SafeUnary: {
      Value want = (ps.k == ps.x) ? 1 : 0;
      switch (ps.pc) {
        case 0: info = {StepKind::ReadBegin, out_base(actor) + ps.k, -1, 0, false}; break;
        case 1: info = {StepKind::ReadEnd, out_base(actor) + ps.k, -1, 0, true}; break;
        case 2: info.kind = StepKind::Internal; break;
        case 3: info = {StepKind::WriteBegin, out_base(actor) + ps.k, -1, want, false}; break;
        case 4: info = {StepKind::WriteEnd, out_base(actor) + ps.k, -1, 0, false}; break;
        case 5: info = {StepKind::ReadBegin, in_base(actor) + ps.k, -1, 0, false}; break;
        case 6: info = {StepKind::ReadEnd, in_base(actor) + ps.k, -1, 0, true}; break;
        case 7: case 8: info.kind = StepKind::Internal; break;
        default: throw EngineError("pc outside table");
      }
      return info;
    }
    case ProtocolKind::SafeGray: {
      auto want = [&]() -> Value {
        auto bits = graycode_encode(uint32_t(ps.x), m);
        return ps.k < m ? bits[size_t(ps.k)] : parity(bits);
      };
      switch (ps.pc) {
        case 0: info = {StepKind::ReadBegin, out_base(actor) + ps.k, -1, 0, false}; break;
        case 1: info = {StepKind::ReadEnd, out_base(actor) + ps.k, -1, 0, true}; break;
        case 2: info.kind = StepKind::Internal; break;
        case 3: info = {StepKind::WriteBegin, out_base(actor) + ps.k, -1, want(), false}; break;
        case 4: info = {StepKind::WriteEnd, out_base(actor) + ps.k, -1, 0, false}; break;
        case 5: info = {StepKind::ReadBegin, in_base(actor) + ps.k, -1, 0, false}; break;
        case 6: info = {StepKind::ReadEnd, in_base(actor) + ps.k, -1, 0, true}; break;
        case 8: info.kind = StepKind::Internal; break;
        default: throw EngineError("pc outside table");
      }
      return info;
    }
    case ProtocolKind::CompositeSafe: {
      auto enc_bit = [&](int field, Value x) -> Value {
        if (field < 3) return 1;
        int b = (field - 3) / 3;
        return (x >> (label_bits - 1 - b)) & 1;
      };
      switch (ps.pc) {
        case 0: info = {StepKind::ReadBegin, in_base(actor), -1, 0, false}; break;
        case 1: info = {StepKind::ReadEnd, in_base(actor), -1, 0, true}; break;
        case 2: info.kind = StepKind::Internal; break;
        case 3: {
          // Update sequence position k: guard to 0, label bits, guard to 1.
          int field;
          Value bit;
          if (ps.k < 3) {
            field = ps.k;
            bit = 0;
          } else if (ps.k < fields) {
            field = ps.k;
            bit = enc_bit(ps.k, ps.x);
          } else {
            field = ps.k - fields;
            bit = 1;
          }
          info = {StepKind::WriteBegin, out_base(actor), field, bit, false};
          break;
        }
        case 4: info = {StepKind::WriteEnd, out_base(actor), -1, 0, false}; break;
        case 5: info = {StepKind::WriteBegin, out_base(actor), ps.s, enc_bit(ps.s, ps.x), false};
          break;
        case 6: info = {StepKind::WriteEnd, out_base(actor), -1, 0, false}; break;
        default: throw EngineError("pc outside table");
      }
      return info;
    }
    default:
      throw EngineError("unhandled protocol kind");
  }
}

void Protocol::commit(Configuration& c, int actor, const std::optional<Resolution>& res) const {
  if (kind == ProtocolKind::DijkstraCentral) {
    int z = actor;
    ProcState& ps = c.procs[size_t(z)];
    Value seen = res ? res->v : c.procs[size_t((z - 1 + n) % n)].x;
    if (z == 0) {
      if (seen == ps.x) ps.x = (ps.x + 1) % K;
    } else {
      if (seen != ps.x) ps.x = seen;
    }
    return;
  }
  if (kind == ProtocolKind::DijkstraRw) {
    int z = actor / 2;
    ProcState& ps = c.procs[size_t(z)];
    if (actor % 2 == 0) {
      if (!res) throw EngineError("read action needs a resolved value");
      Value seen = res->v;
      if (z == 0) {
        if (seen == ps.x) ps.x = (ps.x + 1) % K;
      } else {
        if (seen != ps.x) ps.x = seen;
      }
    } else {
      c.regs[size_t(out_base(z))].set_committed(ps.x);
    }
    return;
  }

  ProcState& ps = c.procs[size_t(actor)];
  const bool distinguished = actor == 0;
  switch (kind) {
    case ProtocolKind::NaiveRegular:
    case ProtocolKind::NaiveSafe:
    case ProtocolKind::RegularBot: {
      switch (ps.pc) {
        case 0: ps.pc = 1; return;
        case 1:
          ps.t = res->v;
          ps.pc = 2;
          return;
        case 2: {
          int then_pc = has_bot_writes() ? 3 : 5;
          // A resolved bottom is "no change observed": never adopted,
          // never treated as the writer's counter.
          bool fire = ps.t != kBot && (distinguished ? ps.t == ps.x : ps.t != ps.x);
          if (fire) {
            if (distinguished)
              ps.x = (ps.x + 1) % K;
            else
              ps.x = ps.t;
            ps.pc = then_pc;
          } else {
            ps.pc = 7;
          }
          return;
        }
        case 3: ps.pc = 4; return;
        case 4: ps.pc = 5; return;
        case 5: ps.pc = 6; return;
        case 6: ps.pc = 0; return;
        case 7: ps.pc = 8; return;
        case 8: ps.pc = 0; return;
        default: throw EngineError("pc outside table");
      }
    }
    case ProtocolKind::SafeUnary: {
      auto advance_refresh = [&] {
        if (ps.k + 1 < K) {
          ps.k++;
          ps.pc = 0;
        } else {
          ps.k = 0;
          ps.s = 0;
          ps.j = kBot;
          ps.pc = 5;
        }
      };
      switch (ps.pc) {
        case 0: ps.pc = 1; return;
        case 1: ps.t = res->v; ps.pc = 2; return;
        case 2: {
          Value want = (ps.k == ps.x) ? 1 : 0;
          if (ps.t != want)
            ps.pc = 3;
          else
            advance_refresh();
          return;
        }
        case 3: ps.pc = 4; return;
        case 4: advance_refresh(); return;
        case 5: ps.pc = 6; return;
        case 6: ps.t = res->v; ps.pc = 7; return;
        case 7:
          if (ps.t == 1) {
            ps.s++;
            ps.j = ps.k;
          }
          if (ps.k + 1 < K) {
            ps.k++;
            ps.pc = 5;
          } else {
            ps.k = 0;
            ps.pc = 8;
          }
          return;
        case 8:
          if (ps.s == 1) {
            if (distinguished) {
              if (ps.j == ps.x) ps.x = (ps.x + 1) % K;
            } else {
              if (ps.j != ps.x) ps.x = ps.j;
            }
          }
          ps.pc = 0;
          return;
        default: throw EngineError("pc outside table");
      }
    }
    case ProtocolKind::SafeGray: {
      auto advance_refresh = [&] {
        if (ps.k < m) {
          ps.k++;
          ps.pc = 0;
        } else {
          ps.k = 0;
          ps.pc = 5;
        }
      };
      switch (ps.pc) {
        case 0: ps.pc = 1; return;
        case 1: ps.t = res->v; ps.pc = 2; return;
        case 2: {
          auto bits = graycode_encode(uint32_t(ps.x), m);
          Value want = ps.k < m ? bits[size_t(ps.k)] : parity(bits);
          if (ps.t != want)
            ps.pc = 3;
          else
            advance_refresh();
          return;
        }
        case 3: ps.pc = 4; return;
        case 4: advance_refresh(); return;
        case 5: ps.pc = 6; return;
        case 6:
          if (ps.k < m) {
            ps.g[size_t(ps.k)] = uint8_t(res->v);
            ps.k++;
            ps.pc = 5;
          } else {
            ps.t = res->v;
            ps.k = 0;
            ps.pc = 8;
          }
          return;
        case 8: {
          if (ps.t == parity(ps.g)) {
            auto own = graycode_encode(uint32_t(ps.x), m);
            bool match = std::equal(own.begin(), own.end(), ps.g.begin());
            if (distinguished) {
              if (match) ps.x = (ps.x + 1) % K;
            } else {
              if (!match) ps.x = Value(graycode_decode(ps.g));
            }
          }
          ps.pc = 0;
          return;
        }
        default: throw EngineError("pc outside table");
      }
    }
    case ProtocolKind::CompositeSafe: {
      switch (ps.pc) {
        case 0: ps.pc = 1; return;
        case 1: {
          const auto& bits = res->bits;
          if (int(bits.size()) != fields) throw EngineError("composite read has wrong width");
          int guard = bits[0] + bits[1] + bits[2] >= 2 ? 1 : 0;
          Value label = 0;
          for (int b = 0; b < label_bits; ++b) {
            int sum = bits[size_t(3 + 3 * b)] + bits[size_t(4 + 3 * b)] + bits[size_t(5 + 3 * b)];
            label = (label << 1) | (sum >= 2 ? 1 : 0);
          }
          // Guard-down windows and labels outside the counter domain are
          // discarded by the reader.
          ps.t = (guard == 1 && label < K) ? label : kBot;
          ps.pc = 2;
          return;
        }
        case 2: {
          bool fire = ps.t != kBot && (distinguished ? ps.t == ps.x : ps.t != ps.x);
          if (fire) {
            if (distinguished)
              ps.x = (ps.x + 1) % K;
            else
              ps.x = ps.t;
            ps.k = 0;
            ps.pc = 3;
          } else {
            ps.pc = 5;
          }
          return;
        }
        case 3: ps.pc = 4; return;
        case 4:
          if (ps.k + 1 < fields + 3) {
            ps.k++;
            ps.pc = 3;
          } else {
            ps.k = 0;
            ps.pc = 0;
          }
          return;
        case 5: ps.pc = 6; return;
        case 6:
          ps.s = (ps.s + 1) % fields;
          ps.pc = 0;
          return;
        default: throw EngineError("pc outside table");
      }
    }
    default:
      throw EngineError("unhandled protocol kind");
  }
}

bool Protocol::enabled(const Configuration& c, int actor) const {
  if (kind == ProtocolKind::DijkstraCentral) {
    int z = actor;
    Value self = c.procs[size_t(z)].x;
    Value pred = c.procs[size_t((z - 1 + n) % n)].x;
    return z == 0 ? self == pred : self != pred;
  }
  if (kind == ProtocolKind::DijkstraRw) {
    int z = actor / 2;
    Value self = c.procs[size_t(z)].x;
    if (actor % 2 == 0) {
      Value pred = c.regs[size_t(in_base(z))].committed();
      return z == 0 ? self == pred : self != pred;
    }
    return c.regs[size_t(out_base(z))].committed() != self;
  }
  // Fine-grained processors always have a runnable micro-step.
  return true;
}

namespace {

uint64_t prune_horizon(const Configuration& c, int reg) {
  uint64_t horizon = c.tick;
  for (const auto& op : c.inflight)
    if (op && !op->write && op->reg == reg) horizon = std::min(horizon, op->start);
  return horizon;
}

}  // namespace

Resolution resolve_exact(const ReadContext& ctx) {
  Resolution r;
  if (ctx.composite)
    r.bits = ctx.view.baseline;
  else
    r.v = ctx.correct;
  return r;
}

StepInfo proto_step(const Protocol& proto, Configuration& c, int actor,
                    const Resolver& resolver) {
  c.tick++;
  const uint64_t now = c.tick;
  StepInfo info = proto.peek(c, actor);

  switch (info.kind) {
    case StepKind::Guarded: {
      std::optional<Resolution> res;
      if (info.needs_resolution) {
        ReadContext ctx;
        ctx.actor = actor;
        ctx.reg = info.reg;
        if (proto.kind == ProtocolKind::DijkstraCentral) {
          int z = actor;
          ctx.correct = c.procs[size_t((z - 1 + proto.n) % proto.n)].x;
        } else {
          ctx.correct = c.regs[size_t(info.reg)].committed();
        }
        for (Value v = 0; v < proto.K; ++v) ctx.domain.push_back(v);
        ctx.legal = ctx.domain;
        res = resolver(ctx);
        if (res->v < 0 || res->v >= proto.K)
          throw ScenarioError("coarse read resolved outside the label domain");
      }
      proto.commit(c, actor, res);
      return info;
    }
    case StepKind::Internal:
      proto.commit(c, actor, std::nullopt);
      return info;
    case StepKind::ReadBegin: {
      if (c.inflight[size_t(actor)]) throw EngineError("operation already in flight");
      c.inflight[size_t(actor)] = InflightOp{false, info.reg, info.field, 0, now};
      proto.commit(c, actor, std::nullopt);
      return info;
    }
    case StepKind::WriteBegin: {
      if (c.inflight[size_t(actor)]) throw EngineError("operation already in flight");
      c.regs[size_t(info.reg)].begin_write(info.value, info.field, now);
      c.inflight[size_t(actor)] = InflightOp{true, info.reg, info.field, info.value, now};
      proto.commit(c, actor, std::nullopt);
      return info;
    }
    case StepKind::WriteEnd: {
      auto& op = c.inflight[size_t(actor)];
      if (!op || !op->write) throw EngineError("write-end without open write");
      int reg = op->reg;
      op.reset();
      c.regs[size_t(reg)].end_write(now, prune_horizon(c, reg));
      proto.commit(c, actor, std::nullopt);
      return info;
    }
    case StepKind::ReadEnd: {
      auto& op = c.inflight[size_t(actor)];
      if (!op || op->write) throw EngineError("read-end without open read");
      const InflightOp read = *op;
      RegisterState& reg = c.regs[size_t(read.reg)];
      ReadContext ctx;
      ctx.actor = actor;
      ctx.reg = read.reg;
      Resolution res;
      if (reg.spec().model == RegisterModel::CompositeSafe) {
        ctx.composite = true;
        ctx.view = reg.composite_view(read.start, now);
        res = resolver(ctx);
        // Certify the resolution: it may deviate from the committed
        // vector in at most one concurrently written field.
        if (res.bits.size() != ctx.view.baseline.size())
          throw ScenarioError("composite resolution has wrong width");
        int diffs = 0;
        for (size_t f = 0; f < res.bits.size(); ++f) {
          if (res.bits[f] == ctx.view.baseline[f]) continue;
          ++diffs;
          if (std::find(ctx.view.corruptible.begin(), ctx.view.corruptible.end(), int(f)) ==
              ctx.view.corruptible.end())
            throw ScenarioError("composite resolution corrupts a quiescent field");
        }
        if (diffs > 1) throw ScenarioError("composite resolution corrupts several fields");
      } else {
        ctx.legal = reg.legal_read_values(read.start, now, actor);
        ctx.correct = reg.committed();
        ctx.domain = reg.full_domain();
        res = resolver(ctx);
        if (std::find(ctx.legal.begin(), ctx.legal.end(), res.v) == ctx.legal.end())
          throw ScenarioError("scripted read value is not legal here");
        reg.note_read_resolved(actor, read.start, now, res.v);
      }
      op.reset();
      reg.prune(prune_horizon(c, read.reg));
      proto.commit(c, actor, res);
      return info;
    }
  }
  throw EngineError("unhandled step kind");
}

}  // namespace ringlab
