#include "ringlab/ring.hpp"

namespace ringlab {

std::vector<int> privileged(const Protocol& proto, const Configuration& c) {
  if (int(c.procs.size()) != proto.n) throw ShapeError("configuration does not fit protocol");
  std::vector<int> out;
  if (proto.kind == ProtocolKind::DijkstraRw) {
    for (int z = 0; z < proto.n; ++z) {
      Value self = c.procs[size_t(z)].x;
      Value in = c.regs[size_t(proto.in_base(z))].committed();
      bool read_guard = z == 0 ? self == in : self != in;
      if (read_guard) out.push_back(2 * z + 1);
      if (c.regs[size_t(proto.out_base(z))].committed() != self) out.push_back(2 * z + 2);
    }
    return out;
  }
  const int n = proto.n;
  for (int z = 0; z < n; ++z) {
    Value self = c.procs[size_t(z)].x;
    Value pred = c.procs[size_t((z - 1 + n) % n)].x;
    bool priv = z == 0 ? self == pred : self != pred;
    if (priv) out.push_back(z + 1);
  }
  return out;
}

bool is_safe_configuration(const Protocol& proto, const Configuration& c) {
  const Value x = c.procs[0].x;
  for (const ProcState& ps : c.procs)
    if (ps.x != x) return false;

  switch (proto.kind) {
    case ProtocolKind::DijkstraCentral:
      return true;  // counters agree; nothing else exists
    case ProtocolKind::DijkstraRw:
      for (const RegisterState& r : c.regs)
        if (r.committed() != x) return false;
      return true;
    case ProtocolKind::NaiveRegular:
    case ProtocolKind::NaiveSafe:
    case ProtocolKind::RegularBot: {
      for (const RegisterState& r : c.regs)
        if (r.committed() != x) return false;
      for (int z = 0; z < proto.n; ++z) {
        const auto& op = c.inflight[size_t(z)];
        if (op && op->write) {
          if (op->value != x) return false;
          // Any overlap with a safe register admits any value regardless
          // of what is being written.
          if (proto.kind == ProtocolKind::NaiveSafe) return false;
        }
        if (op && !op->write) {
          // A read that started earlier may still resolve to any write
          // overlapping its interval, including completed ones. The
          // separator is harmless: it is never adopted.
          auto legal = c.regs[size_t(op->reg)].legal_read_values(op->start, c.tick, z);
          for (Value v : legal)
            if (v != x && v != kBot) return false;
        }
        // A read that already resolved to a stale value and awaits its
        // test is as dangerous as an in-flight read.
        if (c.procs[size_t(z)].pc == 2 && c.procs[size_t(z)].t != x &&
            c.procs[size_t(z)].t != kBot)
          return false;
      }
      return true;
    }
    default: {
      // Scan-based protocols: conservative quiescent form — registers
      // encode the common counter, nothing in flight, every processor at
      // the top of its cycle.
      for (int link = 0; link < proto.link_count(); ++link) {
        auto enc = proto.encoded_block(x);
        if (proto.kind == ProtocolKind::CompositeSafe) {
          if (c.regs[size_t(link)].committed_fields() != enc) return false;
        } else {
          for (int k = 0; k < proto.regs_per_link; ++k)
            if (c.regs[size_t(link * proto.regs_per_link + k)].committed() != enc[size_t(k)])
              return false;
        }
      }
      for (const auto& op : c.inflight)
        if (op) return false;
      for (const ProcState& ps : c.procs)
        if (ps.pc != 0) return false;
      return true;
    }
  }
}

bool is_legitimate(const Protocol& proto, const Configuration& c,
                   const LegitimacyPredicate& pred) {
  switch (pred.kind) {
    case PredKind::ExactlyOnePrivileged:
      return privileged(proto, c).size() == 1;
    case PredKind::SafeConfiguration:
      return is_safe_configuration(proto, c);
    case PredKind::MarkovNot010_101: {
      if (proto.K != 2 || proto.n != 3)
        throw ShapeError("the 010/101 predicate is for the binary 3-ring");
      const auto& p = c.procs;
      bool is010 = p[0].x == 0 && p[1].x == 1 && p[2].x == 0;
      bool is101 = p[0].x == 1 && p[1].x == 0 && p[2].x == 1;
      return !is010 && !is101;
    }
  }
  throw ShapeError("unknown predicate");
}

}  // namespace ringlab
