#include "ringlab/config.hpp"

#include <sstream>

namespace ringlab {

namespace {

std::string render_value(Value v) { return v == kBot ? "-" : std::to_string(v); }

std::string render_link(const Configuration& c, int link) {
  const int per = c.regs_per_link;
  if (per == 1) {
    const RegisterState& r = c.regs[size_t(link)];
    if (r.spec().model == RegisterModel::CompositeSafe) {
      std::string s;
      for (Value b : r.committed_fields()) s += char('0' + b);
      return s;
    }
    return render_value(r.committed());
  }
  std::string s;
  for (int k = 0; k < per; ++k) s += char('0' + c.regs[size_t(link * per + k)].committed());
  return s;
}

}  // namespace

std::string render(const Configuration& c) {
  std::ostringstream os;
  os << "x=[";
  for (int i = 0; i < c.n(); ++i) os << (i ? "," : "") << render_value(c.procs[size_t(i)].x);
  os << "];pc=[";
  for (int i = 0; i < c.n(); ++i) os << (i ? "," : "") << c.procs[size_t(i)].pc;
  os << "];regs=[";
  const int links = c.regs.empty() ? 0 : int(c.regs.size()) / c.regs_per_link;
  for (int l = 0; l < links; ++l) os << (l ? "," : "") << render_link(c, l);
  os << "]";
  bool any_inflight = false;
  for (const auto& op : c.inflight)
    if (op) any_inflight = true;
  if (any_inflight) {
    os << ";in=[";
    bool first = true;
    for (int i = 0; i < c.n(); ++i) {
      const auto& op = c.inflight[size_t(i)];
      if (!op) continue;
      if (!first) os << ",";
      first = false;
      os << "p" << (i + 1) << ":" << (op->write ? "W" : "R") << "r" << (op->reg + 1);
      if (op->write) {
        if (op->field >= 0) os << "." << op->field;
        os << "=" << render_value(op->value);
      }
    }
    os << "]";
  }
  return os.str();
}

bool same_state(const Configuration& a, const Configuration& b) {
  if (a.procs != b.procs) return false;
  if (a.regs.size() != b.regs.size()) return false;
  for (size_t i = 0; i < a.regs.size(); ++i)
    if (!a.regs[i].state_equal(b.regs[i])) return false;
  if (a.inflight.size() != b.inflight.size()) return false;
  for (size_t i = 0; i < a.inflight.size(); ++i) {
    const auto& x = a.inflight[i];
    const auto& y = b.inflight[i];
    if (bool(x) != bool(y)) return false;
    if (x && (x->write != y->write || x->reg != y->reg || x->field != y->field ||
              x->value != y->value))
      return false;
  }
  return true;
}

std::map<Value, int> label_multiset(const Configuration& c) {
  std::map<Value, int> out;
  for (const ProcState& p : c.procs) out[p.x]++;
  return out;
}

namespace {

std::vector<std::string> split_list(const std::string& body) {
  std::vector<std::string> items;
  std::string cur;
  for (char ch : body) {
    if (ch == ',') {
      items.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty()) items.push_back(cur);
  return items;
}

Value parse_value(const std::string& tok) {
  if (tok == "-") return kBot;
  try {
    return Value(std::stol(tok));
  } catch (...) {
    throw ScenarioError("bad value token: " + tok);
  }
}

}  // namespace

ConfigSections parse_config_sections(const std::string& text) {
  ConfigSections out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eq = text.find("=[", pos);
    if (eq == std::string::npos) break;
    std::string key = text.substr(pos, eq - pos);
    size_t close = text.find(']', eq);
    if (close == std::string::npos) throw ScenarioError("unterminated section in: " + text);
    std::string body = text.substr(eq + 2, close - eq - 2);
    auto items = split_list(body);
    if (key == "x") {
      std::vector<Value> xs;
      for (const auto& it : items) xs.push_back(parse_value(it));
      out.x = xs;
    } else if (key == "pc") {
      std::vector<int> pcs;
      for (const auto& it : items) pcs.push_back(int(parse_value(it)));
      out.pc = pcs;
    } else if (key == "regs") {
      out.regs = items;
    } else if (key == "in") {
      // informational only; ignored on parse
    } else {
      throw ScenarioError("unknown section '" + key + "'");
    }
    pos = close + 1;
    if (pos < text.size() && text[pos] == ';') ++pos;
  }
  return out;
}

}  // namespace ringlab
