#include "ringlab/scenario.hpp"

#include <fstream>
#include <sstream>

namespace ringlab {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

int parse_actor(const std::string& tok, int line) {
  if (tok.size() < 2 || tok[0] != 'p')
    throw ScenarioError("line " + std::to_string(line) + ": expected pX, got " + tok);
  return std::stoi(tok.substr(1)) - 1;
}

int parse_reg(const std::string& tok, int line) {
  if (tok.size() < 2 || tok[0] != 'r')
    throw ScenarioError("line " + std::to_string(line) + ": expected rY, got " + tok);
  return std::stoi(tok.substr(1)) - 1;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name) {
  Scenario sc;
  sc.name = name;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;

  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;

    if (!have_header) {
      std::optional<ProtocolKind> kind;
      int n = 0;
      std::optional<int> k;
      std::string init_text;
      for (const std::string& tok : toks) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
          throw ScenarioError("header expects key=value, got " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "protocol") {
          kind = protocol_kind_from(val);
          if (!kind) throw ScenarioError("unknown protocol " + val);
        } else if (key == "n") {
          n = std::stoi(val);
        } else if (key == "k") {
          k = std::stoi(val);
        } else if (key == "init") {
          init_text = val;
        } else {
          throw ScenarioError("unknown header key " + key);
        }
      }
      if (!kind || n == 0) throw ScenarioError("header needs protocol= and n=");
      sc.proto = make_protocol(*kind, n, k);
      if (init_text.empty()) {
        sc.init = sc.proto.initial_configuration();
      } else {
        auto sections = parse_config_sections(init_text);
        if (!sections.x) throw ScenarioError("init needs x=[..]");
        sc.init = sc.proto.configuration_from_counters(*sections.x, sections.regs, sections.pc);
      }
      have_header = true;
      continue;
    }

    ScenarioItem item;
    item.line = lineno;
    if (toks[0] == "act") {
      if (toks.size() != 2) throw ScenarioError("act wants one actor");
      item.type = ScenarioItem::Step;
      item.directive.type = Directive::Act;
      item.directive.actor = parse_actor(toks[1], lineno);
    } else if (toks[0] == "resolve") {
      // resolve pX rY = value
      if (toks.size() != 5 || toks[3] != "=")
        throw ScenarioError("line " + std::to_string(lineno) + ": resolve pX rY = v");
      item.type = ScenarioItem::Step;
      item.directive.type = Directive::Resolve;
      item.directive.actor = parse_actor(toks[1], lineno);
      item.directive.reg = parse_reg(toks[2], lineno);
      item.directive.has_res = true;
      const std::string& v = toks[4];
      if (sc.proto.kind == ProtocolKind::CompositeSafe) {
        for (char ch : v) {
          if (ch != '0' && ch != '1')
            throw ScenarioError("composite resolution must be a bit string");
          item.directive.res.bits.push_back(ch - '0');
        }
      } else if (v == "-") {
        item.directive.res.v = kBot;
      } else {
        item.directive.res.v = Value(std::stol(v));
      }
    } else if (toks[0] == "assert") {
      if (toks.size() != 2) throw ScenarioError("assert wants a config rendering");
      item.type = ScenarioItem::Assert;
      item.expected = toks[1];
    } else if (toks[0] == "assert-legit") {
      if (toks.size() != 2 || (toks[1] != "true" && toks[1] != "false"))
        throw ScenarioError("assert-legit wants true or false");
      item.type = ScenarioItem::AssertLegit;
      item.expected_legit = toks[1] == "true";
    } else {
      throw ScenarioError("line " + std::to_string(lineno) + ": unknown directive " + toks[0]);
    }
    sc.items.push_back(std::move(item));
  }
  if (!have_header) throw ScenarioError("scenario has no header");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError("cannot open scenario " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  auto base = path.find_last_of('/');
  return parse_scenario(buf.str(), base == std::string::npos ? path : path.substr(base + 1));
}

ReplayResult replay_scenario(const Scenario& sc) {
  ReplayResult result;
  Schedule sched;
  sched.mode = sc.proto.coarse() ? ScheduleMode::CentralAdversary : ScheduleMode::FineAdversary;
  for (const ScenarioItem& item : sc.items)
    if (item.type == ScenarioItem::Step) sched.script.push_back(item.directive);

  Engine eng(sc.proto, sc.init, sched);
  result.trace.protocol = to_string(sc.proto.kind);
  result.trace.n = sc.proto.n;
  result.trace.K = sc.proto.K;
  result.trace.init = sc.init;

  auto check_assert = [&](const ScenarioItem& item) {
    ++result.assertions;
    if (item.type == ScenarioItem::AssertLegit) {
      bool legit = is_legitimate(sc.proto, eng.config(), {PredKind::ExactlyOnePrivileged});
      if (legit != item.expected_legit)
        result.failures.push_back("line " + std::to_string(item.line) + ": expected legit=" +
                                  (item.expected_legit ? "true" : "false") + " at " +
                                  render(eng.config()));
      return;
    }
    auto expected = parse_config_sections(item.expected);
    auto actual = parse_config_sections(render(eng.config()));
    auto fail = [&](const std::string& what) {
      result.failures.push_back("line " + std::to_string(item.line) + ": " + what +
                                " mismatch; live " + render(eng.config()));
    };
    if (expected.x && expected.x != actual.x) fail("x");
    if (expected.pc && expected.pc != actual.pc) fail("pc");
    if (expected.regs && expected.regs != actual.regs) fail("regs");
  };

  for (const ScenarioItem& item : sc.items) {
    if (item.type == ScenarioItem::Step) {
      TraceEvent ev;
      if (!eng.step(&ev))
        throw ScenarioError("script ended prematurely at line " + std::to_string(item.line));
      result.trace.events.push_back(ev);
    } else {
      check_assert(item);
    }
  }
  result.trace.final_config = eng.config();
  return result;
}

}  // namespace ringlab
