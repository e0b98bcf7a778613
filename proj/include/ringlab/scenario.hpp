#pragma once

#include <string>
#include <vector>

#include "ringlab/engine.hpp"

namespace ringlab {

// Line-oriented scenario: a header
//   protocol=<kind> n=<n> [k=<K>] init=<config-rendering>
// followed by one directive per line:
//   act pX
//   resolve pX rY = <value|bits>
//   assert <config-rendering or subset of its sections>
//   assert-legit <true|false>
// '#' starts a comment. Replay is bit-exact: scripted resolutions must
// be legal for the register they resolve.
struct ScenarioItem {
  enum Type { Step, Assert, AssertLegit } type = Step;
  Directive directive;
  std::string expected;
  bool expected_legit = false;
  int line = 0;
};

struct Scenario {
  Protocol proto;
  Configuration init;
  std::vector<ScenarioItem> items;
  std::string name;
};

Scenario parse_scenario(const std::string& text, const std::string& name = "scenario");
Scenario load_scenario(const std::string& path);

struct ReplayResult {
  Trace trace;
  int assertions = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

ReplayResult replay_scenario(const Scenario& sc);

}  // namespace ringlab
