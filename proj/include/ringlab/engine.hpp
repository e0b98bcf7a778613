#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ringlab/protocol.hpp"
#include "ringlab/ring.hpp"

namespace ringlab {

enum class ScheduleMode {
  CentralAdversary,  // scripted actor order, coarse protocols
  CentralRandom,     // uniform over enabled actors, coarse protocols
  FairDaemon,        // uniform over all actors (self-loops allowed)
  FineAdversary,     // scripted micro-steps with scripted resolutions
  FineRandom,        // uniform over processors, random legal resolutions
};

std::string to_string(ScheduleMode m);
std::optional<ScheduleMode> schedule_mode_from(const std::string& name);

// One scripted step. Act runs the actor's next micro-step (a read-end is
// allowed only when its legal set is a singleton); Resolve runs a
// read-end with an explicit value or composite bit vector.
struct Directive {
  enum Type { Act, Resolve } type = Act;
  int actor = 0;  // 0-based
  int reg = -1;   // flat register a Resolve applies to
  Resolution res;
  bool has_res = false;
};

struct Schedule {
  ScheduleMode mode = ScheduleMode::FineRandom;
  std::vector<Directive> script;
  uint64_t seed = 0;
  double p_correct = 1.0;  // read correctness under the fair daemon
};

struct TraceEvent {
  uint64_t tick = 0;
  int actor = 0;
  StepKind kind = StepKind::Internal;
  int reg = -1;
  int field = -1;                  // composite field a write touches
  Value value = 0;                 // resolved read value / written value
  std::vector<uint8_t> bits;       // composite read result
};

struct Trace {
  std::string protocol;
  int n = 0;
  int K = 0;
  uint64_t seed = 0;
  Configuration init;
  std::vector<TraceEvent> events;
  Configuration final_config;
};

std::string render(const Trace& t);

// Drives one execution: picks actors per the schedule mode, resolves
// reads per the schedule's policy, and applies micro-steps. One engine
// equals one logical event loop; engines share nothing.
class Engine {
 public:
  Engine(Protocol proto, Configuration init, Schedule sched);

  // Runs one micro-step. Returns false when an adversary script is
  // exhausted. `ev` (optional) receives the event that ran.
  bool step(TraceEvent* ev = nullptr);

  const Configuration& config() const { return config_; }
  const Protocol& protocol() const { return proto_; }
  uint64_t steps_done() const { return steps_; }

 private:
  int pick_actor();
  Resolution resolve(const ReadContext& ctx);

  Protocol proto_;
  Configuration config_;
  Schedule sched_;
  Rng rng_;
  uint64_t steps_ = 0;
  size_t script_pos_ = 0;
  const Directive* current_directive_ = nullptr;
};

// Convenience wrapper: run up to `budget` micro-steps and record a trace.
Trace run(const Protocol& proto, const Schedule& sched, const Configuration& init,
          uint64_t budget);

// Re-executes a recorded trace, invoking `visit` after every event (and
// once for the initial configuration with event == nullptr).
void replay(const Protocol& proto, const Trace& trace,
            const std::function<void(const Configuration&, const TraceEvent*)>& visit);

// Script helper: one Act per 1-based actor id.
std::vector<Directive> acts(const std::vector<int>& actors_1based);

}  // namespace ringlab
