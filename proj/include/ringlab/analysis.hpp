#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ringlab/engine.hpp"
#include "ringlab/ring.hpp"

namespace ringlab {

inline constexpr uint64_t kNever = UINT64_MAX;

// Index of the first configuration along the trace (0 = initial) that
// satisfies the predicate, or kNever.
uint64_t steps_to_legitimacy(const Protocol& proto, const Trace& trace,
                             const LegitimacyPredicate& pred);

struct Verdict {
  enum Kind { Converges, Lasso, Timeout } kind = Timeout;
  // Converges: worst-case number of steps any daemon can keep the system
  // illegitimate.
  uint64_t steps = 0;
  // Lasso: a reachable cycle of illegitimate configurations plus the
  // path the search entered it by. Every node is illegitimate and every
  // edge is a legal step of the protocol under the central daemon.
  std::vector<Configuration> cycle;
  std::vector<Configuration> entry;
};

// Decides convergence graph-theoretically for the coarse protocols:
// converges iff the subgraph induced by illegitimate configurations is
// acyclic (stabilization quantifies over all executions, so sampling
// would prove nothing). Cycle search visits configurations holding all
// K labels first; a certificate found there keeps every label alive
// along the whole cycle.
Verdict exhaustive_convergence(const Protocol& proto, const LegitimacyPredicate& pred,
                               uint64_t state_bound = 10'000'000);

// Re-validates a lasso certificate edge by edge with proto_step and node
// by node against the predicate. Throws InvariantViolation on failure.
void validate_lasso(const Protocol& proto, const LegitimacyPredicate& pred, const Verdict& v);

std::string verdict_json(const Verdict& v);

struct ClosureReport {
  int trials = 0;
  int violations = 0;
  int first_violation_trial = -1;
  uint64_t first_violation_step = 0;
  std::string detail;
  Trace violation;  // the offending execution, up to its first violation
  bool ok() const { return violations == 0; }
};

// Runs `trials` randomized executions from sampled legitimate
// configurations and checks the predicate after every micro-step.
// Per-trial seeding keeps the outcome independent of `jobs`.
ClosureReport closure_check(const Protocol& proto, const LegitimacyPredicate& pred, int trials,
                            uint64_t budget, uint64_t seed, int jobs = 1);

struct ConvergenceProbe {
  bool converged = false;
  uint64_t last_violation = 0;  // micro-step of the last predicate failure
  uint64_t steps_run = 0;
};

// Runs up to `budget` micro-steps under fine-random scheduling and
// declares convergence once the privilege predicate has held for
// `window` consecutive micro-steps.
ConvergenceProbe probe_convergence(const Protocol& proto, const Configuration& init,
                                   uint64_t budget, uint64_t window, uint64_t seed);

// Arbitrary well-formed configuration: uniform counters and register
// contents, scratch state and program counters included.
Configuration random_configuration(const Protocol& proto, Rng& rng);

// Consistent token-holding configuration: a value front part-way around
// the ring, registers publishing each counter.
Configuration random_legitimate_configuration(const Protocol& proto, Rng& rng);

// Fraction of post-burn-in configurations that are legitimate when the
// binary ring runs under the fair daemon with reads correct with
// probability p.
double empirical_legit_fraction(int n, double p, uint64_t steps, uint64_t burn_in,
                                uint64_t seed);

}  // namespace ringlab
