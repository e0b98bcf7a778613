#pragma once

#include <vector>

#include "ringlab/config.hpp"
#include "ringlab/protocol.hpp"

namespace ringlab {

// Privilege rule of the classic token ring: the distinguished processor
// holds the token when its counter equals its predecessor's, every other
// processor when its counter differs. The source this family of
// protocols descends from leaves the rule implicit; this is the
// conventional reading.
//
// Register-based protocols evaluate privilege on counters only. The
// read/write-atomicity ring evaluates it on its expanded 2n-node ring
// (internal counters alternating with registers), so ids there range
// over [1, 2n]. Ids are 1-based.
std::vector<int> privileged(const Protocol& proto, const Configuration& c);

enum class PredKind {
  ExactlyOnePrivileged,
  SafeConfiguration,   // quiescent all-agree state of the register protocols
  MarkovNot010_101,    // binary 3-ring legitimacy
};

struct LegitimacyPredicate {
  PredKind kind = PredKind::ExactlyOnePrivileged;
};

bool is_legitimate(const Protocol& proto, const Configuration& c, const LegitimacyPredicate& pred);

// All registers and counters agree on one value, nothing in flight can
// read differently, and no stale scratch value is pending a test.
bool is_safe_configuration(const Protocol& proto, const Configuration& c);

}  // namespace ringlab
