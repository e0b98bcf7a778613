#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace ringlab {

// Register/counter values are small non-negative integers. kBot is the
// out-of-band "no value" marker written between real values by the
// bottom-separated regular-register protocol.
using Value = int32_t;
inline constexpr Value kBot = -1;

enum class ProtocolKind {
  DijkstraCentral,  // coarse guarded commands, central daemon
  DijkstraRw,       // read/write atomicity; 2n-node virtual ring
  NaiveRegular,     // regular registers, no bottom separator (fails)
  NaiveSafe,        // same step table over safe registers (fails harder)
  RegularBot,       // regular registers with bottom separator
  SafeUnary,        // 2n+1 one-bit safe registers, unary counter
  SafeGray,         // m+1 one-bit safe registers, Gray counter + parity
  CompositeSafe,    // one composite safe register per link, guarded refresh
};

std::string to_string(ProtocolKind k);
std::optional<ProtocolKind> protocol_kind_from(const std::string& name);

// Error taxonomy. The CLI maps these onto exit codes: usage -> 2,
// resource -> 3, everything else that aborts a command -> 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct ProtocolViolation : Error {
  using Error::Error;
};
struct AccessError : Error {
  using Error::Error;
};
struct ScenarioError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct EngineError : Error {
  using Error::Error;
};
struct ResourceError : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};
struct NonConvergence : Error {
  using Error::Error;
};
struct InvariantViolation : Error {
  using Error::Error;
};

// All randomness in a run flows through one of these. mt19937_64 has a
// fully specified output sequence, so traces replay across platforms.
// Bounded draws use rejection sampling to stay implementation-independent
// (std::uniform_int_distribution is not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t below(uint64_t n) {
    if (n == 0) throw EngineError("Rng::below(0)");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform in [0,1).
  double unit() { return (eng_() >> 11) * 0x1.0p-53; }

  bool chance(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return unit() < p;
  }

 private:
  std::mt19937_64 eng_;
};

inline constexpr const char* kVersion = "ringlab 0.1.0";

}  // namespace ringlab
