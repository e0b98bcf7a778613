#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringlab/rational.hpp"

namespace ringlab {

// Row-stochastic transition matrix of the binary n-ring under the fair
// daemon with probability-p reads. States are indexed binary-ascending
// by counter vector (b1 the high bit): 000,001,...,111.
struct TransitionMatrix {
  int n = 0;
  int order = 0;  // 2^n
  Rational p;
  std::vector<Rational> entries;  // row-major

  const Rational& at(int row, int col) const { return entries[size_t(row * order + col)]; }
  Rational& at(int row, int col) { return entries[size_t(row * order + col)]; }
};

// The fair daemon activates each processor with probability 1/n; the
// activated processor reads its predecessor correctly with probability p
// or flipped with 1-p, then applies the token-ring rule (the
// distinguished processor flips on a match, the others copy on a
// mismatch). Rows sum to exactly 1.
TransitionMatrix build_transition_matrix(int n, const Rational& p, int state_bound = 1 << 20);

struct EquilibriumVector {
  std::vector<Rational> probs;
  bool exact = false;     // probs verified as an exact fixed point
  double residual = 0.0;  // max-norm of pi*P - pi in floating point
};

// The stationary distribution by repeated matrix squaring, then an exact
// snap: each converged entry is rounded to a small fraction and the
// candidate verified as an exact fixed point of the exact matrix. Falls
// back to the floating-point vector when no exact fixed point is found.
EquilibriumVector equilibrium(const TransitionMatrix& mat, double tol = 1e-13,
                              int max_iter = 64);

// Sum of stationary probability over states with exactly one privilege
// (for n=3: everything but 010 and 101).
Rational legitimate_mass(const EquilibriumVector& vec, int n);

bool state_is_legitimate(int state, int n);

// Published equilibria for the binary 3-ring at the four tabulated read
// probabilities. The p=3/4 row is the corrected one: the printed table's
// row does not sum to 1; `note` carries that caveat.
struct ReferenceEquilibrium {
  std::vector<Rational> probs;
  std::string note;
};
std::optional<ReferenceEquilibrium> reference_equilibrium_3ring(const Rational& p);

}  // namespace ringlab
