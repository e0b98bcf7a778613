#include "ringlab/markov.hpp"

#include <algorithm>
#include <cmath>

namespace ringlab {

TransitionMatrix build_transition_matrix(int n, const Rational& p, int state_bound) {
  if (n < 2) throw ConfigError("ring size must be at least 2");
  if (Rational(0) > p || p > Rational(1)) throw ConfigError("p must lie in [0,1]");
  if (n >= 20 || (1 << n) > state_bound)
    throw ResourceError("state space exceeds the configured bound");
  TransitionMatrix mat;
  mat.n = n;
  mat.order = 1 << n;
  mat.p = p;
  mat.entries.assign(size_t(mat.order) * size_t(mat.order), Rational(0));

  const Rational act(1, n);
  const Rational wrong = Rational(1) - p;
  auto bit = [n](int state, int z) { return (state >> (n - 1 - z)) & 1; };

  for (int s = 0; s < mat.order; ++s) {
    for (int z = 0; z < n; ++z) {
      int pred = bit(s, (z - 1 + n) % n);
      for (int correct = 0; correct < 2; ++correct) {
        Rational weight = act * (correct ? p : wrong);
        if (weight == Rational(0)) continue;
        int seen = correct ? pred : 1 - pred;
        int self = bit(s, z);
        int target = s;
        bool move = z == 0 ? seen == self : seen != self;
        if (move) target = s ^ (1 << (n - 1 - z));  // flip for z==0, copy==flip in binary
        mat.at(s, target) += weight;
      }
    }
    Rational sum(0);
    for (int t = 0; t < mat.order; ++t) sum += mat.at(s, t);
    if (sum != Rational(1)) throw InvariantViolation("transition row does not sum to 1");
  }
  return mat;
}

namespace {

std::vector<double> to_double(const TransitionMatrix& mat) {
  std::vector<double> d(mat.entries.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = mat.entries[i].to_double();
  return d;
}

std::vector<double> square(const std::vector<double>& a, int s) {
  std::vector<double> out(size_t(s) * size_t(s), 0.0);
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < s; ++k) {
      double v = a[size_t(i * s + k)];
      if (v == 0.0) continue;
      for (int j = 0; j < s; ++j) out[size_t(i * s + j)] += v * a[size_t(k * s + j)];
    }
  return out;
}

bool exact_fixed_point(const TransitionMatrix& mat, const std::vector<Rational>& pi) {
  Rational total(0);
  for (const Rational& x : pi) {
    if (Rational(0) > x) return false;
    total += x;
  }
  if (total != Rational(1)) return false;
  for (int j = 0; j < mat.order; ++j) {
    Rational acc(0);
    for (int i = 0; i < mat.order; ++i) acc += pi[size_t(i)] * mat.at(i, j);
    if (acc != pi[size_t(j)]) return false;
  }
  return true;
}

}  // namespace

EquilibriumVector equilibrium(const TransitionMatrix& mat, double tol, int max_iter) {
  const int s = mat.order;
  std::vector<double> power = to_double(mat);
  double diff = 1.0;
  for (int iter = 0; iter < max_iter && diff > tol; ++iter) {
    std::vector<double> next = square(power, s);
    diff = 0.0;
    for (size_t i = 0; i < next.size(); ++i) diff = std::max(diff, std::fabs(next[i] - power[i]));
    power = std::move(next);
  }
  if (diff > tol)
    throw NonConvergence("matrix powers still oscillate by " + std::to_string(diff));
  // Successive powers agree; rows must agree too, otherwise the chain
  // has several closed classes and no single stationary row.
  for (int r = 1; r < s; ++r)
    for (int c = 0; c < s; ++c)
      if (std::fabs(power[size_t(r * s + c)] - power[size_t(c)]) > 1e6 * tol)
        throw NonConvergence("power limit rows disagree; chain is reducible");

  EquilibriumVector vec;
  std::vector<Rational> snapped(size_t(s), Rational(0));
  for (int c = 0; c < s; ++c) snapped[size_t(c)] = Rational::approximate(power[size_t(c)], 1000000);
  if (exact_fixed_point(mat, snapped)) {
    vec.probs = std::move(snapped);
    vec.exact = true;
    vec.residual = 0.0;
    return vec;
  }
  // No small exact fixed point: report the numeric vector.
  vec.probs.resize(size_t(s));
  for (int c = 0; c < s; ++c) vec.probs[size_t(c)] = Rational::approximate(power[size_t(c)], 1 << 30);
  vec.exact = false;
  double residual = 0.0;
  for (int j = 0; j < s; ++j) {
    double acc = 0.0;
    for (int i = 0; i < s; ++i) acc += power[size_t(i)] * mat.at(i, j).to_double();
    residual = std::max(residual, std::fabs(acc - power[size_t(j)]));
  }
  vec.residual = residual;
  return vec;
}

bool state_is_legitimate(int state, int n) {
  auto bit = [n, state](int z) { return (state >> (n - 1 - z)) & 1; };
  int priv = 0;
  for (int z = 0; z < n; ++z) {
    int self = bit(z), pred = bit((z - 1 + n) % n);
    if (z == 0 ? self == pred : self != pred) ++priv;
  }
  return priv == 1;
}

Rational legitimate_mass(const EquilibriumVector& vec, int n) {
  Rational mass(0);
  for (int s = 0; s < int(vec.probs.size()); ++s)
    if (state_is_legitimate(s, n)) mass += vec.probs[size_t(s)];
  return mass;
}

std::optional<ReferenceEquilibrium> reference_equilibrium_3ring(const Rational& p) {
  ReferenceEquilibrium ref;
  if (p == Rational(1)) {
    ref.probs = {{1, 6}, {1, 6}, {0}, {1, 6}, {1, 6}, {0}, {1, 6}, {1, 6}};
    return ref;
  }
  if (p == Rational(3, 4)) {
    ref.probs = {{3, 20}, {3, 20}, {1, 20}, {3, 20}, {3, 20}, {1, 20}, {3, 20}, {3, 20}};
    ref.note = "the published p=3/4 row does not sum to 1; using the corrected stationary vector";
    return ref;
  }
  if (p == Rational(1, 2)) {
    ref.probs.assign(8, Rational(1, 8));
    return ref;
  }
  if (p == Rational(1, 4)) {
    ref.probs = {{1, 12}, {1, 12}, {1, 4}, {1, 12}, {1, 12}, {1, 4}, {1, 12}, {1, 12}};
    return ref;
  }
  return std::nullopt;
}

}  // namespace ringlab
