#pragma once

#include <vector>

#include "wfa/automaton.hpp"
#include "wfa/norms.hpp"
#include "wfa/rng.hpp"

namespace wfa::testing {

// Three-state automaton over {a, b} used as the hand-checked fixture:
// f(ab) = 1*3*4*1 + 3*3*4*1 + 4*1*1*1 = 52.
inline WeightedAutomaton three_state_demo() {
  Eigen::VectorXd alpha(3), beta(3);
  alpha << 1, 3, 4;
  beta << 2, 1, 1;
  Eigen::MatrixXd Aa(3, 3), Ab(3, 3);
  Aa << 0, 0, 3, 0, 0, 3, 1, 0, 0;
  Ab << 0, 1, 0, 2, 0, 0, 0, 0, 4;
  return WeightedAutomaton(Alphabet({"a", "b"}), alpha, beta, {Aa, Ab});
}

// One-state automaton with alpha = beta = 1 and a single weight c, so
// f(a^t) = c^t; squared 2-norm 1/(1-c^2).
inline WeightedAutomaton geometric_wfa(double c) {
  Eigen::VectorXd one(1);
  one << 1.0;
  Eigen::MatrixXd T(1, 1);
  T << c;
  return WeightedAutomaton(Alphabet({"a"}), one, one, {T});
}

// One-state PFA: continue with probability c, stop with 1-c, so
// f(a^t) = c^t (1-c).
inline WeightedAutomaton geometric_pfa(double c) {
  Eigen::VectorXd alpha(1), beta(1);
  alpha << 1.0;
  beta << 1.0 - c;
  Eigen::MatrixXd T(1, 1);
  T << c;
  return make_pfa(Alphabet({"a"}), alpha, {T}, beta);
}

inline Alphabet letters(int k) {
  std::vector<std::string> tokens;
  for (int i = 0; i < k; ++i) tokens.push_back(std::string(1, static_cast<char>('a' + i)));
  return Alphabet(tokens);
}

inline WeightedAutomaton random_wfa(Rng& rng, int n, int k) {
  Eigen::VectorXd alpha(n), beta(n);
  for (int i = 0; i < n; ++i) alpha(i) = rng.next_normal();
  for (int i = 0; i < n; ++i) beta(i) = rng.next_normal();
  std::vector<Eigen::MatrixXd> trans;
  for (int a = 0; a < k; ++a) {
    Eigen::MatrixXd T(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j) = rng.next_normal();
    trans.push_back(std::move(T));
  }
  return WeightedAutomaton(letters(k), std::move(alpha), std::move(beta), std::move(trans));
}

// Random automaton rescaled so wfa_norm(A, hp) equals target exactly.
inline WeightedAutomaton random_wfa_in_ball(Rng& rng, int n, int k, const HolderPair& hp,
                                            double target) {
  WeightedAutomaton A = random_wfa(rng, n, k);
  const double norm = wfa_norm(A, hp);
  return scale(target / norm, A);
}

inline Str random_str(Rng& rng, int k, int max_len) {
  const int len = rng.next_int(max_len + 1);
  Str x(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) x[static_cast<std::size_t>(i)] = rng.next_int(k);
  return x;
}

inline StringSample random_sample(Rng& rng, int m, int k, int max_len) {
  std::vector<Str> xs;
  xs.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) xs.push_back(random_str(rng, k, max_len));
  return StringSample(std::move(xs));
}

}  // namespace wfa::testing
