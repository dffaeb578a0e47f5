#include "wfa/automaton.hpp"

#include <cmath>
#include <string>

#include "wfa/norms.hpp"
#include "wfa/parallel.hpp"
#include "wfa/rng.hpp"

namespace wfa {

namespace {

void check_symbol_range(const WeightedAutomaton& A, const Str& x) {
  const int k = A.alphabet().size();
  for (Symbol a : x) {
    if (a < 0 || a >= k)
      throw DomainError("string symbol index " + std::to_string(a) + " not in alphabet of size " +
                        std::to_string(k));
  }
}

}  // namespace

WeightedAutomaton::WeightedAutomaton(Alphabet alphabet, Eigen::VectorXd alpha,
                                     Eigen::VectorXd beta,
                                     std::vector<Eigen::MatrixXd> transitions)
    : alphabet_(std::move(alphabet)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      trans_(std::move(transitions)) {
  const auto n = alpha_.size();
  if (n < 1) throw DomainError("an automaton needs at least one state");
  if (beta_.size() != n) throw DomainError("alpha and beta must have the same length");
  if (static_cast<int>(trans_.size()) != alphabet_.size())
    throw DomainError("expected exactly one transition matrix per alphabet symbol");
  if (!alpha_.allFinite() || !beta_.allFinite())
    throw DomainError("automaton weights must be finite");
  for (const Eigen::MatrixXd& M : trans_) {
    if (M.rows() != n || M.cols() != n)
      throw DomainError("transition matrices must be n x n");
    if (!M.allFinite()) throw DomainError("automaton weights must be finite");
  }
}

const Eigen::MatrixXd& WeightedAutomaton::transition(Symbol a) const {
  if (a < 0 || a >= static_cast<int>(trans_.size()))
    throw DomainError("symbol index out of range");
  return trans_[static_cast<std::size_t>(a)];
}

double evaluate(const WeightedAutomaton& A, const Str& x) {
  check_symbol_range(A, x);
  Eigen::RowVectorXd state = A.alpha().transpose();
  for (Symbol a : x) state = state * A.transition(a);
  return state * A.beta();
}

double evaluate_path_sum(const WeightedAutomaton& A, const Str& x, std::uint64_t max_paths) {
  check_symbol_range(A, x);
  const int n = A.num_states();
  const std::size_t t = x.size();
  double paths = std::pow(static_cast<double>(n), static_cast<double>(t + 1));
  if (paths > static_cast<double>(max_paths))
    throw ResourceError("path enumeration needs " + std::to_string(paths) +
                        " paths, above the guard of " + std::to_string(max_paths));

  // Odometer over (q_0, ..., q_t) in [n]^(t+1).
  std::vector<int> q(t + 1, 0);
  double total = 0.0;
  for (;;) {
    double w = A.alpha()(q[0]);
    for (std::size_t s = 1; s <= t; ++s) w *= A.transition(x[s - 1])(q[s - 1], q[s]);
    total += w * A.beta()(q[t]);

    std::size_t pos = 0;
    while (pos <= t && ++q[pos] == n) q[pos++] = 0;
    if (pos > t) break;
  }
  return total;
}

WeightedAutomaton add(const WeightedAutomaton& A, const WeightedAutomaton& B) {
  if (A.alphabet() != B.alphabet()) throw DomainError("cannot add automata over different alphabets");
  if (A.num_states() != B.num_states())
    throw DomainError("cannot add automata with different state counts");
  std::vector<Eigen::MatrixXd> trans;
  trans.reserve(A.transitions().size());
  for (int a = 0; a < A.alphabet().size(); ++a) trans.push_back(A.transition(a) + B.transition(a));
  return WeightedAutomaton(A.alphabet(), A.alpha() + B.alpha(), A.beta() + B.beta(),
                           std::move(trans));
}

WeightedAutomaton scale(double c, const WeightedAutomaton& A) {
  if (!std::isfinite(c)) throw DomainError("scale factor must be finite");
  std::vector<Eigen::MatrixXd> trans;
  trans.reserve(A.transitions().size());
  for (const Eigen::MatrixXd& M : A.transitions()) trans.push_back(c * M);
  return WeightedAutomaton(A.alphabet(), c * A.alpha(), c * A.beta(), std::move(trans));
}

WeightedAutomaton conjugate(const WeightedAutomaton& A, const Eigen::MatrixXd& basis,
                            double max_condition) {
  const int n = A.num_states();
  if (basis.rows() != n || basis.cols() != n)
    throw DomainError("conjugation basis must be n x n");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n - 1);
  if (!(smin > 0.0) || smax / smin > max_condition)
    throw NumericError("conjugation basis is near-singular (condition number above " +
                       std::to_string(max_condition) + ")");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
  std::vector<Eigen::MatrixXd> trans;
  trans.reserve(A.transitions().size());
  for (const Eigen::MatrixXd& M : A.transitions()) trans.push_back(lu.solve(M * basis));
  return WeightedAutomaton(A.alphabet(), basis.transpose() * A.alpha(), lu.solve(A.beta()),
                           std::move(trans));
}

WeightedAutomaton make_dfa(const Alphabet& alphabet, int num_states,
                           const std::vector<std::vector<int>>& next_state, int initial_state,
                           const std::vector<int>& accepting) {
  const int n = num_states;
  const int k = alphabet.size();
  if (n < 1) throw DomainError("a DFA needs at least one state");
  if (initial_state < 0 || initial_state >= n) throw DomainError("initial state out of range");
  if (static_cast<int>(next_state.size()) != n)
    throw DomainError("transition table must have one row per state");

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  alpha(initial_state) = 1.0;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
  for (int s : accepting) {
    if (s < 0 || s >= n) throw DomainError("accepting state out of range");
    beta(s) = 1.0;
  }
  std::vector<Eigen::MatrixXd> trans(static_cast<std::size_t>(k), Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(next_state[static_cast<std::size_t>(i)].size()) != k)
      throw DomainError("transition table rows must have one entry per symbol");
    for (int a = 0; a < k; ++a) {
      const int j = next_state[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
      if (j == -1) continue;  // missing transition: all-zero row
      if (j < 0 || j >= n) throw DomainError("transition target state out of range");
      trans[static_cast<std::size_t>(a)](i, j) = 1.0;
    }
  }
  return WeightedAutomaton(alphabet, std::move(alpha), std::move(beta), std::move(trans));
}

WeightedAutomaton make_pfa(const Alphabet& alphabet, const Eigen::VectorXd& initial,
                           const std::vector<Eigen::MatrixXd>& transition_probs,
                           const Eigen::VectorXd& stopping, double tolerance) {
  WeightedAutomaton A(alphabet, initial, stopping, transition_probs);
  validate_pfa(A, tolerance);
  return A;
}

void validate_pfa(const WeightedAutomaton& A, double tolerance) {
  const int n = A.num_states();
  if ((A.alpha().array() < 0.0).any()) throw DomainError("initial weights must be nonnegative");
  if (std::abs(A.alpha().sum() - 1.0) > tolerance)
    throw DomainError("initial weights must sum to 1");
  if ((A.beta().array() < 0.0).any()) throw DomainError("stopping probabilities must be nonnegative");
  for (const Eigen::MatrixXd& M : A.transitions()) {
    if ((M.array() < 0.0).any())
      throw DomainError("transition probabilities must be nonnegative");
  }
  for (int i = 0; i < n; ++i) {
    double row = A.beta()(i);
    for (const Eigen::MatrixXd& M : A.transitions()) row += M.row(i).sum();
    if (std::abs(row - 1.0) > tolerance)
      throw DomainError("state " + std::to_string(i) + " violates stopping + transition mass = 1 (got " +
                        std::to_string(row) + ")");
  }
}

StringSample sample_pfa(const WeightedAutomaton& A, int m, std::uint64_t seed, int max_len,
                        int jobs) {
  validate_pfa(A);
  if (m < 1) throw DomainError("sample size must be at least 1");

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(A.num_states(), A.num_states());
  for (const Eigen::MatrixXd& M : A.transitions()) total += M;
  const double rho = spectral_radius(total);
  if (!(rho < 1.0))
    throw DomainError("PFA does not halt with probability 1 (transition spectral radius " +
                      std::to_string(rho) + " >= 1)");

  const int n = A.num_states();
  const int k = A.alphabet().size();
  std::vector<Str> out(static_cast<std::size_t>(m));
  parallel_for(m, jobs, [&](std::int64_t i) {
    Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(i));
    // Draw the start state.
    double u = rng.next_double();
    int state = n - 1;
    double acc = 0.0;
    for (int s = 0; s < n; ++s) {
      acc += A.alpha()(s);
      if (u < acc) {
        state = s;
        break;
      }
    }
    Str x;
    for (;;) {
      if (static_cast<int>(x.size()) > max_len)
        throw ResourceError("sampled walk exceeded max_len = " + std::to_string(max_len) +
                            "; the parameters look non-halting");
      u = rng.next_double();
      if (u < A.beta()(state)) break;
      double target = u - A.beta()(state);
      int next = -1;
      Symbol sym = 0;
      for (int a = 0; a < k && next < 0; ++a) {
        const Eigen::MatrixXd& M = A.transition(a);
        for (int j = 0; j < n; ++j) {
          target -= M(state, j);
          if (target < 0.0) {
            next = j;
            sym = a;
            break;
          }
        }
      }
      if (next < 0) {
        // Row mass fell short of u by rounding; take the last nonzero option.
        for (int a = k - 1; a >= 0 && next < 0; --a) {
          for (int j = n - 1; j >= 0; --j) {
            if (A.transition(a)(state, j) > 0.0) {
              next = j;
              sym = a;
              break;
            }
          }
        }
        if (next < 0) break;  // purely stopping state
      }
      x.push_back(sym);
      state = next;
    }
    out[static_cast<std::size_t>(i)] = std::move(x);
  });
  return StringSample(std::move(out));
}

}  // namespace wfa
