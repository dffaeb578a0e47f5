#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wfa/alphabet.hpp"

namespace wfa {

// Weighted finite automaton <alpha, beta, {A_a}> over the reals. The value
// of a string is alpha' * A_{x_1} * ... * A_{x_t} * beta. Immutable after
// construction; all operations on it are pure.
class WeightedAutomaton {
 public:
  WeightedAutomaton(Alphabet alphabet, Eigen::VectorXd alpha, Eigen::VectorXd beta,
                    std::vector<Eigen::MatrixXd> transitions);

  int num_states() const { return static_cast<int>(alpha_.size()); }
  const Alphabet& alphabet() const { return alphabet_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  const Eigen::MatrixXd& transition(Symbol a) const;
  const std::vector<Eigen::MatrixXd>& transitions() const { return trans_; }

 private:
  Alphabet alphabet_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd beta_;
  std::vector<Eigen::MatrixXd> trans_;
};

// Left-to-right vector-matrix chain, O(|x| n^2); never materializes A_x.
double evaluate(const WeightedAutomaton& A, const Str& x);

// Explicit sum over all n^(|x|+1) state paths. Testing oracle for
// evaluate; refuses runs past max_paths.
double evaluate_path_sum(const WeightedAutomaton& A, const Str& x,
                         std::uint64_t max_paths = 1'000'000);

// Parameter-wise vector-space operations (componentwise on alpha, beta and
// each transition matrix; this is not function addition).
WeightedAutomaton add(const WeightedAutomaton& A, const WeightedAutomaton& B);
WeightedAutomaton scale(double c, const WeightedAutomaton& A);

// <Q' alpha, Q^-1 beta, {Q^-1 A_a Q}>, which computes the same function.
// Rejects basis matrices with condition number above max_condition.
WeightedAutomaton conjugate(const WeightedAutomaton& A, const Eigen::MatrixXd& basis,
                            double max_condition = 1e12);

// DFA as a 0/1-weighted automaton. next_state is n rows of k entries with
// -1 for a missing transition (all-zero matrix row).
WeightedAutomaton make_dfa(const Alphabet& alphabet, int num_states,
                           const std::vector<std::vector<int>>& next_state,
                           int initial_state, const std::vector<int>& accepting);

// PFA: initial distribution, per-symbol transition probabilities, and
// per-state stopping probabilities with
// stopping(i) + sum_a sum_j transition_probs[a](i,j) = 1 per state.
WeightedAutomaton make_pfa(const Alphabet& alphabet, const Eigen::VectorXd& initial,
                           const std::vector<Eigen::MatrixXd>& transition_probs,
                           const Eigen::VectorXd& stopping, double tolerance = 1e-9);

// Throws DomainError unless A satisfies the PFA constraints above.
void validate_pfa(const WeightedAutomaton& A, double tolerance = 1e-9);

// m independent forward walks; string i uses the stream derived from
// (seed, i), so output is reproducible and scheduling-independent. Walks
// longer than max_len raise ResourceError (non-halting parameters).
StringSample sample_pfa(const WeightedAutomaton& A, int m, std::uint64_t seed,
                        int max_len = 10'000, int jobs = 1);

}  // namespace wfa
