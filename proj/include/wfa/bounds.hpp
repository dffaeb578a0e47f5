#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wfa/automaton.hpp"

namespace wfa {

struct BoundTerm {
  std::string name;
  double value = 0.0;
  std::string anchor;  // short id of the inequality the term comes from
};

// Evaluated right-hand side of a bound: the value, its additive term
// breakdown, an echo of the inputs, and any warnings (kappa-dependent
// terms carry one unconditionally).
struct BoundReport {
  double value = 0.0;
  std::vector<BoundTerm> terms;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::string> warnings;
  std::optional<double> lower_value;  // populated by sandwich-style bounds
};

std::string to_text(const BoundReport& report);
std::string csv_header(const BoundReport& report);
std::string to_csv_row(const BoundReport& report);

// log of  r^d (2 + r^(L+1)(L+2)/eta)^d  with d = n(kn+2); log-space keeps
// large L and r from overflowing.
double log_covering_number_bound(double eta, int n, int k, double r, int max_length);

// eta-optimized covering bound on the empirical Rademacher complexity of
// the weight-bounded class: inf_eta ( eta + r^(L+2) sqrt(2 d log(2r +
// r^(L+2)(L+2)/eta) / m) ). Golden-section on log eta plus a 100-point
// grid; any evaluated eta is feasible, so the overall min is a valid bound.
BoundReport bound_ranr(int m, int n, int k, double r, int max_length);

// Radius-1 closed form sqrt(2 n(kn+2) log(m+2) / m) + (L+2)/m.
BoundReport bound_an1(int m, int n, int k, int max_length);

// r sqrt(2 C log(2m)) / m, C the max string multiplicity.
BoundReport bound_r1r(int m, double r, double collisions);

// Sandwich r/sqrt(2m) <= . <= r/sqrt(m); value is the upper end and
// lower_value the lower end.
BoundReport bound_r2r(int m, double r);

// (2/3)(1 + 4/log 2) M log(d+1) + (1 + 4/sqrt(2 log 2)) sqrt(2 v log(d+1)):
// expected operator norm of a centered iid matrix sum with range bound M,
// variance proxy v and intrinsic dimension d.
double tropp_moment_bound(double op_range, double variance, double intrinsic_dim);

// (r/m) [ (2/3)(1 + 4/log 2) log(2m+1)
//         + (1 + 4/sqrt(2 log 2)) sqrt(2 W log(2m+1)) ].
BoundReport bound_h1r(int m, double r, double split_collisions);

// r / sqrt(m).
BoundReport bound_h2r(int m, double r);

struct DistParams {
  double d_max = 0.0;       // max string probability seen up to the cutoff
  bool d_max_exact = false; // true when the tail mass cannot beat the max
  double tail_mass = 0.0;
  double d_max_vee = 0.0;     // truncated value: a lower bound
  double d_max_vee_margin = 0.0;  // additive margin covering the tail
  int truncation_length = 0;
};

// D_max and the length-discounted prefix/suffix mass parameter of a
// halting PFA, both by enumeration up to max_length.
DistParams dist_params(const WeightedAutomaton& pfa, int max_length,
                       std::uint64_t max_strings = 2'000'000);

// Distribution-dependent corollaries; the unspecified O(sqrt(1/m)) terms
// are instantiated as kappa/sqrt(m) and flagged in warnings.
BoundReport bound_dist_r1r(int m, double r, double d_max, double kappa);
BoundReport bound_dist_h1r(int m, double r, double d_max_vee, double kappa);

struct CmWmReport {
  int m = 0;
  int trials = 0;
  double c_mean = 0.0, c_stderr = 0.0;  // Monte-Carlo E[C_S]
  double w_mean = 0.0, w_stderr = 0.0;  // Monte-Carlo E[W_S]
  double m_d_max = 0.0;
  double m_d_max_vee = 0.0;
  double c_residual = 0.0;  // (c_mean - m D_max) / sqrt(m)
  double w_residual = 0.0;  // (w_mean - m D_max_vee) / sqrt(m)
  bool lower_inequality_ok = false;  // c_mean >= m D_max - 3 stderr
};

CmWmReport cm_wm_lemma_check(const WeightedAutomaton& pfa, int m, int trials,
                             std::uint64_t seed, int max_length, int jobs = 1);

enum class BoundClass { kAnp1, kR1r, kR2r, kH1r, kH2r };
enum class StatVariant { kEmpirical, kDistributional };

// Inputs for one of the eight generalization inequalities. Exactly one of
// the sample-stat / distribution-stat groups is consulted, selected by
// `variant`; missing required stats raise DomainError naming the field.
struct BoundQuery {
  BoundClass cls = BoundClass::kAnp1;
  StatVariant variant = StatVariant::kEmpirical;
  int m = 1;
  int n = 1;
  int k = 1;
  double radius = 1.0;     // r (ignored by the A-class, which is radius 1)
  double lipschitz = 1.0;  // mu
  double loss_bound = 1.0; // M
  double delta = 0.05;
  double kappa = 0.0;
  std::optional<double> max_length;        // L_S (empirical) or L_m (dist)
  std::optional<double> collisions;        // C_S
  std::optional<double> split_collisions;  // W_S
  std::optional<double> d_max;
  std::optional<double> d_max_vee;
};

// Complete additive slack of the selected inequality (everything to the
// right of the empirical loss), term by term.
BoundReport generalization_bound(const BoundQuery& query);

// Mean absolute loss |f_A(x) - z| over a labeled sample.
double empirical_absolute_loss(const WeightedAutomaton& A, const LabeledSample& sample);

}  // namespace wfa
