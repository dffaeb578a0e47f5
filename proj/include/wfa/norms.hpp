#pragma once

#include <limits>
#include <optional>

#include "wfa/automaton.hpp"

namespace wfa {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Conjugate exponents 1/p + 1/q = 1. Only p in {1, 2, inf} is supported:
// those cover every worked class here, and general induced q-norms are
// intractable anyway.
struct HolderPair {
  double p;
  double q;
  static HolderPair from_p(double p);
};

double vector_norm(const Eigen::VectorXd& v, double p);  // any p in [1, inf]

// q = 1: max absolute column sum; q = inf: max absolute row sum;
// q = 2: largest singular value.
double induced_matrix_norm(const Eigen::MatrixXd& M, double q);

// max{ ||alpha||_p, ||beta||_q, max_a ||A_a||_q }. Membership in the
// weight-bounded class of radius r is wfa_norm(A, hp) <= r.
double wfa_norm(const WeightedAutomaton& A, const HolderPair& hp);

enum class NormStatus { kExact, kTruncatedLowerBound };

struct FunctionNormResult {
  double value = 0.0;
  NormStatus status = NormStatus::kExact;
  std::optional<int> truncation_length;
  // For finite p, bounds the p-th-power mass of the strings beyond the
  // cutoff; for p = inf, bounds |f| there. Present only when a weight
  // radius r < 1 with k * r^p < 1 certifies a geometric tail.
  std::optional<double> tail_bound;
};

// Kronecker square sum  M = sum_a A_a (x) A_a  (n^2 x n^2).
Eigen::MatrixXd kronecker_self_sum(const WeightedAutomaton& A);

// rho(M): dense eigenvalues when n^2 <= 400, else power iteration with
// tolerance 1e-10 capped at 10^4 iterations.
double spectral_radius(const Eigen::MatrixXd& M);
double kron_sum_spectral_radius(const WeightedAutomaton& A);

// Exact squared 2-norm (alpha(x)alpha)' (I - M)^-1 (beta(x)beta) when
// rho(M) < 1; otherwise a truncated lower bound from direct summation.
// The criterion is sufficient, not necessary: cancellation can keep the
// series finite with rho >= 1, and that regime is reported as truncated.
FunctionNormResult l2_norm_squared(const WeightedAutomaton& A);

// (sum_{|x| <= max_length} |f(x)|^p)^(1/p), or the max for p = inf; always
// a truncated lower bound. Enumeration beyond max_strings is refused.
FunctionNormResult lp_norm_truncated(const WeightedAutomaton& A, double p, int max_length,
                                     std::uint64_t max_strings = 2'000'000);

struct HankelBoundedness {
  bool bounded;
  double kron_spectral_radius;  // the certificate
};

// Bounded Hankel operator <=> finite 2-norm; decided here through the
// sufficient Kronecker criterion rho(M) < 1.
HankelBoundedness hankel_bounded(const WeightedAutomaton& A);

}  // namespace wfa
