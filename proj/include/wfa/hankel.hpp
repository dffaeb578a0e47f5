#pragma once

#include <cstdint>
#include <vector>

#include "wfa/norms.hpp"

namespace wfa {

struct Gramians {
  Eigen::MatrixXd reachability;   // P = beta beta' + sum_a A_a P A_a'
  Eigen::MatrixXd observability;  // Q = alpha alpha' + sum_a A_a' Q A_a
  double residual;                // max-entry residual of both equations
};

// Fixed points exist iff the Hankel operator is bounded; solved directly
// through the n^2-dimensional linear system when n^2 <= 400, else by
// fixed-point iteration.
Gramians gramians(const WeightedAutomaton& A);

struct HankelSpectrum {
  // Nonincreasing; entries below 1e-10 * s_1 are clamped to zero.
  std::vector<double> singular_values;
  Eigen::MatrixXd reachability;
  Eigen::MatrixXd observability;
  int numerical_rank = 0;
  double gramian_residual = 0.0;
};

// Singular values of the infinite Hankel operator of f_A: square roots of
// the eigenvalues of P*Q, computed on the symmetric equivalent L'QL with
// P = LL' so rounding cannot produce negative or complex output.
HankelSpectrum hankel_singular_values(const WeightedAutomaton& A);

// lp norm of the Hankel singular values, p in [1, inf].
double schatten_hankel_norm(const WeightedAutomaton& A, double p);

struct TruncatedHankel {
  std::vector<Str> prefixes;  // all strings up to prefix_len, length-then-lex
  std::vector<Str> suffixes;  // all strings up to suffix_len, length-then-lex
  Eigen::MatrixXd block;      // block(i, j) = evaluate(A, prefixes[i] suffixes[j])
};

// Exact dense sub-block oracle; every entry reproduces evaluate() on the
// concatenation bit for bit. Refuses blocks larger than max_entries.
TruncatedHankel truncated_hankel(const WeightedAutomaton& A, int prefix_len, int suffix_len,
                                 std::uint64_t max_entries = 4'000'000);

// Singular values of the truncated block, nonincreasing.
std::vector<double> truncated_hankel_svd(const WeightedAutomaton& A, int prefix_len,
                                         int suffix_len,
                                         std::uint64_t max_entries = 4'000'000);

// All strings of length <= max_length in length-then-lexicographic order;
// shared by the truncated oracle and the enumeration-based norms.
std::vector<Str> enumerate_strings(int alphabet_size, int max_length,
                                   std::uint64_t max_strings);

}  // namespace wfa
