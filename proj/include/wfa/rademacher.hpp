#pragma once

#include <cstdint>
#include <vector>

#include "wfa/norms.hpp"
#include "wfa/sample_stats.hpp"

namespace wfa {

struct SignDraw {
  std::vector<std::int8_t> sigma;  // entries +1 / -1, one per sample string
};

enum class EstimateMode { kExact, kMonteCarlo };

// What the reported number is relative to the true empirical Rademacher
// complexity of the class.
enum class Relation { kEquals, kUpperBound, kLowerBound };

struct RademacherEstimate {
  double value = 0.0;
  EstimateMode mode = EstimateMode::kExact;
  std::uint64_t draws = 0;      // 2^m in exact mode
  double standard_error = 0.0;  // 0 in exact mode
  Relation relation = Relation::kEquals;
};

// Exact identity (r/m) E|| sum_i sigma_i e_{x_i} ||_q for the function
// class of radius r in p-norm, p in {1, 2, inf}. Exact mode requires
// m <= 24; Monte Carlo averages `draws` independent sign vectors.
RademacherEstimate rademacher_rpr(const StringSample& S, double radius, double p,
                                  EstimateMode mode, std::uint64_t draws, std::uint64_t seed,
                                  int jobs = 1);

// Upper bound (r/m) E|| sum_i sigma_i e_{u_i} e_{v_i}' ||_{S,q} through the
// chosen split: p = 2 uses the Frobenius norm, p = 1 the operator norm.
// Exact mode requires m <= 20.
RademacherEstimate rademacher_hpr_bound(const StringSample& S, const SplitAssignment& split,
                                        double radius, double p, EstimateMode mode,
                                        std::uint64_t draws, std::uint64_t seed, int jobs = 1);

struct AscentConfig {
  int restarts = 50;
  int steps = 200;
  double step_size = 0.1;  // halved on non-improvement
};

// Lower-bound estimator for the weight-bounded automaton class: per sign
// vector, projected gradient ascent maximizes the sign correlation over
// the radius-r ball with `restarts` starts. No exact algorithm is known;
// whatever the ascent finds is a valid lower bound.
RademacherEstimate rademacher_anpr_lower(const StringSample& S, const Alphabet& alphabet,
                                         int num_states, const HolderPair& hp, double radius,
                                         EstimateMode mode, std::uint64_t draws,
                                         std::uint64_t seed, const AscentConfig& config = {},
                                         int jobs = 1);

namespace detail {

// The two exact routes for E|| sum_i sigma_i e_{x_i} ||_q; they must agree
// to enumeration precision. The convolution route walks per-distinct-string
// sign sums with binomial weights instead of all 2^m sign vectors.
double rpr_exact_enumeration(const StringSample& S, double q);
double rpr_exact_convolution(const StringSample& S, double q);

// Same two routes for E|| sum_i sigma_i e_{u_i} e_{v_i}' ||_{S,q} with
// q = 2 (Frobenius) or q = inf (operator norm).
double hpr_exact_enumeration(const StringSample& S, const SplitAssignment& split, double q);
double hpr_exact_convolution(const StringSample& S, const SplitAssignment& split, double q);

// Best ascent value for one sign vector (the sup is approached from below).
double anpr_ascent_single(const StringSample& S, const std::vector<std::int8_t>& sigma,
                          const Alphabet& alphabet, int num_states, const HolderPair& hp,
                          double radius, const AscentConfig& config, std::uint64_t seed);

}  // namespace detail

}  // namespace wfa
