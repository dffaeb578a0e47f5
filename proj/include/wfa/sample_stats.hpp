#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wfa/alphabet.hpp"

namespace wfa {

int length_stat(const StringSample& S);     // L_S, max string length
int collision_stat(const StringSample& S);  // C_S, max multiplicity

// One (prefix, suffix) decomposition per sample string.
struct SplitAssignment {
  std::vector<std::pair<Str, Str>> pairs;

  // cuts[i] in [0, |x_i|] selects the prefix length of string i.
  static SplitAssignment from_cuts(const StringSample& S, const std::vector<int>& cuts);

  int size() const { return static_cast<int>(pairs.size()); }
  int max_prefix_multiplicity() const;  // U_S
  int max_suffix_multiplicity() const;  // V_S
  int objective() const;                // max(U_S, V_S)

  // DomainError unless prefix_i + suffix_i == x_i for every i.
  void validate_against(const StringSample& S) const;
};

enum class WsExactness { kExhaustive, kHeuristic };

struct WsResult {
  int value = 0;  // objective of the witness; exact W_S in exhaustive mode
  SplitAssignment witness;
  WsExactness exactness = WsExactness::kExhaustive;
};

// Number of splits Pi(|x_i| + 1), saturating at uint64 max.
std::uint64_t split_count(const StringSample& S);

// Exact minimum over all splits. Enumeration order is a mixed-radix
// counter over prefix lengths with string 0 least significant; the first
// split attaining the minimum is the witness, so ties are deterministic.
WsResult ws_exhaustive(const StringSample& S, std::uint64_t max_splits = 1'000'000);

// Randomized first-improvement local search over single-string cut moves,
// best of `restarts` independently seeded runs. The value is always an
// upper bound on W_S.
WsResult ws_heuristic(const StringSample& S, std::uint64_t seed, int restarts = 16);

}  // namespace wfa
