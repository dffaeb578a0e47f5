#include "wfa/sample_stats.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "wfa/errors.hpp"
#include "wfa/rng.hpp"

namespace wfa {

int length_stat(const StringSample& S) { return S.max_length(); }

int collision_stat(const StringSample& S) { return S.max_multiplicity(); }

SplitAssignment SplitAssignment::from_cuts(const StringSample& S, const std::vector<int>& cuts) {
  if (static_cast<int>(cuts.size()) != S.size())
    throw DomainError("need exactly one cut per sample string");
  SplitAssignment split;
  split.pairs.reserve(cuts.size());
  for (int i = 0; i < S.size(); ++i) {
    const Str& x = S.at(i);
    const int c = cuts[static_cast<std::size_t>(i)];
    if (c < 0 || c > static_cast<int>(x.size()))
      throw DomainError("cut position out of range for string " + std::to_string(i));
    split.pairs.emplace_back(Str(x.begin(), x.begin() + c), Str(x.begin() + c, x.end()));
  }
  return split;
}

namespace {

int max_side_multiplicity(const std::vector<std::pair<Str, Str>>& pairs, bool prefix_side) {
  std::map<Str, int> counts;
  int best = 0;
  for (const auto& [u, v] : pairs) best = std::max(best, ++counts[prefix_side ? u : v]);
  return best;
}

}  // namespace

int SplitAssignment::max_prefix_multiplicity() const { return max_side_multiplicity(pairs, true); }

int SplitAssignment::max_suffix_multiplicity() const { return max_side_multiplicity(pairs, false); }

int SplitAssignment::objective() const {
  return std::max(max_prefix_multiplicity(), max_suffix_multiplicity());
}

void SplitAssignment::validate_against(const StringSample& S) const {
  if (static_cast<int>(pairs.size()) != S.size())
    throw DomainError("split holds " + std::to_string(pairs.size()) + " pairs for a sample of " +
                      std::to_string(S.size()));
  for (int i = 0; i < S.size(); ++i) {
    const auto& [u, v] = pairs[static_cast<std::size_t>(i)];
    Str joined = u;
    joined.insert(joined.end(), v.begin(), v.end());
    if (joined != S.at(i))
      throw DomainError("split pair " + std::to_string(i) + " does not concatenate to its string");
  }
}

std::uint64_t split_count(const StringSample& S) {
  std::uint64_t count = 1;
  for (const Str& x : S.strings()) {
    const std::uint64_t factor = x.size() + 1;
    if (count > std::numeric_limits<std::uint64_t>::max() / factor)
      return std::numeric_limits<std::uint64_t>::max();
    count *= factor;
  }
  return count;
}

WsResult ws_exhaustive(const StringSample& S, std::uint64_t max_splits) {
  const std::uint64_t total = split_count(S);
  if (total > max_splits)
    throw ResourceError("sample admits " + std::to_string(total) +
                        " splits, above the guard of " + std::to_string(max_splits) +
                        "; use ws_heuristic");

  const int m = S.size();
  std::vector<int> cuts(static_cast<std::size_t>(m), 0);
  int best = std::numeric_limits<int>::max();
  std::vector<int> best_cuts = cuts;
  // Mixed-radix counter over prefix lengths, string 0 least significant;
  // the first split attaining the minimum wins, so ties are deterministic.
  for (;;) {
    const SplitAssignment split = SplitAssignment::from_cuts(S, cuts);
    const int objective = split.objective();
    if (objective < best) {
      best = objective;
      best_cuts = cuts;
    }
    int pos = 0;
    while (pos < m &&
           ++cuts[static_cast<std::size_t>(pos)] > static_cast<int>(S.at(pos).size()))
      cuts[static_cast<std::size_t>(pos++)] = 0;
    if (pos >= m) break;
  }
  return {best, SplitAssignment::from_cuts(S, best_cuts), WsExactness::kExhaustive};
}

namespace {

// Count histogram supporting O(1) increment/decrement of a key's count and
// O(1) max-count queries, used to score single-cut moves quickly.
class SideCounts {
 public:
  explicit SideCounts(int capacity) : count_of_count_(static_cast<std::size_t>(capacity) + 2, 0) {}

  void add(const Str& key) {
    const int c = ++counts_[key];
    if (c > 1) --count_of_count_[static_cast<std::size_t>(c - 1)];
    ++count_of_count_[static_cast<std::size_t>(c)];
    max_count_ = std::max(max_count_, c);
  }

  void remove(const Str& key) {
    auto it = counts_.find(key);
    const int c = it->second;
    --count_of_count_[static_cast<std::size_t>(c)];
    if (c == 1)
      counts_.erase(it);
    else {
      --it->second;
      ++count_of_count_[static_cast<std::size_t>(c - 1)];
    }
    if (c == max_count_ && count_of_count_[static_cast<std::size_t>(c)] == 0) --max_count_;
  }

  int max_count() const { return max_count_; }

 private:
  std::map<Str, int> counts_;
  std::vector<int> count_of_count_;
  int max_count_ = 0;
};

}  // namespace

WsResult ws_heuristic(const StringSample& S, std::uint64_t seed, int restarts) {
  if (restarts < 1) throw DomainError("restarts must be >= 1");
  const int m = S.size();

  int best = std::numeric_limits<int>::max();
  std::vector<int> best_cuts;

  for (int run = 0; run < restarts; ++run) {
    Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(run));
    std::vector<int> cuts(static_cast<std::size_t>(m));
    SideCounts prefixes(m), suffixes(m);
    for (int i = 0; i < m; ++i) {
      const Str& x = S.at(i);
      const int c = rng.next_int(static_cast<int>(x.size()) + 1);
      cuts[static_cast<std::size_t>(i)] = c;
      prefixes.add(Str(x.begin(), x.begin() + c));
      suffixes.add(Str(x.begin() + c, x.end()));
    }

    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;

    bool improved = true;
    while (improved) {
      improved = false;
      // Random visiting order each pass; first string with an improving
      // move is updated to its best cut.
      for (int i = m - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(rng.next_int(i + 1))]);
      for (int idx : order) {
        const Str& x = S.at(idx);
        const int old_cut = cuts[static_cast<std::size_t>(idx)];
        const int current = std::max(prefixes.max_count(), suffixes.max_count());
        int best_move = -1;
        int best_move_value = current;
        for (int c = 0; c <= static_cast<int>(x.size()); ++c) {
          if (c == old_cut) continue;
          prefixes.remove(Str(x.begin(), x.begin() + old_cut));
          suffixes.remove(Str(x.begin() + old_cut, x.end()));
          prefixes.add(Str(x.begin(), x.begin() + c));
          suffixes.add(Str(x.begin() + c, x.end()));
          const int moved = std::max(prefixes.max_count(), suffixes.max_count());
          prefixes.remove(Str(x.begin(), x.begin() + c));
          suffixes.remove(Str(x.begin() + c, x.end()));
          prefixes.add(Str(x.begin(), x.begin() + old_cut));
          suffixes.add(Str(x.begin() + old_cut, x.end()));
          if (moved < best_move_value) {
            best_move_value = moved;
            best_move = c;
          }
        }
        if (best_move >= 0) {
          prefixes.remove(Str(x.begin(), x.begin() + old_cut));
          suffixes.remove(Str(x.begin() + old_cut, x.end()));
          prefixes.add(Str(x.begin(), x.begin() + best_move));
          suffixes.add(Str(x.begin() + best_move, x.end()));
          cuts[static_cast<std::size_t>(idx)] = best_move;
          improved = true;
          break;
        }
      }
    }

    const int value = std::max(prefixes.max_count(), suffixes.max_count());
    if (value < best) {
      best = value;
      best_cuts = cuts;
    }
  }
  return {best, SplitAssignment::from_cuts(S, best_cuts), WsExactness::kHeuristic};
}

}  // namespace wfa
