#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfa/errors.hpp"

namespace wfa {

using Symbol = int;

// A string is a sequence of alphabet indices; the empty vector is the
// empty string. Tokens live on the Alphabet so multi-character symbols
// work everywhere.
using Str = std::vector<Symbol>;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(Symbol a) const;
  std::optional<Symbol> find(std::string_view token) const;
  Symbol require(std::string_view token) const;  // DomainError if unknown
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Alphabet& other) const { return tokens_ == other.tokens_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, Symbol, std::less<>> index_;
};

// Sentinel used on text surfaces for the empty string.
inline constexpr const char* kEpsilonToken = "<eps>";

std::string to_text(const Alphabet& alphabet, const Str& x);
Str parse_str(const Alphabet& alphabet, std::string_view text);

// Ordered multiset of strings. Immutable; multiplicity bookkeeping uses
// structural string equality, never hashes.
class StringSample {
 public:
  explicit StringSample(std::vector<Str> strings);

  int size() const { return static_cast<int>(strings_.size()); }
  const Str& at(int i) const { return strings_[static_cast<std::size_t>(i)]; }
  const std::vector<Str>& strings() const { return strings_; }

  int max_length() const { return max_length_; }            // L_S
  int max_multiplicity() const { return max_multiplicity_; }  // C_S
  const std::map<Str, int>& multiplicities() const { return multiplicity_; }

 private:
  std::vector<Str> strings_;
  std::map<Str, int> multiplicity_;
  int max_length_ = 0;
  int max_multiplicity_ = 0;
};

struct LabeledExample {
  Str x;
  double label = 0.0;
};

class LabeledSample {
 public:
  explicit LabeledSample(std::vector<LabeledExample> items);

  int size() const { return static_cast<int>(items_.size()); }
  const LabeledExample& at(int i) const { return items_[static_cast<std::size_t>(i)]; }
  StringSample inputs() const;

 private:
  std::vector<LabeledExample> items_;
};

}  // namespace wfa
