#include "wfa/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wfa {

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw DomainError("alphabet must contain at least one symbol");
  for (int i = 0; i < static_cast<int>(tokens_.size()); ++i) {
    const std::string& tok = tokens_[static_cast<std::size_t>(i)];
    if (tok.empty()) throw DomainError("alphabet tokens must be non-empty");
    if (tok == kEpsilonToken)
      throw DomainError(std::string("alphabet token may not be the reserved sentinel ") +
                        kEpsilonToken);
    if (!index_.emplace(tok, i).second)
      throw DomainError("duplicate alphabet token: '" + tok + "'");
  }
}

const std::string& Alphabet::token(Symbol a) const {
  if (a < 0 || a >= size()) throw DomainError("symbol index out of range");
  return tokens_[static_cast<std::size_t>(a)];
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::require(std::string_view token) const {
  auto found = find(token);
  if (!found) throw DomainError("symbol not in alphabet: '" + std::string(token) + "'");
  return *found;
}

std::string to_text(const Alphabet& alphabet, const Str& x) {
  if (x.empty()) return kEpsilonToken;
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ' ';
    out += alphabet.token(x[i]);
  }
  return out;
}

Str parse_str(const Alphabet& alphabet, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  Str x;
  while (in >> tok) {
    if (tok == kEpsilonToken) continue;  // the sentinel contributes nothing
    x.push_back(alphabet.require(tok));
  }
  return x;
}

StringSample::StringSample(std::vector<Str> strings) : strings_(std::move(strings)) {
  if (strings_.empty()) throw DomainError("a string sample must hold at least one string");
  for (const Str& x : strings_) {
    max_length_ = std::max(max_length_, static_cast<int>(x.size()));
    max_multiplicity_ = std::max(max_multiplicity_, ++multiplicity_[x]);
  }
}

LabeledSample::LabeledSample(std::vector<LabeledExample> items) : items_(std::move(items)) {
  if (items_.empty()) throw DomainError("a labeled sample must hold at least one example");
  for (const LabeledExample& e : items_) {
    if (!std::isfinite(e.label)) throw DomainError("labels must be finite");
  }
}

StringSample LabeledSample::inputs() const {
  std::vector<Str> xs;
  xs.reserve(items_.size());
  for (const LabeledExample& e : items_) xs.push_back(e.x);
  return StringSample(std::move(xs));
}

}  // namespace wfa
