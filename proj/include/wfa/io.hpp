#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "wfa/automaton.hpp"

namespace wfa {

// Structured text automaton format:
//   alphabet <token> ...
//   n <states>
//   alpha <n reals>
//   beta <n reals>
//   trans <token> <n*n reals, row-major>     (one line per symbol)
// Reals are printed with 17 significant digits, so write/read round-trips
// are bit-exact.
WeightedAutomaton read_wfa(std::istream& in);
WeightedAutomaton read_wfa_file(const std::string& path);
void write_wfa(std::ostream& out, const WeightedAutomaton& A);
std::string to_text(const WeightedAutomaton& A);

// Sample files: one string per line, tokens whitespace-separated, a line
// holding only "<eps>" is the empty string.
StringSample read_sample(std::istream& in, const Alphabet& alphabet);
// Variant that builds the alphabet from tokens in first-appearance order.
std::pair<StringSample, Alphabet> read_sample_infer(std::istream& in);
StringSample read_sample_file(const std::string& path, const Alphabet& alphabet);
std::pair<StringSample, Alphabet> read_sample_file_infer(const std::string& path);
void write_sample(std::ostream& out, const Alphabet& alphabet, const StringSample& S);

}  // namespace wfa
