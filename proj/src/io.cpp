#include "wfa/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wfa/text.hpp"

namespace wfa {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open file: " + path);
  return in;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> fields;
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

}  // namespace

WeightedAutomaton read_wfa(std::istream& in) {
  std::vector<std::string> tokens;
  int n = -1;
  Eigen::VectorXd alpha, beta;
  bool saw_alpha = false, saw_beta = false;
  std::vector<std::pair<std::string, std::vector<double>>> raw_trans;

  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    const std::string& key = fields[0];
    if (key == "alphabet") {
      tokens.assign(fields.begin() + 1, fields.end());
    } else if (key == "n") {
      if (fields.size() != 2) throw DomainError("malformed 'n' line");
      n = static_cast<int>(parse_integer(fields[1]));
    } else if (key == "alpha" || key == "beta") {
      if (n < 1) throw DomainError("'n' must precede the weight vectors");
      if (static_cast<int>(fields.size()) != n + 1)
        throw DomainError("'" + key + "' must carry exactly n reals");
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v(i) = parse_real(fields[static_cast<std::size_t>(i) + 1]);
      (key == "alpha" ? alpha : beta) = std::move(v);
      (key == "alpha" ? saw_alpha : saw_beta) = true;
    } else if (key == "trans") {
      if (n < 1) throw DomainError("'n' must precede transition matrices");
      if (static_cast<int>(fields.size()) != n * n + 2)
        throw DomainError("'trans' must carry a token and n*n row-major reals");
      std::vector<double> entries;
      entries.reserve(static_cast<std::size_t>(n) * n);
      for (std::size_t i = 2; i < fields.size(); ++i) entries.push_back(parse_real(fields[i]));
      raw_trans.emplace_back(fields[1], std::move(entries));
    } else {
      throw DomainError("unknown automaton-file key: '" + key + "'");
    }
  }

  if (tokens.empty()) throw DomainError("automaton file is missing the alphabet");
  if (n < 1) throw DomainError("automaton file is missing 'n'");
  if (!saw_alpha || !saw_beta) throw DomainError("automaton file is missing alpha or beta");
  Alphabet alphabet(tokens);
  std::vector<Eigen::MatrixXd> trans(static_cast<std::size_t>(alphabet.size()));
  std::vector<bool> seen(static_cast<std::size_t>(alphabet.size()), false);
  for (const auto& [token, entries] : raw_trans) {
    const Symbol a = alphabet.require(token);
    if (seen[static_cast<std::size_t>(a)])
      throw DomainError("duplicate transition matrix for symbol '" + token + "'");
    seen[static_cast<std::size_t>(a)] = true;
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        M(i, j) = entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(j)];
    trans[static_cast<std::size_t>(a)] = std::move(M);
  }
  for (int a = 0; a < alphabet.size(); ++a)
    if (!seen[static_cast<std::size_t>(a)])
      throw DomainError("missing transition matrix for symbol '" + alphabet.token(a) + "'");
  return WeightedAutomaton(std::move(alphabet), std::move(alpha), std::move(beta),
                           std::move(trans));
}

WeightedAutomaton read_wfa_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_wfa(in);
}

void write_wfa(std::ostream& out, const WeightedAutomaton& A) {
  out << "alphabet";
  for (const std::string& token : A.alphabet().tokens()) out << ' ' << token;
  out << "\nn " << A.num_states() << "\nalpha";
  for (int i = 0; i < A.num_states(); ++i) out << ' ' << format_real(A.alpha()(i));
  out << "\nbeta";
  for (int i = 0; i < A.num_states(); ++i) out << ' ' << format_real(A.beta()(i));
  out << '\n';
  for (int a = 0; a < A.alphabet().size(); ++a) {
    out << "trans " << A.alphabet().token(a);
    const Eigen::MatrixXd& M = A.transition(a);
    for (int i = 0; i < A.num_states(); ++i)
      for (int j = 0; j < A.num_states(); ++j) out << ' ' << format_real(M(i, j));
    out << '\n';
  }
}

std::string to_text(const WeightedAutomaton& A) {
  std::ostringstream out;
  write_wfa(out, A);
  return out.str();
}

StringSample read_sample(std::istream& in, const Alphabet& alphabet) {
  std::vector<Str> strings;
  std::string line;
  while (std::getline(in, line)) {
    if (split_fields(line).empty()) continue;  // blank lines are ignored
    strings.push_back(parse_str(alphabet, line));
  }
  return StringSample(std::move(strings));
}

std::pair<StringSample, Alphabet> read_sample_infer(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> tokens;  // first-appearance order
  std::string line;
  while (std::getline(in, line)) {
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    for (const std::string& tok : fields) {
      if (tok == kEpsilonToken) continue;
      if (std::find(tokens.begin(), tokens.end(), tok) == tokens.end()) tokens.push_back(tok);
    }
    lines.push_back(std::move(fields));
  }
  // A sample of empty strings still needs a nonempty alphabet.
  if (tokens.empty()) tokens.push_back("a");
  Alphabet alphabet(tokens);
  std::vector<Str> strings;
  strings.reserve(lines.size());
  for (const auto& fields : lines) {
    Str x;
    for (const std::string& tok : fields)
      if (tok != kEpsilonToken) x.push_back(alphabet.require(tok));
    strings.push_back(std::move(x));
  }
  return {StringSample(std::move(strings)), std::move(alphabet)};
}

StringSample read_sample_file(const std::string& path, const Alphabet& alphabet) {
  std::ifstream in = open_or_throw(path);
  return read_sample(in, alphabet);
}

std::pair<StringSample, Alphabet> read_sample_file_infer(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_sample_infer(in);
}

void write_sample(std::ostream& out, const Alphabet& alphabet, const StringSample& S) {
  for (const Str& x : S.strings()) out << to_text(alphabet, x) << '\n';
}

}  // namespace wfa
