#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "wfa/io.hpp"
#include "wfa/sample_stats.hpp"

using namespace wfa;
using namespace wfa::testing;

TEST_SUITE_BEGIN("io");

TEST_CASE("automaton files round-trip bit-exactly") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + rng.next_int(4);
    const int k = 1 + rng.next_int(3);
    const WeightedAutomaton A = random_wfa(rng, n, k);
    const std::string once = to_text(A);
    std::istringstream in(once);
    const WeightedAutomaton B = read_wfa(in);
    CHECK(to_text(B) == once);
    // Parameters parse back bit-identically.
    CHECK(A.alpha() == B.alpha());
    CHECK(A.beta() == B.beta());
    for (int a = 0; a < k; ++a) CHECK(A.transition(a) == B.transition(a));
  }
}

TEST_CASE("automaton file errors") {
  auto reject = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_wfa(in), DomainError);
  };
  reject("n 1\nalpha 1\nbeta 1\n");                       // no alphabet
  reject("alphabet a\nalpha 1\nbeta 1\n");                // n missing/after vectors
  reject("alphabet a\nn 1\nalpha 1\n");                   // beta missing
  reject("alphabet a\nn 1\nalpha 1\nbeta 1\n");           // transition missing
  reject("alphabet a\nn 1\nalpha 1 2\nbeta 1\ntrans a 0\n");  // wrong arity
  reject("alphabet a\nn 1\nalpha x\nbeta 1\ntrans a 0\n");    // bad literal
  reject("alphabet a\nn 1\nalpha 1\nbeta 1\ntrans a 0\ntrans a 0\n");  // duplicate
  reject("alphabet a a\nn 1\nalpha 1\nbeta 1\ntrans a 0\n");           // dup token
}

TEST_CASE("sample files: sentinel, blank lines, round trip") {
  const Alphabet two = letters(2);
  std::istringstream in("a b\n<eps>\n\nb\n");
  const StringSample S = read_sample(in, two);
  REQUIRE(S.size() == 3);
  CHECK(S.at(0) == Str{0, 1});
  CHECK(S.at(1) == Str{});
  CHECK(S.at(2) == Str{1});

  std::ostringstream out;
  write_sample(out, two, S);
  CHECK(out.str() == "a b\n<eps>\nb\n");
  std::istringstream back(out.str());
  const StringSample S2 = read_sample(back, two);
  REQUIRE(S2.size() == S.size());
  for (int i = 0; i < S.size(); ++i) CHECK(S2.at(i) == S.at(i));
}

TEST_CASE("sample inference builds the alphabet in first-appearance order") {
  std::istringstream in("z y\n<eps>\nz x\n");
  const auto [S, alphabet] = read_sample_infer(in);
  REQUIRE(alphabet.size() == 3);
  CHECK(alphabet.token(0) == "z");
  CHECK(alphabet.token(1) == "y");
  CHECK(alphabet.token(2) == "x");
  CHECK(S.at(0) == Str{0, 1});
  CHECK(S.at(2) == Str{0, 2});

  std::istringstream only_eps("<eps>\n<eps>\n");
  const auto [E, eps_alphabet] = read_sample_infer(only_eps);
  CHECK(E.size() == 2);
  CHECK(eps_alphabet.size() == 1);
}

TEST_CASE("sampled output re-read through a file reproduces the stats") {
  const WeightedAutomaton G = geometric_pfa(0.5);
  const StringSample S = sample_pfa(G, 200, 99);
  std::ostringstream out;
  write_sample(out, G.alphabet(), S);
  std::istringstream in(out.str());
  const StringSample R = read_sample(in, G.alphabet());
  CHECK(length_stat(R) == length_stat(S));
  CHECK(collision_stat(R) == collision_stat(S));
  REQUIRE(R.size() == S.size());
  for (int i = 0; i < S.size(); ++i) CHECK(R.at(i) == S.at(i));
}

TEST_CASE("unknown sample tokens are rejected") {
  const Alphabet one = letters(1);
  std::istringstream in("a q\n");
  CHECK_THROWS_AS(read_sample(in, one), DomainError);
}

TEST_SUITE_END();
