#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "wfa/hankel.hpp"

using namespace wfa;
using namespace wfa::testing;

TEST_SUITE_BEGIN("hankel");

TEST_CASE("gramians: scalar fixed point and residuals") {
  const Gramians g = gramians(geometric_wfa(0.5));
  CHECK(g.reachability(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(g.observability(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(g.residual <= 1e-10);

  const Gramians z = gramians(scale(0.0, geometric_wfa(0.5)));
  CHECK(z.reachability.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(z.observability.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedAutomaton A = random_wfa_in_ball(rng, 2, 2, HolderPair::from_p(2.0), 0.6);
    const Gramians gr = gramians(A);
    CHECK(gr.residual <= 1e-10);
    // Symmetric positive semidefinite.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(gr.reachability);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eq(gr.observability);
    CHECK(ep.eigenvalues().minCoeff() >= -1e-10);
    CHECK(eq.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("gramians refuse unbounded Hankel operators") {
  const WeightedAutomaton all = make_dfa(letters(1), 1, {{0}}, 0, {0});
  CHECK_THROWS_AS(gramians(all), DomainError);
}

TEST_CASE("hankel singular values: geometric and zero") {
  const HankelSpectrum geo = hankel_singular_values(geometric_wfa(0.5));
  REQUIRE(geo.singular_values.size() == 1);
  CHECK(geo.singular_values[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(geo.numerical_rank == 1);

  const HankelSpectrum zero = hankel_singular_values(scale(0.0, geometric_wfa(0.5)));
  CHECK(zero.numerical_rank == 0);
  for (double s : zero.singular_values) CHECK(s == 0.0);
}

TEST_CASE("spectrum is a representation invariant") {
  Rng rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + rng.next_int(2);
    const WeightedAutomaton A = random_wfa_in_ball(rng, n, 2, HolderPair::from_p(2.0), 0.6);
    Eigen::MatrixXd basis(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) basis(i, j) = rng.next_normal() + (i == j ? 2.5 : 0.0);
    const HankelSpectrum original = hankel_singular_values(A);
    const HankelSpectrum conjugated = hankel_singular_values(conjugate(A, basis));
    const double scale_ref = std::max(1e-30, original.singular_values[0]);
    for (std::size_t i = 0; i < original.singular_values.size(); ++i) {
      CHECK(std::abs(original.singular_values[i] - conjugated.singular_values[i]) <=
            1e-8 * scale_ref);
    }
  }
}

TEST_CASE("schatten norms: closed form, ordering, domain") {
  const WeightedAutomaton geo = geometric_wfa(0.5);
  for (double p : {1.0, 2.0, kInfinity})
    CHECK(schatten_hankel_norm(geo, p) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(schatten_hankel_norm(scale(0.0, geo), 1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(schatten_hankel_norm(geo, 0.5), DomainError);

  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedAutomaton A = random_wfa_in_ball(rng, 2, 2, HolderPair::from_p(2.0), 0.6);
    const double s_inf = schatten_hankel_norm(A, kInfinity);
    const double s_2 = schatten_hankel_norm(A, 2.0);
    const double s_1 = schatten_hankel_norm(A, 1.0);
    CHECK(s_inf <= s_2 + 1e-12);
    CHECK(s_2 <= s_1 + 1e-12);
  }
}

TEST_CASE("string enumeration is length-then-lex") {
  const auto strings = enumerate_strings(2, 2, 1000);
  REQUIRE(strings.size() == 7);
  CHECK(strings[0] == Str{});
  CHECK(strings[1] == Str{0});
  CHECK(strings[2] == Str{1});
  CHECK(strings[3] == Str{0, 0});
  CHECK(strings[4] == Str{0, 1});
  CHECK(strings[5] == Str{1, 0});
  CHECK(strings[6] == Str{1, 1});
}

TEST_CASE("truncated block reproduces evaluate exactly") {
  Rng rng(37);
  const WeightedAutomaton A = random_wfa(rng, 2, 2);
  const TruncatedHankel th = truncated_hankel(A, 3, 2);
  for (std::size_t i = 0; i < th.prefixes.size(); ++i) {
    for (std::size_t j = 0; j < th.suffixes.size(); ++j) {
      Str joined = th.prefixes[i];
      joined.insert(joined.end(), th.suffixes[j].begin(), th.suffixes[j].end());
      CHECK(th.block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
            evaluate(A, joined));
    }
  }
}

TEST_CASE("truncated svd: geometric closed form and the rank bound") {
  const auto values = truncated_hankel_svd(geometric_wfa(0.5), 20, 20);
  REQUIRE(!values.empty());
  CHECK(std::abs(values[0] - 4.0 / 3.0) <= 1e-6);
  for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] <= 1e-9);

  const auto zeros = truncated_hankel_svd(scale(0.0, geometric_wfa(0.5)), 6, 6);
  for (double s : zeros) CHECK(s == doctest::Approx(0.0));

  // Rank of any sub-block is bounded by the state count.
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const WeightedAutomaton A = random_wfa(rng, 2, 2);
    const auto sv = truncated_hankel_svd(A, 4, 4);
    REQUIRE(sv.size() > 2);
    CHECK(sv[2] <= 1e-8 * std::max(1.0, sv[0]));
  }

  CHECK_THROWS_AS(truncated_hankel_svd(three_state_demo(), 12, 12, /*max_entries=*/1000),
                  ResourceError);
}

TEST_CASE("truncated singular values converge monotonically to the gramian values") {
  Rng rng(43);
  const WeightedAutomaton A = random_wfa_in_ball(rng, 2, 1, HolderPair::from_p(2.0), 0.7);
  const HankelSpectrum spectrum = hankel_singular_values(A);
  double previous_top = 0.0;
  double previous_gap = kInfinity;
  for (int L : {2, 6, 12, 24}) {
    const auto sv = truncated_hankel_svd(A, L, L);
    CHECK(sv[0] >= previous_top - 1e-12);
    previous_top = sv[0];
    double gap = 0.0;
    for (std::size_t i = 0; i < spectrum.singular_values.size(); ++i) {
      const double trunc = i < sv.size() ? sv[i] : 0.0;
      gap = std::max(gap, std::abs(spectrum.singular_values[i] - trunc));
    }
    CHECK(gap <= previous_gap + 1e-12);
    previous_gap = gap;
  }
  CHECK(previous_gap <= 1e-6 * std::max(1.0, spectrum.singular_values[0]));
}

TEST_CASE("boundedness and the schatten norm are finite together") {
  // rho < 1: both succeed (checked above); rho >= 1: both refuse.
  const WeightedAutomaton all = make_dfa(letters(1), 1, {{0}}, 0, {0});
  CHECK_FALSE(hankel_bounded(all).bounded);
  CHECK_THROWS_AS(schatten_hankel_norm(all, 2.0), DomainError);
}

TEST_SUITE_END();
