#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "wfa/bounds.hpp"
#include "wfa/rademacher.hpp"

using namespace wfa;
using namespace wfa::testing;

namespace {

StringSample sample_of(std::vector<Str> xs) { return StringSample(std::move(xs)); }

// Sample with guaranteed repeats: m strings over a tiny pool.
StringSample colliding_sample(Rng& rng, int m) {
  std::vector<Str> pool = {{}, {0}, {1}, {0, 1}};
  std::vector<Str> xs;
  xs.push_back(pool[0]);
  xs.push_back(pool[0]);  // at least one collision
  for (int i = 2; i < m; ++i) xs.push_back(pool[static_cast<std::size_t>(rng.next_int(4))]);
  return StringSample(std::move(xs));
}

}  // namespace

TEST_SUITE_BEGIN("rademacher");

TEST_CASE("function-class identity: closed-form fixtures") {
  const double r = 1.7;
  // One string: the sign never changes the norm.
  const RademacherEstimate one =
      rademacher_rpr(sample_of({{0, 1}}), r, 2.0, EstimateMode::kExact, 0, 0);
  CHECK(one.value == doctest::Approx(r).epsilon(1e-14));
  CHECK(one.draws == 2);
  CHECK(one.relation == Relation::kEquals);

  // Two distinct strings, p = 2: the norm is sqrt(2) for all sign vectors.
  const RademacherEstimate distinct =
      rademacher_rpr(sample_of({{0}, {1}}), r, 2.0, EstimateMode::kExact, 0, 0);
  CHECK(distinct.value == doctest::Approx(r / std::sqrt(2.0)).epsilon(1e-14));

  // Two equal strings, p = 2: the norm is 0 or 2, each with probability 1/2.
  const RademacherEstimate equal =
      rademacher_rpr(sample_of({{0}, {0}}), r, 2.0, EstimateMode::kExact, 0, 0);
  CHECK(equal.value == doctest::Approx(r / 2.0).epsilon(1e-14));
}

TEST_CASE("both exact routes agree on colliding samples") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 3 + rng.next_int(8);
    const StringSample S = colliding_sample(rng, m);
    REQUIRE(collision_stat(S) > 1);
    for (double q : {1.0, 2.0, kInfinity}) {
      const double enumerated = detail::rpr_exact_enumeration(S, q);
      const double convolved = detail::rpr_exact_convolution(S, q);
      CHECK(std::abs(enumerated - convolved) <= 1e-12 * std::max(1.0, enumerated));
    }
  }
}

TEST_CASE("exact guard and scale linearity") {
  std::vector<Str> many(30, Str{});
  CHECK_THROWS_AS(rademacher_rpr(sample_of(many), 1.0, 2.0, EstimateMode::kExact, 0, 0),
                  ResourceError);

  Rng rng(11);
  const StringSample S = random_sample(rng, 6, 2, 3);
  for (double p : {1.0, 2.0, kInfinity}) {
    const double v1 = rademacher_rpr(S, 1.0, p, EstimateMode::kExact, 0, 0).value;
    const double v2 = rademacher_rpr(S, 2.0, p, EstimateMode::kExact, 0, 0).value;
    CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-15));
  }
}

TEST_CASE("sandwich and collision bounds hold per sample") {
  Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + rng.next_int(10);
    const StringSample S =
        (trial % 3 == 0) ? colliding_sample(rng, std::max(2, m)) : random_sample(rng, m, 2, 4);
    const int mm = S.size();
    const double r = 0.5 + rng.next_double();

    const double exact2 = rademacher_rpr(S, r, 2.0, EstimateMode::kExact, 0, 0).value;
    CHECK(exact2 >= r / std::sqrt(2.0 * mm) - 1e-12);
    CHECK(exact2 <= r / std::sqrt(static_cast<double>(mm)) + 1e-12);

    const double exact1 = rademacher_rpr(S, r, 1.0, EstimateMode::kExact, 0, 0).value;
    CHECK(exact1 <= bound_r1r(mm, r, collision_stat(S)).value + 1e-12);
  }
}

TEST_CASE("split-class bound: fixtures and the Frobenius route") {
  const double r = 1.3;
  const StringSample single = sample_of({{0, 1}});
  const SplitAssignment split_single = SplitAssignment::from_cuts(single, {1});
  for (double p : {1.0, 2.0}) {
    const RademacherEstimate est =
        rademacher_hpr_bound(single, split_single, r, p, EstimateMode::kExact, 0, 0);
    CHECK(est.value == doctest::Approx(r).epsilon(1e-14));
    CHECK(est.relation == Relation::kUpperBound);
  }

  // Two strings with distinct prefixes and suffixes: Frobenius sqrt(2).
  const StringSample two = sample_of({{0, 0}, {1, 1}});
  const SplitAssignment split_two = SplitAssignment::from_cuts(two, {1, 1});
  const RademacherEstimate frob =
      rademacher_hpr_bound(two, split_two, r, 2.0, EstimateMode::kExact, 0, 0);
  CHECK(frob.value == doctest::Approx(r / std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(
      rademacher_hpr_bound(two, split_two, r, /*p=*/kInfinity, EstimateMode::kExact, 0, 0),
      DomainError);
}

TEST_CASE("split-class exact routes agree; operator norm below Frobenius") {
  Rng rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 2 + rng.next_int(6);
    const StringSample S = random_sample(rng, m, 2, 3);
    std::vector<int> cuts(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      cuts[static_cast<std::size_t>(i)] = rng.next_int(static_cast<int>(S.at(i).size()) + 1);
    const SplitAssignment split = SplitAssignment::from_cuts(S, cuts);
    for (double q : {2.0, kInfinity}) {
      const double enumerated = detail::hpr_exact_enumeration(S, split, q);
      const double convolved = detail::hpr_exact_convolution(S, split, q);
      CHECK(std::abs(enumerated - convolved) <= 1e-12 * std::max(1.0, enumerated));
    }
    const double op = detail::hpr_exact_convolution(S, split, kInfinity);
    const double fro = detail::hpr_exact_convolution(S, split, 2.0);
    CHECK(op <= fro + 1e-12);
  }
}

TEST_CASE("split-class bound respects the closed form r/sqrt(m)") {
  Rng rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 1 + rng.next_int(9);
    const StringSample S = random_sample(rng, m, 2, 4);
    const WsResult ws = ws_exhaustive(S);
    const double r = 0.5 + rng.next_double();
    const double exact =
        rademacher_hpr_bound(S, ws.witness, r, 2.0, EstimateMode::kExact, 0, 0).value;
    CHECK(exact <= r / std::sqrt(static_cast<double>(m)) + 1e-12);
  }
}

TEST_CASE("monte carlo agrees with exact within a few standard errors") {
  Rng rng(23);
  const StringSample S = colliding_sample(rng, 8);
  for (double p : {1.0, 2.0}) {
    const double exact = rademacher_rpr(S, 1.0, p, EstimateMode::kExact, 0, 0).value;
    const RademacherEstimate mc =
        rademacher_rpr(S, 1.0, p, EstimateMode::kMonteCarlo, 20'000, 99, /*jobs=*/4);
    REQUIRE(mc.standard_error > 0.0);
    CHECK(std::abs(mc.value - exact) <= 4.0 * mc.standard_error);
  }
}

TEST_CASE("monte carlo is deterministic given the seed, independent of jobs") {
  Rng rng(29);
  const StringSample S = random_sample(rng, 9, 2, 4);
  const RademacherEstimate a =
      rademacher_rpr(S, 1.0, 2.0, EstimateMode::kMonteCarlo, 5000, 7, /*jobs=*/1);
  const RademacherEstimate b =
      rademacher_rpr(S, 1.0, 2.0, EstimateMode::kMonteCarlo, 5000, 7, /*jobs=*/8);
  CHECK(a.value == b.value);
  CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("ascent gradient matches finite differences") {
  Rng rng(31);
  const StringSample S = random_sample(rng, 4, 2, 3);
  const std::vector<std::int8_t> sigma = {1, -1, 1, -1};
  const int n = 2;

  const WeightedAutomaton A = random_wfa(rng, n, 2);
  auto objective = [&](const WeightedAutomaton& W) {
    double sum = 0.0;
    for (int i = 0; i < S.size(); ++i)
      sum += sigma[static_cast<std::size_t>(i)] * evaluate(W, S.at(i));
    return sum / S.size();
  };
  const double h = 1e-6;

  // alpha gradient: sum_i sigma_i A_{x_i} beta / m.
  for (int e = 0; e < n; ++e) {
    double analytic = 0.0;
    for (int s = 0; s < S.size(); ++s) {
      Eigen::VectorXd back = A.beta();
      const Str& x = S.at(s);
      for (std::size_t t = x.size(); t-- > 0;) back = A.transition(x[t]) * back;
      analytic += sigma[static_cast<std::size_t>(s)] * back(e);
    }
    analytic /= S.size();
    Eigen::VectorXd bump = Eigen::VectorXd::Zero(n);
    bump(e) = h;
    const WeightedAutomaton plus(A.alphabet(), A.alpha() + bump, A.beta(), A.transitions());
    const WeightedAutomaton minus(A.alphabet(), A.alpha() - bump, A.beta(), A.transitions());
    const double numeric = (objective(plus) - objective(minus)) / (2.0 * h);
    CHECK(analytic == doctest::Approx(numeric).epsilon(1e-5));
  }

  // transition gradient at entry (0, 1): forward/backward sweep.
  for (int a = 0; a < 2; ++a) {
    double analytic = 0.0;
    for (int s = 0; s < S.size(); ++s) {
      const Str& x = S.at(s);
      std::vector<Eigen::RowVectorXd> forward(x.size() + 1);
      forward[0] = A.alpha().transpose();
      for (std::size_t t = 0; t < x.size(); ++t)
        forward[t + 1] = forward[t] * A.transition(x[t]);
      Eigen::VectorXd back = A.beta();
      for (std::size_t t = x.size(); t-- > 0;) {
        if (x[t] == a) analytic += sigma[static_cast<std::size_t>(s)] * forward[t](0) * back(1);
        back = A.transition(x[t]) * back;
      }
    }
    analytic /= S.size();
    std::vector<Eigen::MatrixXd> trans_plus = A.transitions();
    trans_plus[static_cast<std::size_t>(a)](0, 1) += h;
    std::vector<Eigen::MatrixXd> trans_minus = A.transitions();
    trans_minus[static_cast<std::size_t>(a)](0, 1) -= h;
    const WeightedAutomaton plus(A.alphabet(), A.alpha(), A.beta(), trans_plus);
    const WeightedAutomaton minus(A.alphabet(), A.alpha(), A.beta(), trans_minus);
    const double numeric = (objective(plus) - objective(minus)) / (2.0 * h);
    CHECK(analytic == doctest::Approx(numeric).epsilon(1e-5));
  }
}

TEST_CASE("ascent lower bound: closed forms and monotonicity in r") {
  // Single empty string, one state: sup over the ball of sigma*alpha*beta is 1.
  const StringSample S = sample_of({Str{}});
  const Alphabet one = letters(1);
  AscentConfig config;
  config.restarts = 8;
  config.steps = 80;
  const RademacherEstimate est = rademacher_anpr_lower(
      S, one, 1, HolderPair::from_p(2.0), 1.0, EstimateMode::kExact, 0, 3, config);
  CHECK(est.relation == Relation::kLowerBound);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-6));

  // Radius zero only contains the zero automaton.
  const RademacherEstimate zero = rademacher_anpr_lower(
      S, one, 1, HolderPair::from_p(2.0), 0.0, EstimateMode::kExact, 0, 3, config);
  CHECK(zero.value == doctest::Approx(0.0));

  // The ball grows with r, so the estimate cannot shrink. (The class is
  // not linear in r: on S = (eps) the sup is r^2.)
  const RademacherEstimate r2 = rademacher_anpr_lower(
      S, one, 1, HolderPair::from_p(2.0), 2.0, EstimateMode::kExact, 0, 3, config);
  CHECK(r2.value >= est.value - 1e-9);
  CHECK(r2.value == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("ascent estimate stays below the covering bound") {
  Rng rng(37);
  AscentConfig config;
  config.restarts = 4;
  config.steps = 60;
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 2 + rng.next_int(4);
    const int n = 1 + rng.next_int(2);
    const StringSample S = random_sample(rng, m, 2, 3);
    const RademacherEstimate lower = rademacher_anpr_lower(
        S, letters(2), n, HolderPair::from_p(2.0), 1.0, EstimateMode::kExact, 0, trial, config);
    const BoundReport upper = bound_ranr(m, n, 2, 1.0, length_stat(S));
    CHECK(lower.value <= upper.value + 1e-9);
  }
}

TEST_SUITE_END();
