#include "wfa/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "wfa/parallel.hpp"
#include "wfa/rng.hpp"

namespace wfa {

namespace {

constexpr int kExactGuardRpr = 24;
constexpr int kExactGuardHpr = 20;

// Distinct group layout: group id per sample index plus group sizes.
struct Groups {
  std::vector<int> id_of_index;
  std::vector<int> sizes;
};

Groups group_by_string(const StringSample& S) {
  std::map<Str, int> ids;
  Groups g;
  g.id_of_index.resize(static_cast<std::size_t>(S.size()));
  for (int i = 0; i < S.size(); ++i) {
    auto [it, fresh] = ids.emplace(S.at(i), static_cast<int>(g.sizes.size()));
    if (fresh) g.sizes.push_back(0);
    g.id_of_index[static_cast<std::size_t>(i)] = it->second;
    ++g.sizes[static_cast<std::size_t>(it->second)];
  }
  return g;
}

Groups group_by_pair(const SplitAssignment& split, std::vector<std::pair<int, int>>* cells,
                     int* rows, int* cols) {
  std::map<Str, int> prefix_ids, suffix_ids;
  std::map<std::pair<int, int>, int> cell_ids;
  Groups g;
  g.id_of_index.resize(split.pairs.size());
  for (std::size_t i = 0; i < split.pairs.size(); ++i) {
    const auto& [u, v] = split.pairs[i];
    const int row = prefix_ids.emplace(u, static_cast<int>(prefix_ids.size())).first->second;
    const int col = suffix_ids.emplace(v, static_cast<int>(suffix_ids.size())).first->second;
    auto [it, fresh] = cell_ids.emplace(std::make_pair(row, col), static_cast<int>(g.sizes.size()));
    if (fresh) {
      g.sizes.push_back(0);
      cells->emplace_back(row, col);
    }
    g.id_of_index[i] = it->second;
    ++g.sizes[static_cast<std::size_t>(it->second)];
  }
  *rows = static_cast<int>(prefix_ids.size());
  *cols = static_cast<int>(suffix_ids.size());
  return g;
}

double norm_of_counts(const std::vector<double>& t, double q) {
  if (q == 1.0) {
    double s = 0.0;
    for (double v : t) s += std::abs(v);
    return s;
  }
  if (q == 2.0) {
    double s = 0.0;
    for (double v : t) s += v * v;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double v : t) s = std::max(s, std::abs(v));
  return s;
}

double largest_singular_value(const Eigen::MatrixXd& M) {
  if (M.rows() == 1 && M.cols() == 1) return std::abs(M(0, 0));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues()(0);
}

// Pascal triangle row weights: P[sign sum = -s + 2c] = binom(s, c) / 2^s.
std::vector<std::vector<double>> binomial_rows(int max_s) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(max_s) + 1);
  rows[0] = {1.0};
  for (int s = 1; s <= max_s; ++s) {
    rows[static_cast<std::size_t>(s)].assign(static_cast<std::size_t>(s) + 1, 0.0);
    for (int c = 0; c <= s; ++c) {
      const auto& prev = rows[static_cast<std::size_t>(s - 1)];
      double v = 0.0;
      if (c < s) v += prev[static_cast<std::size_t>(c)];
      if (c > 0) v += prev[static_cast<std::size_t>(c - 1)];
      rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] = v;
    }
  }
  return rows;
}

// E[h(t_1, ..., t_d)] over independent per-group sign sums, visiting the
// product support once. h is folded through an accumulator to keep leaves
// cheap; `Acc` supplies (combine, finish).
template <typename Fold>
double convolve_groups(const std::vector<int>& sizes, const Fold& fold) {
  const int d = static_cast<int>(sizes.size());
  int max_s = 0;
  for (int s : sizes) max_s = std::max(max_s, s);
  const auto binom = binomial_rows(max_s);

  double total = 0.0;
  // Explicit stack over (group, choice) to avoid recursion-depth limits.
  struct Level {
    int choice = 0;
    double weight = 1.0;  // product of probabilities up to this group
    double acc = 0.0;     // folded statistic of t_1..t_j
  };
  std::vector<Level> levels(static_cast<std::size_t>(d) + 1);
  int j = 0;
  for (;;) {
    if (j == d) {
      total += levels[static_cast<std::size_t>(j)].weight *
               fold.finish(levels[static_cast<std::size_t>(j)].acc);
      --j;
      continue;
    }
    Level& level = levels[static_cast<std::size_t>(j)];
    const int s = sizes[static_cast<std::size_t>(j)];
    if (level.choice > s) {
      level.choice = 0;
      if (j == 0) break;
      --j;
      continue;
    }
    const int c = level.choice++;
    const double t = static_cast<double>(2 * c - s);
    const double prob =
        binom[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] * std::pow(0.5, s);
    Level& next = levels[static_cast<std::size_t>(j) + 1];
    next.choice = 0;
    next.weight = level.weight * prob;
    next.acc = fold.combine(level.acc, t);
    ++j;
  }
  return total;
}

struct FoldAbsSum {
  double combine(double acc, double t) const { return acc + std::abs(t); }
  double finish(double acc) const { return acc; }
};
struct FoldSquares {
  double combine(double acc, double t) const { return acc + t * t; }
  double finish(double acc) const { return std::sqrt(acc); }
};
struct FoldMaxAbs {
  double combine(double acc, double t) const { return std::max(acc, std::abs(t)); }
  double finish(double acc) const { return acc; }
};

double convolve_norm(const std::vector<int>& sizes, double q) {
  if (q == 1.0) return convolve_groups(sizes, FoldAbsSum{});
  if (q == 2.0) return convolve_groups(sizes, FoldSquares{});
  return convolve_groups(sizes, FoldMaxAbs{});
}

// Enumerates the joint sign-sum support like convolve_groups but hands the
// whole assignment to the leaf (needed for operator norms).
void convolve_vectors(const std::vector<int>& sizes,
                      const std::function<void(const std::vector<double>&, double)>& leaf) {
  const int d = static_cast<int>(sizes.size());
  int max_s = 0;
  for (int s : sizes) max_s = std::max(max_s, s);
  const auto binom = binomial_rows(max_s);
  std::vector<double> t(static_cast<std::size_t>(d), 0.0);
  std::vector<int> choice(static_cast<std::size_t>(d), 0);
  std::vector<double> weight(static_cast<std::size_t>(d) + 1, 1.0);
  int j = 0;
  for (;;) {
    if (j == d) {
      leaf(t, weight[static_cast<std::size_t>(d)]);
      --j;
      continue;
    }
    const int s = sizes[static_cast<std::size_t>(j)];
    if (choice[static_cast<std::size_t>(j)] > s) {
      choice[static_cast<std::size_t>(j)] = 0;
      if (j == 0) break;
      --j;
      continue;
    }
    const int c = choice[static_cast<std::size_t>(j)]++;
    t[static_cast<std::size_t>(j)] = static_cast<double>(2 * c - s);
    weight[static_cast<std::size_t>(j) + 1] =
        weight[static_cast<std::size_t>(j)] *
        binom[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] * std::pow(0.5, s);
    ++j;
  }
}

void check_exact_guard(int m, int guard) {
  if (m > guard)
    throw ResourceError("exact enumeration needs 2^" + std::to_string(m) +
                        " sign vectors; the guard is m <= " + std::to_string(guard));
}

double mc_standard_error(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(values.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

std::vector<std::int8_t> draw_signs(int m, Rng& rng) {
  std::vector<std::int8_t> sigma(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) sigma[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(rng.next_sign());
  return sigma;
}

}  // namespace

namespace detail {

double rpr_exact_enumeration(const StringSample& S, double q) {
  const int m = S.size();
  check_exact_guard(m, kExactGuardRpr);
  const Groups g = group_by_string(S);
  std::vector<double> t(g.sizes.size());
  const std::uint64_t total = std::uint64_t{1} << m;
  double sum = 0.0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::fill(t.begin(), t.end(), 0.0);
    for (int i = 0; i < m; ++i)
      t[static_cast<std::size_t>(g.id_of_index[static_cast<std::size_t>(i)])] +=
          ((mask >> i) & 1) ? 1.0 : -1.0;
    sum += norm_of_counts(t, q);
  }
  return sum / static_cast<double>(total);
}

double rpr_exact_convolution(const StringSample& S, double q) {
  check_exact_guard(S.size(), kExactGuardRpr);
  return convolve_norm(group_by_string(S).sizes, q);
}

double hpr_exact_enumeration(const StringSample& S, const SplitAssignment& split, double q) {
  const int m = S.size();
  check_exact_guard(m, kExactGuardHpr);
  split.validate_against(S);
  std::vector<std::pair<int, int>> cells;
  int rows = 0, cols = 0;
  const Groups g = group_by_pair(split, &cells, &rows, &cols);

  std::vector<double> t(g.sizes.size());
  const std::uint64_t total = std::uint64_t{1} << m;
  double sum = 0.0;
  Eigen::MatrixXd R(rows, cols);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::fill(t.begin(), t.end(), 0.0);
    for (int i = 0; i < m; ++i)
      t[static_cast<std::size_t>(g.id_of_index[static_cast<std::size_t>(i)])] +=
          ((mask >> i) & 1) ? 1.0 : -1.0;
    if (q == 2.0) {
      sum += norm_of_counts(t, 2.0);  // Frobenius over cells
    } else {
      R.setZero();
      for (std::size_t j = 0; j < cells.size(); ++j) R(cells[j].first, cells[j].second) = t[j];
      sum += largest_singular_value(R);
    }
  }
  return sum / static_cast<double>(total);
}

double hpr_exact_convolution(const StringSample& S, const SplitAssignment& split, double q) {
  check_exact_guard(S.size(), kExactGuardHpr);
  split.validate_against(S);
  std::vector<std::pair<int, int>> cells;
  int rows = 0, cols = 0;
  const Groups g = group_by_pair(split, &cells, &rows, &cols);
  if (q == 2.0) return convolve_norm(g.sizes, 2.0);

  double total = 0.0;
  Eigen::MatrixXd R(rows, cols);
  convolve_vectors(g.sizes, [&](const std::vector<double>& t, double weight) {
    R.setZero();
    for (std::size_t j = 0; j < cells.size(); ++j) R(cells[j].first, cells[j].second) = t[j];
    total += weight * largest_singular_value(R);
  });
  return total;
}

}  // namespace detail

namespace {

RademacherEstimate monte_carlo(
    int m, std::uint64_t draws, std::uint64_t seed, int jobs,
    const std::function<double(const std::vector<std::int8_t>&, std::uint64_t)>& norm,
    double scale, Relation relation) {
  if (draws < 1) throw DomainError("monte-carlo mode needs at least one draw");
  std::vector<double> values(static_cast<std::size_t>(draws));
  parallel_for(static_cast<std::int64_t>(draws), jobs, [&](std::int64_t d) {
    Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(d));
    const auto sigma = draw_signs(m, rng);
    values[static_cast<std::size_t>(d)] = scale * norm(sigma, static_cast<std::uint64_t>(d));
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(draws);
  RademacherEstimate estimate;
  estimate.value = mean;
  estimate.mode = EstimateMode::kMonteCarlo;
  estimate.draws = draws;
  estimate.standard_error = mc_standard_error(values, mean);
  estimate.relation = relation;
  return estimate;
}

}  // namespace

RademacherEstimate rademacher_rpr(const StringSample& S, double radius, double p,
                                  EstimateMode mode, std::uint64_t draws, std::uint64_t seed,
                                  int jobs) {
  if (radius < 0.0) throw DomainError("radius must be nonnegative");
  const HolderPair hp = HolderPair::from_p(p);
  const int m = S.size();
  const double scale = radius / static_cast<double>(m);

  if (mode == EstimateMode::kExact) {
    check_exact_guard(m, kExactGuardRpr);
    // The convolution shortcut pays off exactly when strings repeat.
    const double expectation = (collision_stat(S) > 1)
                                   ? detail::rpr_exact_convolution(S, hp.q)
                                   : detail::rpr_exact_enumeration(S, hp.q);
    return {scale * expectation, EstimateMode::kExact, std::uint64_t{1} << m, 0.0,
            Relation::kEquals};
  }

  const Groups g = group_by_string(S);
  return monte_carlo(
      m, draws, seed, jobs,
      [&](const std::vector<std::int8_t>& sigma, std::uint64_t) {
        std::vector<double> t(g.sizes.size(), 0.0);
        for (int i = 0; i < m; ++i)
          t[static_cast<std::size_t>(g.id_of_index[static_cast<std::size_t>(i)])] +=
              sigma[static_cast<std::size_t>(i)];
        return norm_of_counts(t, hp.q);
      },
      scale, Relation::kEquals);
}

RademacherEstimate rademacher_hpr_bound(const StringSample& S, const SplitAssignment& split,
                                        double radius, double p, EstimateMode mode,
                                        std::uint64_t draws, std::uint64_t seed, int jobs) {
  if (radius < 0.0) throw DomainError("radius must be nonnegative");
  if (p != 1.0 && p != 2.0) throw DomainError("the Hankel-class bound supports p in {1, 2}");
  const double q = (p == 2.0) ? 2.0 : kInfinity;
  split.validate_against(S);
  const int m = S.size();
  const double scale = radius / static_cast<double>(m);

  if (mode == EstimateMode::kExact) {
    check_exact_guard(m, kExactGuardHpr);
    const double expectation = (collision_stat(S) > 1 || q == kInfinity)
                                   ? detail::hpr_exact_convolution(S, split, q)
                                   : detail::hpr_exact_enumeration(S, split, q);
    return {scale * expectation, EstimateMode::kExact, std::uint64_t{1} << m, 0.0,
            Relation::kUpperBound};
  }

  std::vector<std::pair<int, int>> cells;
  int rows = 0, cols = 0;
  const Groups g = group_by_pair(split, &cells, &rows, &cols);
  return monte_carlo(
      m, draws, seed, jobs,
      [&, rows, cols](const std::vector<std::int8_t>& sigma, std::uint64_t) {
        std::vector<double> t(g.sizes.size(), 0.0);
        for (int i = 0; i < m; ++i)
          t[static_cast<std::size_t>(g.id_of_index[static_cast<std::size_t>(i)])] +=
              sigma[static_cast<std::size_t>(i)];
        if (q == 2.0) return norm_of_counts(t, 2.0);
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(rows, cols);
        for (std::size_t j = 0; j < cells.size(); ++j) R(cells[j].first, cells[j].second) = t[j];
        return largest_singular_value(R);
      },
      scale, Relation::kUpperBound);
}

namespace {

struct AscentParams {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  std::vector<Eigen::MatrixXd> trans;
};

void project_to_ball(AscentParams* params, const HolderPair& hp, double radius) {
  auto shrink = [&](double norm, auto&& block) {
    if (norm > radius) block *= (norm == 0.0 ? 0.0 : radius / norm);
  };
  shrink(vector_norm(params->alpha, hp.p), params->alpha);
  shrink(vector_norm(params->beta, hp.q), params->beta);
  for (Eigen::MatrixXd& T : params->trans) shrink(induced_matrix_norm(T, hp.q), T);
}

double ascent_objective(const AscentParams& params, const StringSample& S,
                        const std::vector<std::int8_t>& sigma) {
  double sum = 0.0;
  for (int i = 0; i < S.size(); ++i) {
    Eigen::RowVectorXd state = params.alpha.transpose();
    for (Symbol a : S.at(i)) state = state * params.trans[static_cast<std::size_t>(a)];
    sum += sigma[static_cast<std::size_t>(i)] * (state * params.beta)(0);
  }
  return sum / static_cast<double>(S.size());
}

AscentParams ascent_gradient(const AscentParams& params, const StringSample& S,
                             const std::vector<std::int8_t>& sigma) {
  const int n = static_cast<int>(params.alpha.size());
  AscentParams grad;
  grad.alpha = Eigen::VectorXd::Zero(n);
  grad.beta = Eigen::VectorXd::Zero(n);
  grad.trans.assign(params.trans.size(), Eigen::MatrixXd::Zero(n, n));
  const double inv_m = 1.0 / static_cast<double>(S.size());
  for (int i = 0; i < S.size(); ++i) {
    const Str& x = S.at(i);
    const double w = sigma[static_cast<std::size_t>(i)] * inv_m;
    const std::size_t t = x.size();
    // Forward products alpha' A_{x_1..s}, then a backward sweep.
    std::vector<Eigen::RowVectorXd> forward(t + 1);
    forward[0] = params.alpha.transpose();
    for (std::size_t s = 0; s < t; ++s)
      forward[s + 1] = forward[s] * params.trans[static_cast<std::size_t>(x[s])];
    Eigen::VectorXd backward = params.beta;
    // backward holds A_{x_{s+1}..t} beta while s descends.
    grad.beta += w * forward[t].transpose();
    for (std::size_t s = t; s-- > 0;) {
      grad.trans[static_cast<std::size_t>(x[s])] += w * forward[s].transpose() * backward.transpose();
      backward = params.trans[static_cast<std::size_t>(x[s])] * backward;
    }
    grad.alpha += w * backward;
  }
  return grad;
}

bool all_finite(const AscentParams& params) {
  if (!params.alpha.allFinite() || !params.beta.allFinite()) return false;
  for (const Eigen::MatrixXd& T : params.trans)
    if (!T.allFinite()) return false;
  return true;
}

}  // namespace

namespace detail {

double anpr_ascent_single(const StringSample& S, const std::vector<std::int8_t>& sigma,
                          const Alphabet& alphabet, int num_states, const HolderPair& hp,
                          double radius, const AscentConfig& config, std::uint64_t seed) {
  if (radius == 0.0) return 0.0;
  const int n = num_states;
  const int k = alphabet.size();
  double best = -kInfinity;
  for (int restart = 0; restart < config.restarts; ++restart) {
    Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(restart));
    AscentParams params;
    params.alpha.resize(n);
    params.beta.resize(n);
    params.trans.assign(static_cast<std::size_t>(k), Eigen::MatrixXd(n, n));
    for (int i = 0; i < n; ++i) params.alpha(i) = rng.next_uniform(-radius, radius);
    for (int i = 0; i < n; ++i) params.beta(i) = rng.next_uniform(-radius, radius);
    for (Eigen::MatrixXd& T : params.trans)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) T(i, j) = rng.next_uniform(-radius, radius);
    project_to_ball(&params, hp, radius);

    double objective = ascent_objective(params, S, sigma);
    double step = config.step_size;
    for (int it = 0; it < config.steps && step > 1e-14; ++it) {
      AscentParams grad = ascent_gradient(params, S, sigma);
      if (!all_finite(grad))
        throw NumericError(
            "ascent gradient overflowed; weight products grow as r^(|x|+2), try radius <= 1");
      AscentParams candidate = params;
      candidate.alpha += step * grad.alpha;
      candidate.beta += step * grad.beta;
      for (std::size_t a = 0; a < candidate.trans.size(); ++a)
        candidate.trans[a] += step * grad.trans[a];
      project_to_ball(&candidate, hp, radius);
      const double candidate_objective = ascent_objective(candidate, S, sigma);
      if (candidate_objective > objective) {
        params = std::move(candidate);
        objective = candidate_objective;
      } else {
        step *= 0.5;
      }
    }
    best = std::max(best, objective);
  }
  return best;
}

}  // namespace detail

RademacherEstimate rademacher_anpr_lower(const StringSample& S, const Alphabet& alphabet,
                                         int num_states, const HolderPair& hp, double radius,
                                         EstimateMode mode, std::uint64_t draws,
                                         std::uint64_t seed, const AscentConfig& config,
                                         int jobs) {
  if (radius < 0.0) throw DomainError("radius must be nonnegative");
  if (num_states < 1) throw DomainError("need at least one state");
  for (const Str& x : S.strings())
    for (Symbol a : x)
      if (a < 0 || a >= alphabet.size()) throw DomainError("sample string leaves the alphabet");
  const int m = S.size();

  if (mode == EstimateMode::kExact) {
    check_exact_guard(m, kExactGuardRpr);
    const std::uint64_t total = std::uint64_t{1} << m;
    std::vector<double> values(static_cast<std::size_t>(total));
    parallel_for(static_cast<std::int64_t>(total), jobs, [&](std::int64_t mask) {
      std::vector<std::int8_t> sigma(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i)
        sigma[static_cast<std::size_t>(i)] =
            ((static_cast<std::uint64_t>(mask) >> i) & 1) ? 1 : -1;
      values[static_cast<std::size_t>(mask)] = detail::anpr_ascent_single(
          S, sigma, alphabet, num_states, hp, radius, config,
          Rng::derived(seed, static_cast<std::uint64_t>(mask)).next_u64());
    });
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(total);
    return {mean, EstimateMode::kExact, total, 0.0, Relation::kLowerBound};
  }

  return monte_carlo(
      m, draws, seed, jobs,
      [&](const std::vector<std::int8_t>& sigma, std::uint64_t draw) {
        const std::uint64_t ascent_seed = Rng::derived(seed, ~draw).next_u64();
        return detail::anpr_ascent_single(S, sigma, alphabet, num_states, hp, radius, config,
                                          ascent_seed);
      },
      1.0, Relation::kLowerBound);
}

}  // namespace wfa
