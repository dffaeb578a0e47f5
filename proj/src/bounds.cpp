#include "wfa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wfa/hankel.hpp"
#include "wfa/norms.hpp"
#include "wfa/parallel.hpp"
#include "wfa/rng.hpp"
#include "wfa/sample_stats.hpp"
#include "wfa/text.hpp"

namespace wfa {

namespace {

// Printed constants of the moment bound, spelled once.
const double kTroppLogTerm = (2.0 / 3.0) * (1.0 + 4.0 / std::log(2.0));
const double kTroppSqrtTerm = 1.0 + 4.0 / std::sqrt(2.0 * std::log(2.0));

void push_term(BoundReport* report, std::string name, double value, std::string anchor) {
  report->terms.push_back({std::move(name), value, std::move(anchor)});
  report->value += value;
}

void push_input(BoundReport* report, std::string name, double value) {
  report->inputs.emplace_back(std::move(name), value);
}

double require_stat(const std::optional<double>& stat, const char* name) {
  if (!stat) throw DomainError(std::string("bound query is missing required stat: ") + name);
  return *stat;
}

}  // namespace

std::string to_text(const BoundReport& report) {
  std::ostringstream out;
  for (const auto& [name, value] : report.inputs)
    out << "input " << name << " " << format_real(value) << "\n";
  for (const BoundTerm& term : report.terms)
    out << "term " << term.name << " [" << term.anchor << "] " << format_real(term.value)
        << "\n";
  if (report.lower_value) out << "lower " << format_real(*report.lower_value) << "\n";
  out << "value " << format_real(report.value) << "\n";
  for (const std::string& warning : report.warnings) out << "warning " << warning << "\n";
  return out.str();
}

std::string csv_header(const BoundReport& report) {
  std::string header = "value";
  for (const BoundTerm& term : report.terms) header += "," + term.name;
  if (report.lower_value) header += ",lower";
  return header;
}

std::string to_csv_row(const BoundReport& report) {
  std::string row = format_real(report.value);
  for (const BoundTerm& term : report.terms) row += "," + format_real(term.value);
  if (report.lower_value) row += "," + format_real(*report.lower_value);
  return row;
}

double log_covering_number_bound(double eta, int n, int k, double r, int max_length) {
  if (!(eta > 0.0)) throw DomainError("covering level eta must be positive");
  if (n < 1 || k < 1) throw DomainError("need n >= 1 and k >= 1");
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const double d = static_cast<double>(n) * (static_cast<double>(k) * n + 2.0);
  const double L = static_cast<double>(max_length);
  // log(r^(L+1) (L+2) / eta) carried in log-space.
  const double log_inner = (L + 1.0) * std::log(r) + std::log(L + 2.0) - std::log(eta);
  // log(2 + exp(log_inner)), stably.
  double log_cover;
  if (log_inner > 700.0)
    log_cover = log_inner;
  else
    log_cover = std::log(2.0 + std::exp(log_inner));
  return d * std::log(r) + d * log_cover;
}

BoundReport bound_ranr(int m, int n, int k, double r, int max_length) {
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const double d = static_cast<double>(n) * (static_cast<double>(k) * n + 2.0);
  const double L = static_cast<double>(max_length);
  const double log_r_pow = (L + 2.0) * std::log(r);  // log r^(L+2)

  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "n", n);
  push_input(&report, "k", k);
  push_input(&report, "r", r);
  push_input(&report, "L", L);

  if (log_r_pow > 700.0) {
    push_term(&report, "covering", kInfinity, "covering-massart");
    report.warnings.push_back("r^(L+2) overflows double range; bound saturates at +inf");
    return report;
  }
  const double r_pow = std::exp(log_r_pow);

  // g(eta) = eta + r^(L+2) sqrt(2 d log(2r + r^(L+2)(L+2)/eta) / m).
  auto objective = [&](double log_eta) {
    const double eta = std::exp(log_eta);
    const double inner = 2.0 * r + r_pow * (L + 2.0) / eta;
    const double logarithm = std::log(inner);
    if (!(logarithm > 0.0)) return eta;  // covering collapses to one point
    return eta + r_pow * std::sqrt(2.0 * d * logarithm / static_cast<double>(m));
  };

  // Unimodality is not established, so a coarse grid seeds golden-section
  // and the overall minimum over every evaluated eta is returned; any
  // feasible eta gives a valid bound.
  const double lo = std::log(1e-12), hi = std::log(1e12);
  double best_log_eta = lo;
  double best = objective(lo);
  for (int i = 1; i < 100; ++i) {
    const double candidate = lo + (hi - lo) * i / 99.0;
    const double value = objective(candidate);
    if (value < best) {
      best = value;
      best_log_eta = candidate;
    }
  }
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::max(lo, best_log_eta - (hi - lo) / 99.0);
  double b = std::min(hi, best_log_eta + (hi - lo) / 99.0);
  double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-9 * std::max(1.0, std::abs(a))) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = objective(x2);
    }
    best = std::min({best, f1, f2});
  }
  push_term(&report, "covering", best, "covering-massart");
  return report;
}

BoundReport bound_an1(int m, int n, int k, int max_length) {
  if (m < 1 || n < 1 || k < 1) throw DomainError("need m, n, k >= 1");
  const double d = static_cast<double>(n) * (static_cast<double>(k) * n + 2.0);
  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "n", n);
  push_input(&report, "k", k);
  push_input(&report, "L", max_length);
  push_term(&report, "covering", std::sqrt(2.0 * d * std::log(m + 2.0) / m), "covering-massart");
  push_term(&report, "length", (max_length + 2.0) / m, "covering-eta-choice");
  return report;
}

BoundReport bound_r1r(int m, double r, double collisions) {
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  if (collisions < 1.0 || collisions > static_cast<double>(m))
    throw DomainError("collision stat must lie in [1, m]");
  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "r", r);
  push_input(&report, "C", collisions);
  push_term(&report, "massart", r * std::sqrt(2.0 * collisions * std::log(2.0 * m)) / m,
            "dual-norm-massart");
  return report;
}

BoundReport bound_r2r(int m, double r) {
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "r", r);
  push_term(&report, "jensen-upper", r / std::sqrt(static_cast<double>(m)), "dual-norm-jensen");
  report.lower_value = r / std::sqrt(2.0 * m);
  return report;
}

double tropp_moment_bound(double op_range, double variance, double intrinsic_dim) {
  if (op_range < 0.0 || variance < 0.0) throw DomainError("moment-bound inputs must be >= 0");
  if (intrinsic_dim < 1.0) throw DomainError("intrinsic dimension must be >= 1");
  const double logd = std::log(intrinsic_dim + 1.0);
  return kTroppLogTerm * op_range * logd + kTroppSqrtTerm * std::sqrt(2.0 * variance * logd);
}

BoundReport bound_h1r(int m, double r, double split_collisions) {
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  if (split_collisions < 1.0 || split_collisions > static_cast<double>(m))
    throw DomainError("split collision stat must lie in [1, m]");
  const double logm = std::log(2.0 * m + 1.0);
  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "r", r);
  push_input(&report, "W", split_collisions);
  push_term(&report, "moment-log", (r / m) * kTroppLogTerm * logm, "matrix-moment");
  push_term(&report, "moment-sqrt",
            (r / m) * kTroppSqrtTerm * std::sqrt(2.0 * split_collisions * logm),
            "matrix-moment");
  return report;
}

BoundReport bound_h2r(int m, double r) {
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "r", r);
  push_term(&report, "frobenius", r / std::sqrt(static_cast<double>(m)), "frobenius-jensen");
  return report;
}

DistParams dist_params(const WeightedAutomaton& pfa, int max_length, std::uint64_t max_strings) {
  validate_pfa(pfa);
  const int n = pfa.num_states();
  const int k = pfa.alphabet().size();
  if (max_length < 0) throw DomainError("max_length must be >= 0");

  double count = 0.0, layer = 1.0;
  for (int t = 0; t <= max_length; ++t, layer *= k) {
    count += layer;
    if (count > static_cast<double>(max_strings))
      throw ResourceError("distribution-parameter enumeration needs " + std::to_string(count) +
                          " strings, above the guard of " + std::to_string(max_strings));
  }

  // Power sums of the total transition matrix give the inner masses:
  //   sum_{|v| = t} A_v beta  =  T^t beta,  T = sum_a A_a.
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (const Eigen::MatrixXd& M : pfa.transitions()) total += M;
  std::vector<Eigen::VectorXd> suffix_mass(static_cast<std::size_t>(max_length) + 1);
  std::vector<Eigen::RowVectorXd> prefix_mass(static_cast<std::size_t>(max_length) + 1);
  suffix_mass[0] = pfa.beta();
  prefix_mass[0] = pfa.alpha().transpose();
  for (int t = 1; t <= max_length; ++t) {
    suffix_mass[static_cast<std::size_t>(t)] = total * suffix_mass[static_cast<std::size_t>(t - 1)];
    prefix_mass[static_cast<std::size_t>(t)] = prefix_mass[static_cast<std::size_t>(t - 1)] * total;
  }

  DistParams params;
  params.truncation_length = max_length;

  // Prefix-role pass: DFS over x with |x| <= max_length carrying
  // alpha' A_x; the discounted sum over suffixes v is
  // sum_t (alpha' A_x) T^t beta / (|x| + t + 1).
  double enumerated_mass = 0.0;
  struct Frame {
    Eigen::RowVectorXd state;
    int depth;
    int next_symbol;
  };
  std::vector<Frame> stack;
  stack.push_back({pfa.alpha().transpose(), 0, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next_symbol == 0) {
      const double fx = top.state * pfa.beta();
      enumerated_mass += fx;
      params.d_max = std::max(params.d_max, fx);
      double discounted = 0.0;
      for (int t = 0; t <= max_length; ++t)
        discounted += (top.state * suffix_mass[static_cast<std::size_t>(t)]).value() /
                      (top.depth + t + 1.0);
      params.d_max_vee = std::max(params.d_max_vee, discounted);
    }
    if (top.depth == max_length || top.next_symbol >= k) {
      stack.pop_back();
      continue;
    }
    const Symbol a = top.next_symbol++;
    stack.push_back({top.state * pfa.transition(a), top.depth + 1, 0});
  }

  // Suffix-role pass: sum_u P[u x] / (|x| + |u| + 1). The DFS carries one
  // row vector (alpha' T^t) A_x per inner length t.
  struct BackFrame {
    std::vector<Eigen::RowVectorXd> states;
    int depth;
    int next_symbol;
  };
  std::vector<BackFrame> back;
  back.push_back({prefix_mass, 0, 0});
  while (!back.empty()) {
    BackFrame& top = back.back();
    if (top.next_symbol == 0) {
      double discounted = 0.0;
      for (int t = 0; t <= max_length; ++t)
        discounted += (top.states[static_cast<std::size_t>(t)] * pfa.beta()).value() /
                      (top.depth + t + 1.0);
      params.d_max_vee = std::max(params.d_max_vee, discounted);
    }
    if (top.depth == max_length || top.next_symbol >= k) {
      back.pop_back();
      continue;
    }
    const Symbol a = top.next_symbol++;
    BackFrame child;
    child.depth = top.depth + 1;
    child.next_symbol = 0;
    child.states.resize(top.states.size());
    for (std::size_t t = 0; t < top.states.size(); ++t)
      child.states[t] = top.states[t] * pfa.transition(a);
    back.push_back(std::move(child));
  }

  params.tail_mass = std::max(0.0, 1.0 - enumerated_mass);
  params.d_max_exact = params.tail_mass <= params.d_max;
  // Every missed term carries weight at most tail_mass/(L+2): the missing
  // strings are longer than the cutoff on at least one side.
  params.d_max_vee_margin = params.tail_mass / (max_length + 2.0);
  return params;
}

BoundReport bound_dist_r1r(int m, double r, double d_max, double kappa) {
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (r < 0.0 || d_max < 0.0 || kappa < 0.0)
    throw DomainError("r, d_max and kappa must be nonnegative");
  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "r", r);
  push_input(&report, "D_max", d_max);
  push_input(&report, "kappa", kappa);
  const double inflated = d_max + kappa / std::sqrt(static_cast<double>(m));
  push_term(&report, "collision-mass",
            (r / std::sqrt(static_cast<double>(m))) * std::sqrt(2.0 * inflated * std::log(2.0 * m)),
            "expected-collisions");
  report.warnings.push_back(
      kappa > 0.0 ? "the O(sqrt(1/m)) term uses caller-supplied kappa, not a proven constant"
                  : "kappa = 0 drops the unspecified O(sqrt(1/m)) term of the bound");
  return report;
}

BoundReport bound_dist_h1r(int m, double r, double d_max_vee, double kappa) {
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (r < 0.0 || d_max_vee < 0.0 || kappa < 0.0)
    throw DomainError("r, d_max_vee and kappa must be nonnegative");
  const double logm = std::log(2.0 * m + 1.0);
  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "r", r);
  push_input(&report, "D_max_vee", d_max_vee);
  push_input(&report, "kappa", kappa);
  const double inflated = d_max_vee + kappa / std::sqrt(static_cast<double>(m));
  push_term(&report, "moment-log", kTroppLogTerm * r * logm / m, "matrix-moment");
  push_term(&report, "moment-sqrt",
            kTroppSqrtTerm * (r / std::sqrt(static_cast<double>(m))) *
                std::sqrt(2.0 * inflated * logm),
            "matrix-moment");
  report.warnings.push_back(
      kappa > 0.0 ? "the O(sqrt(1/m)) term uses caller-supplied kappa, not a proven constant"
                  : "kappa = 0 drops the unspecified O(sqrt(1/m)) term of the bound");
  return report;
}

CmWmReport cm_wm_lemma_check(const WeightedAutomaton& pfa, int m, int trials, std::uint64_t seed,
                             int max_length, int jobs) {
  if (trials < 2) throw DomainError("need at least two trials for standard errors");
  const DistParams dist = dist_params(pfa, max_length);

  std::vector<double> c_values(static_cast<std::size_t>(trials));
  std::vector<double> w_values(static_cast<std::size_t>(trials));
  parallel_for(trials, jobs, [&](std::int64_t trial) {
    const std::uint64_t trial_seed = Rng::derived(seed, static_cast<std::uint64_t>(trial)).next_u64();
    const StringSample S = sample_pfa(pfa, m, trial_seed);
    c_values[static_cast<std::size_t>(trial)] = collision_stat(S);
    const std::uint64_t split_count_limit = 200'000;
    WsResult ws = (split_count(S) <= split_count_limit)
                      ? ws_exhaustive(S, split_count_limit)
                      : ws_heuristic(S, trial_seed + 1);
    w_values[static_cast<std::size_t>(trial)] = ws.value;
  });

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto stderr_of = [](const std::vector<double>& v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0)) /
           std::sqrt(static_cast<double>(v.size()));
  };

  CmWmReport report;
  report.m = m;
  report.trials = trials;
  report.c_mean = mean_of(c_values);
  report.c_stderr = stderr_of(c_values, report.c_mean);
  report.w_mean = mean_of(w_values);
  report.w_stderr = stderr_of(w_values, report.w_mean);
  report.m_d_max = m * dist.d_max;
  report.m_d_max_vee = m * dist.d_max_vee;
  report.c_residual = (report.c_mean - report.m_d_max) / std::sqrt(static_cast<double>(m));
  report.w_residual = (report.w_mean - report.m_d_max_vee) / std::sqrt(static_cast<double>(m));
  report.lower_inequality_ok = report.c_mean >= report.m_d_max - 3.0 * report.c_stderr;
  return report;
}

BoundReport generalization_bound(const BoundQuery& query) {
  const int m = query.m;
  if (m < 1) throw DomainError("sample size must be >= 1");
  if (!(query.delta > 0.0 && query.delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (query.lipschitz < 0.0 || query.loss_bound < 0.0 || query.radius < 0.0)
    throw DomainError("mu, M and r must be nonnegative");
  const double mu = query.lipschitz;
  const double M = query.loss_bound;
  const double r = query.radius;
  const bool empirical = query.variant == StatVariant::kEmpirical;

  BoundReport report;
  push_input(&report, "m", m);
  push_input(&report, "mu", mu);
  push_input(&report, "M", M);
  push_input(&report, "delta", query.delta);

  auto confidence = [&] {
    if (empirical)
      push_term(&report, "confidence",
                3.0 * M * std::sqrt(std::log(2.0 / query.delta) / (2.0 * m)),
                "two-sided-concentration");
    else
      push_term(&report, "confidence", M * std::sqrt(std::log(1.0 / query.delta) / (2.0 * m)),
                "one-sided-concentration");
  };

  switch (query.cls) {
    case BoundClass::kAnp1: {
      if (query.n < 1 || query.k < 1) throw DomainError("the automaton class needs n and k");
      push_input(&report, "n", query.n);
      push_input(&report, "k", query.k);
      const double L = require_stat(query.max_length, empirical ? "L_S" : "L_m");
      push_input(&report, "L", L);
      const double d = static_cast<double>(query.n) * (static_cast<double>(query.k) * query.n + 2.0);
      push_term(&report, "complexity", std::sqrt(8.0 * mu * mu * d * std::log(m + 2.0) / m),
                "covering-massart-contraction");
      push_term(&report, "length", 2.0 * mu * (L + 2.0) / m, "covering-eta-choice");
      confidence();
      break;
    }
    case BoundClass::kR2r: {
      if (empirical)
        throw DomainError("the 2-norm class has no separate empirical-stat variant");
      push_input(&report, "r", r);
      push_term(&report, "complexity", 2.0 * mu * r / std::sqrt(static_cast<double>(m)),
                "dual-norm-jensen-contraction");
      confidence();
      break;
    }
    case BoundClass::kR1r: {
      push_input(&report, "r", r);
      if (empirical) {
        const double C = require_stat(query.collisions, "C_S");
        push_input(&report, "C", C);
        push_term(&report, "complexity", 2.0 * mu * r * std::sqrt(2.0 * C * std::log(2.0 * m)) / m,
                  "dual-norm-massart-contraction");
      } else {
        const double d_max = require_stat(query.d_max, "D_max");
        push_input(&report, "D_max", d_max);
        push_input(&report, "kappa", query.kappa);
        const double inflated = d_max + query.kappa / std::sqrt(static_cast<double>(m));
        push_term(&report, "complexity",
                  (2.0 * mu * r / std::sqrt(static_cast<double>(m))) *
                      std::sqrt(2.0 * inflated * std::log(2.0 * m)),
                  "expected-collisions-contraction");
        report.warnings.push_back(
            query.kappa > 0.0
                ? "the O(sqrt(1/m)) term uses caller-supplied kappa, not a proven constant"
                : "kappa = 0 drops the unspecified O(sqrt(1/m)) term of the bound");
      }
      confidence();
      break;
    }
    case BoundClass::kH2r: {
      if (empirical)
        throw DomainError("the Schatten-2 class has no separate empirical-stat variant");
      push_input(&report, "r", r);
      push_term(&report, "complexity", 2.0 * mu * r / std::sqrt(static_cast<double>(m)),
                "frobenius-jensen-contraction");
      confidence();
      break;
    }
    case BoundClass::kH1r: {
      push_input(&report, "r", r);
      const double logm = std::log(2.0 * m + 1.0);
      const double sqrt_constant = std::sqrt(2.0) + 4.0 / std::sqrt(std::log(2.0));
      const double log_constant = 2.0 / 3.0 + 8.0 / (3.0 * std::log(2.0));
      if (empirical) {
        const double W = require_stat(query.split_collisions, "W_S");
        push_input(&report, "W", W);
        push_term(&report, "moment-sqrt",
                  sqrt_constant * 2.0 * mu * r * std::sqrt(W * logm) / m,
                  "matrix-moment-contraction");
      } else {
        const double d_vee = require_stat(query.d_max_vee, "D_max_vee");
        push_input(&report, "D_max_vee", d_vee);
        push_input(&report, "kappa", query.kappa);
        const double inflated = d_vee + query.kappa / std::sqrt(static_cast<double>(m));
        push_term(&report, "moment-sqrt",
                  sqrt_constant * (2.0 * mu * r / std::sqrt(static_cast<double>(m))) *
                      std::sqrt(inflated * logm),
                  "matrix-moment-contraction");
        report.warnings.push_back(
            query.kappa > 0.0
                ? "the O(sqrt(1/m)) term uses caller-supplied kappa, not a proven constant"
                : "kappa = 0 drops the unspecified O(sqrt(1/m)) term of the bound");
      }
      push_term(&report, "moment-log", log_constant * 2.0 * mu * r * logm / m,
                "matrix-moment-contraction");
      confidence();
      break;
    }
  }
  return report;
}

double empirical_absolute_loss(const WeightedAutomaton& A, const LabeledSample& sample) {
  double sum = 0.0;
  for (int i = 0; i < sample.size(); ++i) {
    const LabeledExample& e = sample.at(i);
    sum += std::abs(evaluate(A, e.x) - e.label);
  }
  return sum / static_cast<double>(sample.size());
}

}  // namespace wfa
