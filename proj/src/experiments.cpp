#include "wfa/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wfa/bounds.hpp"
#include "wfa/hankel.hpp"
#include "wfa/io.hpp"
#include "wfa/parallel.hpp"
#include "wfa/rademacher.hpp"
#include "wfa/rng.hpp"
#include "wfa/sample_stats.hpp"
#include "wfa/text.hpp"

namespace wfa {

namespace {

constexpr int kPowerLawCutoff = 10'000;  // documented truncation of the length law

WeightedAutomaton geometric_pfa(double continue_prob) {
  if (!(continue_prob >= 0.0 && continue_prob < 1.0))
    throw DomainError("geometric model needs a continue probability in [0, 1)");
  Eigen::VectorXd alpha(1), beta(1);
  alpha << 1.0;
  beta << 1.0 - continue_prob;
  Eigen::MatrixXd T(1, 1);
  T << continue_prob;
  return make_pfa(Alphabet({"a"}), alpha, {T}, beta);
}

}  // namespace

ModelSpec ModelSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("model must look like kind:parameter");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  ModelSpec spec;
  if (kind == "file") {
    spec.kind = Kind::kPfaFile;
    spec.path = arg;
  } else if (kind == "geometric") {
    spec.kind = Kind::kGeometric;
    spec.param = parse_real(arg);
  } else if (kind == "power-law") {
    spec.kind = Kind::kPowerLawLength;
    spec.param = parse_real(arg);
    if (!(spec.param > 0.0)) throw DomainError("power-law exponent parameter must be positive");
  } else if (kind == "constant") {
    spec.kind = Kind::kConstantLength;
    spec.param = parse_real(arg);
    if (spec.param < 0.0) throw DomainError("constant length must be >= 0");
  } else {
    throw DomainError("unknown model kind: '" + kind + "'");
  }
  return spec;
}

std::string ModelSpec::to_string() const {
  switch (kind) {
    case Kind::kPfaFile:
      return "file:" + path;
    case Kind::kGeometric:
      return "geometric:" + format_real(param);
    case Kind::kPowerLawLength:
      return "power-law:" + format_real(param);
    case Kind::kConstantLength:
      return "constant:" + format_real(param);
  }
  return {};
}

Model::Model(const ModelSpec& spec) : spec_(spec) {
  switch (spec_.kind) {
    case ModelSpec::Kind::kPfaFile: {
      auto loaded = std::make_shared<WeightedAutomaton>(read_wfa_file(spec_.path));
      validate_pfa(*loaded);
      pfa_ = std::move(loaded);
      break;
    }
    case ModelSpec::Kind::kGeometric:
      pfa_ = std::make_shared<WeightedAutomaton>(geometric_pfa(spec_.param));
      break;
    default:
      break;
  }
}

StringSample Model::sample(int m, std::uint64_t seed) const {
  if (pfa_) return sample_pfa(*pfa_, m, seed);
  if (m < 1) throw DomainError("sample size must be >= 1");
  std::vector<Str> strings(static_cast<std::size_t>(m));
  if (spec_.kind == ModelSpec::Kind::kConstantLength) {
    const int length = static_cast<int>(spec_.param);
    for (auto& x : strings) x.assign(static_cast<std::size_t>(length), 0);
    return StringSample(std::move(strings));
  }
  // Truncated power law P[T = t] ~ 1/(t+1)^(s+1), renormalized over
  // t <= kPowerLawCutoff; strings are unary.
  const double s = spec_.param;
  std::vector<double> cumulative(static_cast<std::size_t>(kPowerLawCutoff) + 1);
  double mass = 0.0;
  for (int t = 0; t <= kPowerLawCutoff; ++t) {
    mass += std::pow(t + 1.0, -(s + 1.0));
    cumulative[static_cast<std::size_t>(t)] = mass;
  }
  for (int i = 0; i < m; ++i) {
    Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(i));
    const double u = rng.next_double() * mass;
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    const int length = static_cast<int>(it - cumulative.begin());
    strings[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(length), 0);
  }
  return StringSample(std::move(strings));
}

ExperimentSpec ExperimentSpec::parse(std::istream& in) {
  ExperimentSpec spec;
  bool saw_model = false, saw_seed = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key) || key.front() == '#') continue;
    if (key == "experiment") {
      fields >> spec.experiment;
    } else if (key == "model") {
      std::string text;
      fields >> text;
      spec.model = ModelSpec::parse(text);
      saw_model = true;
    } else if (key == "m") {
      int value;
      while (fields >> value) spec.m_grid.push_back(value);
    } else if (key == "L") {
      int value;
      while (fields >> value) spec.length_grid.push_back(value);
    } else if (key == "trials") {
      fields >> spec.trials;
    } else if (key == "seed") {
      fields >> spec.seed;
      saw_seed = true;
    } else if (key == "r") {
      std::string text;
      fields >> text;
      spec.radius = parse_real(text);
    } else if (key == "output") {
      fields >> spec.output_path;
    } else {
      throw DomainError("unknown experiment key: '" + key + "'");
    }
  }
  if (spec.experiment != "inequality" && spec.experiment != "growth" &&
      spec.experiment != "hankel")
    throw DomainError("experiment must be one of inequality | growth | hankel");
  if (!saw_model) throw DomainError("experiment spec is missing the model");
  if (!saw_seed) throw DomainError("experiment spec is missing the seed");
  if (spec.trials < 1) throw DomainError("trials must be >= 1");
  if (spec.experiment == "hankel") {
    if (spec.length_grid.empty()) throw DomainError("hankel experiment needs an L grid");
  } else if (spec.m_grid.empty()) {
    throw DomainError("experiment needs a nonempty m grid");
  }
  return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open experiment spec: " + path);
  return parse(in);
}

InequalityOutcome run_inequality_suite(const ExperimentSpec& spec, int jobs) {
  const Model model(spec.model);
  const double r = spec.radius;

  struct Row {
    int m, trial;
    std::uint64_t seed;
    int length, collisions, split_collisions;
    double r2_exact, r2_lower, r2_upper;
    double r1_exact, r1_bound;
    double h2_exact, h2_bound;
    int violations;
  };
  std::vector<Row> rows;
  for (int m : spec.m_grid) {
    if (m > 20)
      throw ResourceError("inequality suite runs exact estimators; keep the m grid <= 20");
    for (int trial = 0; trial < spec.trials; ++trial)
      rows.push_back({m, trial, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  }

  parallel_for(static_cast<std::int64_t>(rows.size()), jobs, [&](std::int64_t i) {
    Row& row = rows[static_cast<std::size_t>(i)];
    row.seed = Rng::derived(spec.seed, static_cast<std::uint64_t>(i)).next_u64();
    const StringSample S = model.sample(row.m, row.seed);
    row.length = length_stat(S);
    row.collisions = collision_stat(S);

    const WsResult ws = (split_count(S) <= 100'000) ? ws_exhaustive(S, 100'000)
                                                    : ws_heuristic(S, row.seed);
    row.split_collisions = ws.value;

    row.r2_exact = rademacher_rpr(S, r, 2.0, EstimateMode::kExact, 0, 0).value;
    const BoundReport r2 = bound_r2r(row.m, r);
    row.r2_lower = *r2.lower_value;
    row.r2_upper = r2.value;

    row.r1_exact = rademacher_rpr(S, r, 1.0, EstimateMode::kExact, 0, 0).value;
    row.r1_bound = bound_r1r(row.m, r, row.collisions).value;

    row.h2_exact = rademacher_hpr_bound(S, ws.witness, r, 2.0, EstimateMode::kExact, 0, 0).value;
    row.h2_bound = bound_h2r(row.m, r).value;

    const double slack = 1e-12;
    row.violations = 0;
    if (row.r2_exact < row.r2_lower - slack) ++row.violations;
    if (row.r2_exact > row.r2_upper + slack) ++row.violations;
    if (row.r1_exact > row.r1_bound + slack) ++row.violations;
    if (row.h2_exact > row.h2_bound + slack) ++row.violations;
  });

  std::ostringstream csv;
  csv << "experiment,m,trial,seed,L_S,C_S,W_S,r2_exact,r2_lower,r2_upper,r1_exact,r1_bound,"
         "h2_exact,h2_bound,violations\n";
  InequalityOutcome outcome;
  for (const Row& row : rows) {
    csv << "inequality," << row.m << ',' << row.trial << ',' << row.seed << ',' << row.length
        << ',' << row.collisions << ',' << row.split_collisions << ','
        << format_real(row.r2_exact) << ',' << format_real(row.r2_lower) << ','
        << format_real(row.r2_upper) << ',' << format_real(row.r1_exact) << ','
        << format_real(row.r1_bound) << ',' << format_real(row.h2_exact) << ','
        << format_real(row.h2_bound) << ',' << row.violations << '\n';
    outcome.checks += 4;
    outcome.violations += row.violations;
  }
  outcome.csv = csv.str();
  return outcome;
}

namespace {

// Least squares of y against a + b * g(x); returns (slope, r2).
std::pair<double, double> fit_line(const std::vector<double>& gx, const std::vector<double>& y) {
  const double n = static_cast<double>(gx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    sx += gx[i];
    sy += y[i];
    sxx += gx[i] * gx[i];
    sxy += gx[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return {0.0, 1.0};
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double fit = intercept + slope * gx[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  return {slope, ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot};
}

}  // namespace

GrowthOutcome run_growth_study(const ExperimentSpec& spec, int jobs) {
  const Model model(spec.model);

  struct Row {
    int m, trial;
    std::uint64_t seed;
    int length;
  };
  std::vector<Row> rows;
  for (int m : spec.m_grid)
    for (int trial = 0; trial < spec.trials; ++trial) rows.push_back({m, trial, 0, 0});

  parallel_for(static_cast<std::int64_t>(rows.size()), jobs, [&](std::int64_t i) {
    Row& row = rows[static_cast<std::size_t>(i)];
    row.seed = Rng::derived(spec.seed, static_cast<std::uint64_t>(i)).next_u64();
    row.length = length_stat(model.sample(row.m, row.seed));
  });

  GrowthOutcome outcome;
  std::ostringstream csv;
  csv << "experiment,m,trial,seed,L_S\n";
  for (const Row& row : rows)
    csv << "growth," << row.m << ',' << row.trial << ',' << row.seed << ',' << row.length << '\n';
  outcome.csv = csv.str();

  std::vector<double> log_m, power_m, mean_length;
  std::size_t cursor = 0;
  for (int m : spec.m_grid) {
    double sum = 0.0;
    for (int trial = 0; trial < spec.trials; ++trial) sum += rows[cursor++].length;
    mean_length.push_back(sum / spec.trials);
    log_m.push_back(std::log(static_cast<double>(m)));
    const double s = spec.model.kind == ModelSpec::Kind::kPowerLawLength ? spec.model.param : 1.0;
    power_m.push_back(std::pow(static_cast<double>(m), 1.0 / s));
  }
  outcome.mean_max_length = mean_length;
  std::tie(outcome.slope_log, outcome.r2_log) = fit_line(log_m, mean_length);
  std::tie(outcome.slope_power, outcome.r2_power) = fit_line(power_m, mean_length);
  return outcome;
}

HankelConvergenceOutcome run_hankel_convergence(const ExperimentSpec& spec, int jobs) {
  const Model model(spec.model);
  if (!model.automaton())
    throw DomainError("hankel experiment needs an automaton-backed model");
  const WeightedAutomaton& A = *model.automaton();
  const HankelBoundedness cert = hankel_bounded(A);
  if (!cert.bounded)
    throw DomainError("hankel experiment needs a contractive automaton (spectral radius " +
                      std::to_string(cert.kron_spectral_radius) + " >= 1)");

  const HankelSpectrum spectrum = hankel_singular_values(A);
  const int n = A.num_states();

  std::vector<std::vector<double>> truncated(spec.length_grid.size());
  parallel_for(static_cast<std::int64_t>(spec.length_grid.size()), jobs, [&](std::int64_t i) {
    const int L = spec.length_grid[static_cast<std::size_t>(i)];
    truncated[static_cast<std::size_t>(i)] = truncated_hankel_svd(A, L, L);
  });

  HankelConvergenceOutcome outcome;
  std::ostringstream csv;
  csv << "experiment,L,index,truncated,gramian,rel_gap\n";
  const double scale = spectrum.singular_values.empty() || spectrum.singular_values[0] == 0.0
                           ? 1.0
                           : spectrum.singular_values[0];
  for (std::size_t i = 0; i < spec.length_grid.size(); ++i) {
    double max_gap = 0.0;
    for (int j = 0; j < n; ++j) {
      const double gram = spectrum.singular_values[static_cast<std::size_t>(j)];
      const double trunc =
          j < static_cast<int>(truncated[i].size()) ? truncated[i][static_cast<std::size_t>(j)] : 0.0;
      const double gap = std::abs(gram - trunc) / scale;
      max_gap = std::max(max_gap, gap);
      csv << "hankel," << spec.length_grid[i] << ',' << j << ',' << format_real(trunc) << ','
          << format_real(gram) << ',' << format_real(gap) << '\n';
    }
    outcome.max_relative_gap.push_back(max_gap);
  }
  outcome.csv = csv.str();
  outcome.gap_monotone = true;
  for (std::size_t i = 1; i < outcome.max_relative_gap.size(); ++i) {
    if (outcome.max_relative_gap[i] > outcome.max_relative_gap[i - 1] + 1e-12)
      outcome.gap_monotone = false;
  }
  return outcome;
}

}  // namespace wfa
