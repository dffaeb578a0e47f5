// Command-line front end: evaluate automata, compute norms and spectra,
// sample PFAs, estimate Rademacher complexities, and evaluate bounds.
//
// Exit codes: 0 success, 1 usage, 2 domain error, 3 resource-guard error,
// 4 numeric/conditioning error. All numbers print with 17 significant
// digits; stochastic subcommands require an explicit --seed, so identical
// invocations produce identical bytes.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wfa/bounds.hpp"
#include "wfa/experiments.hpp"
#include "wfa/hankel.hpp"
#include "wfa/io.hpp"
#include "wfa/norms.hpp"
#include "wfa/rademacher.hpp"
#include "wfa/sample_stats.hpp"
#include "wfa/text.hpp"

namespace {

using namespace wfa;

double parse_p(const std::string& text) {
  if (text == "inf") return kInfinity;
  return parse_real(text);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw DomainError("cannot open output file: " + path);
  return file;
}

WsResult stats_split(const StringSample& S, std::uint64_t seed, int restarts,
                     std::uint64_t exhaustive_guard) {
  if (split_count(S) <= exhaustive_guard) return ws_exhaustive(S, exhaustive_guard);
  return ws_heuristic(S, seed, restarts);
}

void print_estimate(const RademacherEstimate& est, std::uint64_t seed) {
  std::cout << "value " << format_real(est.value) << "\n"
            << "mode " << (est.mode == EstimateMode::kExact ? "exact" : "monte-carlo") << "\n"
            << "draws " << est.draws << "\n"
            << "seed " << seed << "\n"
            << "standard_error " << format_real(est.standard_error) << "\n"
            << "direction "
            << (est.relation == Relation::kEquals
                    ? "equals"
                    : (est.relation == Relation::kUpperBound ? "upper-bound" : "lower-bound"))
            << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"weighted-automata complexity measures, Rademacher estimates, and bounds"};
  app.require_subcommand(1);

  // ---- eval ----------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "evaluate an automaton on one string");
  std::string eval_wfa, eval_string;
  eval_cmd->add_option("--wfa", eval_wfa, "automaton file")->required();
  eval_cmd->add_option("--string", eval_string, "whitespace-separated tokens; <eps> for empty");
  eval_cmd->callback([&] {
    const WeightedAutomaton A = read_wfa_file(eval_wfa);
    std::cout << format_real(evaluate(A, parse_str(A.alphabet(), eval_string))) << "\n";
  });

  // ---- norm ----------------------------------------------------------
  auto* norm_cmd = app.add_subcommand("norm", "weight norms and function norms");
  std::string norm_wfa;
  int norm_length = 10;
  std::uint64_t norm_guard = 2'000'000;
  norm_cmd->add_option("--wfa", norm_wfa, "automaton file")->required();
  norm_cmd->add_option("--L", norm_length, "cutoff for truncated function norms");
  norm_cmd->add_option("--guard", norm_guard, "enumeration guard");
  norm_cmd->callback([&] {
    const WeightedAutomaton A = read_wfa_file(norm_wfa);
    for (double p : {1.0, 2.0, kInfinity}) {
      const HolderPair hp = HolderPair::from_p(p);
      std::cout << "wfa_norm p=" << (p == kInfinity ? "inf" : format_real(p)) << " "
                << format_real(wfa_norm(A, hp)) << "\n";
    }
    const FunctionNormResult l2 = l2_norm_squared(A);
    std::cout << "l2_norm_squared " << format_real(l2.value) << " status "
              << (l2.status == NormStatus::kExact ? "exact" : "truncated-lower-bound") << "\n";
    const HankelBoundedness cert = hankel_bounded(A);
    std::cout << "hankel_bounded " << (cert.bounded ? "true" : "false") << " rho "
              << format_real(cert.kron_spectral_radius) << "\n";
    for (double p : {1.0, 2.0, kInfinity}) {
      const FunctionNormResult res = lp_norm_truncated(A, p, norm_length, norm_guard);
      std::cout << "lp_norm_truncated p=" << (p == kInfinity ? "inf" : format_real(p)) << " L="
                << norm_length << " " << format_real(res.value);
      if (res.tail_bound) std::cout << " tail_bound " << format_real(*res.tail_bound);
      std::cout << "\n";
    }
  });

  // ---- spectrum ------------------------------------------------------
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Hankel singular values, Schatten norms");
  std::string spectrum_wfa;
  spectrum_cmd->add_option("--wfa", spectrum_wfa, "automaton file")->required();
  spectrum_cmd->callback([&] {
    const WeightedAutomaton A = read_wfa_file(spectrum_wfa);
    const HankelSpectrum spectrum = hankel_singular_values(A);
    std::cout << "singular_values";
    for (double s : spectrum.singular_values) std::cout << ' ' << format_real(s);
    std::cout << "\nnumerical_rank " << spectrum.numerical_rank << "\ngramian_residual "
              << format_real(spectrum.gramian_residual) << "\n";
    for (double p : {1.0, 2.0, kInfinity}) {
      double sum = 0.0, top = 0.0;
      for (double s : spectrum.singular_values) {
        sum += (p == 1.0) ? s : s * s;
        top = std::max(top, s);
      }
      const double value = (p == kInfinity) ? top : ((p == 1.0) ? sum : std::sqrt(sum));
      std::cout << "schatten p=" << (p == kInfinity ? "inf" : format_real(p)) << " "
                << format_real(value) << "\n";
    }
  });

  // ---- stats ---------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "sample statistics L_S, C_S, W_S");
  std::string stats_sample;
  std::uint64_t stats_seed = 0;
  int stats_restarts = 16;
  std::uint64_t stats_guard = 1'000'000;
  stats_cmd->add_option("--sample", stats_sample, "sample file")->required();
  stats_cmd->add_option("--seed", stats_seed, "seed for the split heuristic")->required();
  stats_cmd->add_option("--restarts", stats_restarts, "heuristic restarts");
  stats_cmd->add_option("--guard", stats_guard, "exhaustive split guard");
  stats_cmd->callback([&] {
    const auto [S, alphabet] = read_sample_file_infer(stats_sample);
    const WsResult ws = stats_split(S, stats_seed, stats_restarts, stats_guard);
    std::cout << "m " << S.size() << "\nL_S " << length_stat(S) << "\nC_S " << collision_stat(S)
              << "\nW_S " << ws.value << "\nW_S_exactness "
              << (ws.exactness == WsExactness::kExhaustive ? "exhaustive" : "heuristic") << "\n";
    for (const auto& [u, v] : ws.witness.pairs)
      std::cout << "split " << to_text(alphabet, u) << " | " << to_text(alphabet, v) << "\n";
  });

  // ---- rademacher ----------------------------------------------------
  auto* rad_cmd = app.add_subcommand("rademacher", "complexity estimates over a sample");
  std::string rad_sample, rad_class = "Rpr", rad_p = "2", rad_mode = "exact";
  double rad_r = 1.0;
  std::uint64_t rad_draws = 10'000, rad_seed = 0;
  int rad_n = 1, rad_restarts = 50, rad_steps = 200, rad_jobs = 1;
  rad_cmd->add_option("--sample", rad_sample, "sample file")->required();
  rad_cmd->add_option("--class", rad_class, "Rpr | Hpr | Anpr");
  rad_cmd->add_option("--p", rad_p, "norm index: 1, 2 or inf");
  rad_cmd->add_option("--r", rad_r, "class radius");
  rad_cmd->add_option("--mode", rad_mode, "exact | mc");
  rad_cmd->add_option("--draws", rad_draws, "monte-carlo draws");
  rad_cmd->add_option("--seed", rad_seed, "seed")->required();
  rad_cmd->add_option("--n", rad_n, "states (Anpr)");
  rad_cmd->add_option("--restarts", rad_restarts, "ascent restarts (Anpr)");
  rad_cmd->add_option("--steps", rad_steps, "ascent steps (Anpr)");
  rad_cmd->add_option("--jobs", rad_jobs, "parallel work items");
  rad_cmd->callback([&] {
    const auto [S, alphabet] = read_sample_file_infer(rad_sample);
    const EstimateMode mode =
        (rad_mode == "exact") ? EstimateMode::kExact : EstimateMode::kMonteCarlo;
    if (rad_mode != "exact" && rad_mode != "mc") throw DomainError("mode must be exact or mc");
    const double p = parse_p(rad_p);
    RademacherEstimate est;
    if (rad_class == "Rpr") {
      est = rademacher_rpr(S, rad_r, p, mode, rad_draws, rad_seed, rad_jobs);
    } else if (rad_class == "Hpr") {
      const WsResult ws = stats_split(S, rad_seed, 16, 100'000);
      est = rademacher_hpr_bound(S, ws.witness, rad_r, p, mode, rad_draws, rad_seed, rad_jobs);
    } else if (rad_class == "Anpr") {
      AscentConfig config;
      config.restarts = rad_restarts;
      config.steps = rad_steps;
      est = rademacher_anpr_lower(S, alphabet, rad_n, HolderPair::from_p(p), rad_r, mode,
                                  rad_draws, rad_seed, config, rad_jobs);
    } else {
      throw DomainError("class must be Rpr, Hpr or Anpr");
    }
    print_estimate(est, rad_seed);
  });

  // ---- bound ---------------------------------------------------------
  auto* bound_cmd = app.add_subcommand("bound", "evaluate a closed-form bound");
  std::string bound_class, bound_gen_class = "Anp1", bound_variant = "empirical";
  int b_m = 1, b_n = 1, b_k = 1, b_L = 0;
  double b_r = 1.0, b_C = 1.0, b_W = 1.0, b_eta = 1.0, b_Mop = 0.0, b_nu = 0.0, b_d = 1.0;
  double b_dmax = 0.0, b_dmaxvee = 0.0, b_kappa = 0.0, b_mu = 1.0, b_M = 1.0, b_delta = 0.05;
  bound_cmd->add_option("--class", bound_class,
                        "covering | RAnr | An1 | R1r | R2r | tropp | H1r | H2r | distR1r | "
                        "distH1r | gen")
      ->required();
  bound_cmd->add_option("--m", b_m, "sample size");
  bound_cmd->add_option("--n", b_n, "states");
  bound_cmd->add_option("--k", b_k, "alphabet size");
  bound_cmd->add_option("--L", b_L, "max string length");
  bound_cmd->add_option("--r", b_r, "radius");
  bound_cmd->add_option("--C", b_C, "collision stat");
  bound_cmd->add_option("--W", b_W, "split collision stat");
  bound_cmd->add_option("--eta", b_eta, "covering level");
  bound_cmd->add_option("--Mop", b_Mop, "summand operator-norm range");
  bound_cmd->add_option("--nu", b_nu, "variance proxy");
  bound_cmd->add_option("--d", b_d, "intrinsic dimension");
  bound_cmd->add_option("--Dmax", b_dmax, "max string probability");
  bound_cmd->add_option("--Dmaxvee", b_dmaxvee, "discounted split mass");
  bound_cmd->add_option("--kappa", b_kappa, "stand-in for unspecified O(.) constants");
  bound_cmd->add_option("--mu", b_mu, "loss Lipschitz constant");
  bound_cmd->add_option("--M", b_M, "loss bound");
  bound_cmd->add_option("--delta", b_delta, "confidence level");
  bound_cmd->add_option("--gen-class", bound_gen_class, "Anp1 | R1r | R2r | H1r | H2r");
  bound_cmd->add_option("--variant", bound_variant, "empirical | distributional");
  bound_cmd->callback([&] {
    if (bound_class == "covering") {
      std::cout << "log_covering_number "
                << format_real(log_covering_number_bound(b_eta, b_n, b_k, b_r, b_L)) << "\n";
      return;
    }
    if (bound_class == "tropp") {
      std::cout << "expected_operator_norm " << format_real(tropp_moment_bound(b_Mop, b_nu, b_d))
                << "\n";
      return;
    }
    BoundReport report;
    if (bound_class == "RAnr") {
      report = bound_ranr(b_m, b_n, b_k, b_r, b_L);
    } else if (bound_class == "An1") {
      report = bound_an1(b_m, b_n, b_k, b_L);
    } else if (bound_class == "R1r") {
      report = bound_r1r(b_m, b_r, b_C);
    } else if (bound_class == "R2r") {
      report = bound_r2r(b_m, b_r);
    } else if (bound_class == "H1r") {
      report = bound_h1r(b_m, b_r, b_W);
    } else if (bound_class == "H2r") {
      report = bound_h2r(b_m, b_r);
    } else if (bound_class == "distR1r") {
      report = bound_dist_r1r(b_m, b_r, b_dmax, b_kappa);
    } else if (bound_class == "distH1r") {
      report = bound_dist_h1r(b_m, b_r, b_dmaxvee, b_kappa);
    } else if (bound_class == "gen") {
      BoundQuery query;
      if (bound_gen_class == "Anp1")
        query.cls = BoundClass::kAnp1;
      else if (bound_gen_class == "R1r")
        query.cls = BoundClass::kR1r;
      else if (bound_gen_class == "R2r")
        query.cls = BoundClass::kR2r;
      else if (bound_gen_class == "H1r")
        query.cls = BoundClass::kH1r;
      else if (bound_gen_class == "H2r")
        query.cls = BoundClass::kH2r;
      else
        throw DomainError("gen-class must be Anp1, R1r, R2r, H1r or H2r");
      if (bound_variant == "empirical")
        query.variant = StatVariant::kEmpirical;
      else if (bound_variant == "distributional")
        query.variant = StatVariant::kDistributional;
      else
        throw DomainError("variant must be empirical or distributional");
      query.m = b_m;
      query.n = b_n;
      query.k = b_k;
      query.radius = b_r;
      query.lipschitz = b_mu;
      query.loss_bound = b_M;
      query.delta = b_delta;
      query.kappa = b_kappa;
      if (bound_cmd->count("--L")) query.max_length = b_L;
      if (bound_cmd->count("--C")) query.collisions = b_C;
      if (bound_cmd->count("--W")) query.split_collisions = b_W;
      if (bound_cmd->count("--Dmax")) query.d_max = b_dmax;
      if (bound_cmd->count("--Dmaxvee")) query.d_max_vee = b_dmaxvee;
      report = generalization_bound(query);
    } else {
      throw DomainError("unknown bound class: '" + bound_class + "'");
    }
    std::cout << to_text(report);
  });

  // ---- sample --------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "draw strings from a PFA");
  std::string sample_wfa, sample_out;
  int sample_m = 1, sample_max_len = 10'000, sample_jobs = 1;
  std::uint64_t sample_seed = 0;
  sample_cmd->add_option("--wfa", sample_wfa, "PFA file")->required();
  sample_cmd->add_option("--m", sample_m, "number of strings")->required();
  sample_cmd->add_option("--seed", sample_seed, "seed")->required();
  sample_cmd->add_option("--max-len", sample_max_len, "walk length guard");
  sample_cmd->add_option("--out", sample_out, "output file (default stdout)");
  sample_cmd->add_option("--jobs", sample_jobs, "parallel work items");
  sample_cmd->callback([&] {
    const WeightedAutomaton A = read_wfa_file(sample_wfa);
    const StringSample S = sample_pfa(A, sample_m, sample_seed, sample_max_len, sample_jobs);
    std::ofstream file;
    write_sample(open_output(file, sample_out), A.alphabet(), S);
  });

  // ---- experiment ----------------------------------------------------
  auto* experiment_cmd = app.add_subcommand("experiment", "run an experiment spec");
  std::string experiment_spec;
  int experiment_jobs = 1;
  experiment_cmd->add_option("--spec", experiment_spec, "experiment spec file")->required();
  experiment_cmd->add_option("--jobs", experiment_jobs, "parallel work items");
  experiment_cmd->callback([&] {
    const ExperimentSpec spec = ExperimentSpec::parse_file(experiment_spec);
    std::string csv;
    if (spec.experiment == "inequality") {
      const InequalityOutcome outcome = run_inequality_suite(spec, experiment_jobs);
      csv = outcome.csv;
      std::cout << "checks " << outcome.checks << "\nviolations " << outcome.violations << "\n";
    } else if (spec.experiment == "growth") {
      const GrowthOutcome outcome = run_growth_study(spec, experiment_jobs);
      csv = outcome.csv;
      std::cout << "fit_log_slope " << format_real(outcome.slope_log) << "\nfit_log_r2 "
                << format_real(outcome.r2_log) << "\nfit_power_slope "
                << format_real(outcome.slope_power) << "\nfit_power_r2 "
                << format_real(outcome.r2_power) << "\n";
    } else {
      const HankelConvergenceOutcome outcome = run_hankel_convergence(spec, experiment_jobs);
      csv = outcome.csv;
      std::cout << "gap_monotone " << (outcome.gap_monotone ? "true" : "false") << "\n";
      for (double gap : outcome.max_relative_gap)
        std::cout << "max_rel_gap " << format_real(gap) << "\n";
    }
    std::ofstream file;
    open_output(file, spec.output_path) << csv;
  });

  // ---- check ---------------------------------------------------------
  auto* check_cmd = app.add_subcommand("check", "run the per-sample inequality suite");
  std::string check_model = "geometric:0.5";
  std::vector<int> check_grid = {2, 4, 8};
  int check_trials = 50, check_jobs = 1;
  std::uint64_t check_seed = 0;
  double check_r = 1.0;
  check_cmd->add_option("--model", check_model, "string model");
  check_cmd->add_option("--m", check_grid, "m grid");
  check_cmd->add_option("--trials", check_trials, "trials per grid point");
  check_cmd->add_option("--seed", check_seed, "seed")->required();
  check_cmd->add_option("--r", check_r, "class radius");
  check_cmd->add_option("--jobs", check_jobs, "parallel work items");
  check_cmd->callback([&] {
    ExperimentSpec spec;
    spec.experiment = "inequality";
    spec.model = ModelSpec::parse(check_model);
    spec.m_grid = check_grid;
    spec.trials = check_trials;
    spec.seed = check_seed;
    spec.radius = check_r;
    const InequalityOutcome outcome = run_inequality_suite(spec, check_jobs);
    std::cout << outcome.csv;
    std::cout << "checks " << outcome.checks << "\nviolations " << outcome.violations << "\n";
    if (outcome.violations != 0) throw NumericError("per-sample inequality violations detected");
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const wfa::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const wfa::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const wfa::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  }
}
