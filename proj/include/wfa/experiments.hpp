#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wfa/automaton.hpp"

namespace wfa {

// String source for experiments: either a PFA (from a file or the built-in
// geometric family) or a pure length model that emits unary strings.
struct ModelSpec {
  enum class Kind { kPfaFile, kGeometric, kPowerLawLength, kConstantLength };
  Kind kind = Kind::kGeometric;
  std::string path;     // kPfaFile
  double param = 0.5;   // continue probability / tail exponent / fixed length

  // "file:PATH" | "geometric:C" | "power-law:S" | "constant:L"
  static ModelSpec parse(const std::string& text);
  std::string to_string() const;
};

class Model {
 public:
  explicit Model(const ModelSpec& spec);

  StringSample sample(int m, std::uint64_t seed) const;
  // Null for pure length models.
  const WeightedAutomaton* automaton() const { return pfa_.get(); }
  const ModelSpec& spec() const { return spec_; }

 private:
  ModelSpec spec_;
  std::shared_ptr<const WeightedAutomaton> pfa_;
};

// Flat key-value experiment description:
//   experiment inequality|growth|hankel
//   model geometric:0.5
//   m 2 4 8
//   L 5 10 20          (hankel grid)
//   trials 50
//   seed 7
//   r 1
//   output runs.csv    (optional; empty means stdout)
struct ExperimentSpec {
  std::string experiment;
  ModelSpec model;
  std::vector<int> m_grid;
  std::vector<int> length_grid;
  int trials = 1;
  std::uint64_t seed = 0;
  double radius = 1.0;
  std::string output_path;

  static ExperimentSpec parse(std::istream& in);
  static ExperimentSpec parse_file(const std::string& path);
};

struct InequalityOutcome {
  std::string csv;  // fixed header, one row per (m, trial)
  int checks = 0;
  int violations = 0;
};

// Per-sample inequality sweep: exact estimators against their closed-form
// bounds on every sampled S. Violations are expected to be zero.
InequalityOutcome run_inequality_suite(const ExperimentSpec& spec, int jobs = 1);

struct GrowthOutcome {
  std::string csv;  // one row per (m, trial) with the observed max length
  std::vector<double> mean_max_length;  // per grid point
  double r2_log = 0.0;    // fit of L_m against a + b log m
  double slope_log = 0.0;
  double r2_power = 0.0;  // fit against a + b m^(1/s) (power-law models)
  double slope_power = 0.0;
};

GrowthOutcome run_growth_study(const ExperimentSpec& spec, int jobs = 1);

struct HankelConvergenceOutcome {
  std::string csv;  // one row per (L, singular value index)
  std::vector<double> max_relative_gap;  // per L grid point
  bool gap_monotone = false;
};

HankelConvergenceOutcome run_hankel_convergence(const ExperimentSpec& spec, int jobs = 1);

}  // namespace wfa
