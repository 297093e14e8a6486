#pragma once

// One incremental minimization step on the pixel grid: discrete perimeter plus
// a linear volume term over binary fields below an admissible mask.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "setevo/energy.hpp"
#include "setevo/geometry.hpp"

namespace setevo {

struct StepProblem {
  BinaryField admissible;
  /// Per-cell weight; the objective uses h^2 * sum g z.
  std::vector<double> g;
  PerimeterScheme scheme = PerimeterScheme::anisotropic;
  double offset = 0.0;

  void validate() const;
};

/// perimeter(z) + h^2 sum g z + offset. z must lie below the admissible mask.
double step_objective(const StepProblem& problem, const BinaryField& z);

struct SolveParams {
  int max_iterations = 20000;
  /// Non-positive step sizes select h / sqrt(8). These are the initial steps
  /// when adaptive_steps is set.
  double sigma = 0.0;
  double tau = 0.0;
  /// Non-positive selects 1e-6 * domain area.
  double tolerance = 0.0;
  double threshold = 0.5;
  /// Rebalance sigma / tau from the primal and dual residuals.
  bool adaptive_steps = true;
  int check_every = 20;
  bool record_telemetry = false;

  void validate(const GridSpec& grid) const;
  [[nodiscard]] double resolved_tolerance(const GridSpec& grid) const;
  [[nodiscard]] double resolved_sigma(const GridSpec& grid) const;
  [[nodiscard]] double resolved_tau(const GridSpec& grid) const;
};

class SolverConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TelemetryRow {
  int iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct RelaxedResult {
  /// Best relaxed iterate found (lowest relaxed objective).
  RelaxedField u;
  /// Best thresholded iterate.
  BinaryField z;
  /// Objective values without the offset.
  double primal = 0.0;
  double dual = 0.0;
  /// primal - dual, nonincreasing over the run.
  double gap = 0.0;
  /// objective(z) - dual.
  double binary_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TelemetryRow> telemetry;
};

RelaxedResult relaxed_solve(const StepProblem& problem, const SolveParams& params);

/// Cell = 1 iff u >= s.
BinaryField threshold(const RelaxedField& u, double s);

struct StepResult {
  BinaryField z;
  /// Objective including the offset.
  double value = 0.0;
  /// Certified bound: value - (lower bound on the binary minimum).
  double gap = 0.0;
  double relaxed_gap = 0.0;
  int iterations = 0;
  bool converged = true;
  std::vector<TelemetryRow> telemetry;
};

StepResult single_step(const StepProblem& problem, const SolveParams& params);

class TooManyCells : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BruteForceResult {
  BinaryField z;
  double value = 0.0;
};

inline constexpr std::size_t kBruteForceMaxCells = 20;

/// Exhaustive minimum over all sub-masks; ties go to the lexicographically
/// smallest mask in scan order.
BruteForceResult brute_force_step(const StepProblem& problem);

std::string telemetry_csv(const std::vector<TelemetryRow>& rows);

}  // namespace setevo
