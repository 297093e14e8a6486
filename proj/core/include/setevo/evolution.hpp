#pragma once

// The time-incremental scheme over a partition: trajectories, interpolants,
// extinction detection and adhesive-to-brittle k-sweeps.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "setevo/energy.hpp"
#include "setevo/forcing.hpp"
#include "setevo/geometry.hpp"
#include "setevo/grid_solver.hpp"

namespace setevo {

enum class Mode { adhesive, brittle };
const char* to_string(Mode mode);

struct Scenario {
  std::string name;
  GridSpec grid;
  /// t_0 = 0 < t_1 < ... < t_N = T.
  std::vector<double> partition;
  Mode mode = Mode::brittle;
  double k = 1.0;
  double a = 5.0;
  BinaryField initial;
  bool allow_empty_initial = false;
  /// Replace Z_0 by a minimizer of the step problem at t = 0 before evolving;
  /// a brittle Z_0 may then meet F(0).
  bool relax_initial = false;
  std::shared_ptr<const Forcing> forcing;
  PerimeterScheme scheme = PerimeterScheme::isotropic;
  SolveParams solver;
  /// Density constant and radius cap for extinction and density audits;
  /// a non-positive radius selects 1/a.
  double density_constant = 0.5;
  double density_radius = 0.0;
  std::uint64_t seed = 0;

  [[nodiscard]] double resolved_density_radius() const { return density_radius > 0.0 ? density_radius : 1.0 / a; }
  /// Throws ScenarioError, InfeasibleStart or NonMonotoneForcing.
  void validate() const;
};

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleStart : public std::runtime_error {
 public:
  explicit InfeasibleStart(std::size_t overlapping_cells);
  std::size_t overlapping_cells;
};

class StepNotConverged : public std::runtime_error {
 public:
  StepNotConverged(std::size_t step, double gap, double tolerance);
  std::size_t step;
  double gap;
};

std::vector<double> uniform_partition(double T, int steps);

/// Assembles the step problem at time t from the previous state.
StepProblem make_step_problem(const Scenario& s, double t, const BinaryField& prev);

/// E_k or E_inf at (t, z) for the scenario's mode.
EnergyBreakdown scenario_energy(const Scenario& s, double t, const BinaryField& z);

struct TrajectoryStep {
  double t = 0.0;
  BinaryField z;
  EnergyBreakdown energy;
  /// Certified gap of the step that produced z (0 for the given initial state).
  double gap = 0.0;
  double relaxed_gap = 0.0;
  int iterations = 0;
  bool converged = true;
  std::vector<TelemetryRow> telemetry;
};

class Trajectory {
 public:
  std::vector<TrajectoryStep> steps;
  /// Z_0 as configured, before an optional relaxation.
  BinaryField configured_initial;
  bool relaxed_initial = false;

  [[nodiscard]] std::size_t size() const { return steps.size(); }
  [[nodiscard]] std::vector<BinaryField> masks() const;
  [[nodiscard]] std::vector<double> times() const;
  /// Left-continuous piecewise-constant interpolant: Z^i on (t_{i-1}, t_i].
  [[nodiscard]] const BinaryField& left(double t) const;
  /// Right-continuous piecewise-constant interpolant: Z^{i-1} on [t_{i-1}, t_i).
  [[nodiscard]] const BinaryField& right(double t) const;
  [[nodiscard]] double total_gap() const;
};

/// Runs the scheme. Throws StepNotConverged naming the first failing step.
Trajectory run(const Scenario& s);

/// The trajectory Z(t_i) = F^c(t_i), with energies, for configurations that
/// are stable by construction.
Trajectory prescribed(const Scenario& s);

struct ExtinctionReport {
  std::optional<double> extinction_time;
  /// First partition time with |F^c(t)| < density_constant * R^2.
  std::optional<double> bound_time;
  /// False iff the bound is met at some time and the volume is still positive there.
  bool consistent = true;
  std::vector<double> volumes;
  std::vector<double> complement_volumes;
};

ExtinctionReport detect_extinction(const Trajectory& traj, const Scenario& s);

struct KSweepEntry {
  double k = 0.0;
  /// Per partition time.
  std::vector<double> penalty;
  std::vector<double> symmetric_difference;
  std::vector<double> integrated_power;
  Trajectory trajectory;
};

struct KSweepReport {
  std::vector<double> times;
  std::vector<KSweepEntry> entries;
  Trajectory brittle;
};

/// Runs the adhesive template for each k (ascending) and the brittle
/// reference. threads <= 1 runs sequentially.
KSweepReport k_sweep(const Scenario& adhesive_template, const std::vector<double>& ks, int threads = 1);

}  // namespace setevo
