#include "setevo/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace setevo {

const char* to_string(Mode mode) { return mode == Mode::adhesive ? "adhesive" : "brittle"; }

InfeasibleStart::InfeasibleStart(std::size_t n)
    : std::runtime_error("initial set meets F(0) in " + std::to_string(n) + " cells (infeasible brittle start)"),
      overlapping_cells(n) {}

StepNotConverged::StepNotConverged(std::size_t s, double g, double tol)
    : std::runtime_error("solver did not converge at step " + std::to_string(s) + ": gap " + format_number(g) +
                         " > tolerance " + format_number(tol)),
      step(s),
      gap(g) {}

std::vector<double> uniform_partition(double T, int steps) {
  if (!(T > 0.0) || steps < 1) throw ScenarioError("uniform partition needs T > 0 and steps >= 1");
  std::vector<double> p(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) p[i] = T * i / steps;
  p.back() = T;
  return p;
}

void Scenario::validate() const {
  if (partition.size() < 2) throw ScenarioError("partition needs at least two times");
  if (partition.front() != 0.0) throw ScenarioError("partition must start at t = 0");
  for (std::size_t i = 1; i < partition.size(); ++i) {
    if (!(partition[i] > partition[i - 1])) throw ScenarioError("partition must be strictly increasing");
  }
  if (!(a > 0.0) || !std::isfinite(a)) throw ScenarioError("a must be finite and positive");
  if (mode == Mode::adhesive && (!(k > 0.0) || !std::isfinite(k))) {
    throw ScenarioError("adhesive k must be finite and positive");
  }
  if (!forcing) throw ScenarioError("scenario has no forcing");
  if (initial.grid() != grid || initial.size() != grid.size()) throw ScenarioError("initial mask grid mismatch");
  if (initial.none() && !allow_empty_initial) throw ScenarioError("initial set is empty (set allow_empty_initial)");
  if (!(density_constant > 0.0)) throw ScenarioError("density constant must be positive");
  solver.validate(grid);
  if (mode == Mode::brittle && !relax_initial) {
    const auto overlap = (initial & forcing->open_set(partition.front(), grid)).count();
    if (overlap > 0) throw InfeasibleStart(overlap);
  }
  validate_monotone(*forcing, partition, grid);
}

StepProblem make_step_problem(const Scenario& s, double t, const BinaryField& prev) {
  StepProblem p;
  p.scheme = s.scheme;
  p.offset = s.a * volume(prev);
  if (s.mode == Mode::adhesive) {
    p.admissible = prev;
    p.g = s.forcing->density(t, s.grid);
    for (double& v : p.g) v = s.k * v - s.a;
  } else {
    p.admissible = prev & s.forcing->complement_set(t, s.grid);
    p.g.assign(s.grid.size(), -s.a);
  }
  return p;
}

EnergyBreakdown scenario_energy(const Scenario& s, double t, const BinaryField& z) {
  return s.mode == Mode::adhesive ? adhesive_energy(t, z, s.k, *s.forcing, s.scheme)
                                  : brittle_energy(t, z, *s.forcing, s.scheme);
}

std::vector<BinaryField> Trajectory::masks() const {
  std::vector<BinaryField> out;
  out.reserve(steps.size());
  for (const auto& st : steps) out.push_back(st.z);
  return out;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& st : steps) out.push_back(st.t);
  return out;
}

const BinaryField& Trajectory::left(double t) const {
  if (steps.empty()) throw std::out_of_range("empty trajectory");
  for (const auto& st : steps) {
    if (t <= st.t) return st.z;
  }
  return steps.back().z;
}

const BinaryField& Trajectory::right(double t) const {
  if (steps.empty()) throw std::out_of_range("empty trajectory");
  const BinaryField* cur = &steps.front().z;
  for (const auto& st : steps) {
    if (st.t <= t) cur = &st.z;
  }
  return *cur;
}

double Trajectory::total_gap() const {
  double g = 0.0;
  for (const auto& st : steps) g += st.gap;
  return g;
}

Trajectory run(const Scenario& s) {
  s.validate();
  const double tol = s.solver.resolved_tolerance(s.grid);
  Trajectory traj;
  traj.configured_initial = s.initial;

  TrajectoryStep first;
  first.t = s.partition.front();
  first.z = s.initial;
  if (s.relax_initial) {
    const StepResult r = single_step(make_step_problem(s, first.t, s.initial), s.solver);
    if (!r.converged) throw StepNotConverged(0, r.relaxed_gap, tol);
    first.z = r.z;
    first.gap = r.gap;
    first.relaxed_gap = r.relaxed_gap;
    first.iterations = r.iterations;
    first.telemetry = r.telemetry;
    traj.relaxed_initial = true;
  }
  const double v0 = volume(first.z);
  first.energy = scenario_energy(s, first.t, first.z);
  traj.steps.push_back(std::move(first));

  for (std::size_t i = 1; i < s.partition.size(); ++i) {
    const double t = s.partition[i];
    const BinaryField& prev = traj.steps.back().z;
    const StepResult r = single_step(make_step_problem(s, t, prev), s.solver);
    if (!r.converged) throw StepNotConverged(i, r.relaxed_gap, tol);
    TrajectoryStep st;
    st.t = t;
    st.z = r.z;
    st.gap = r.gap;
    st.relaxed_gap = r.relaxed_gap;
    st.iterations = r.iterations;
    st.converged = r.converged;
    st.telemetry = r.telemetry;
    st.energy = scenario_energy(s, t, st.z);
    st.energy.dissipation_cum = s.a * (v0 - volume(st.z));
    if (!(st.energy.total <= s.a * v0 + st.gap + 1e-8)) {
      throw std::logic_error("uniform energy bound violated at step " + std::to_string(i));
    }
    traj.steps.push_back(std::move(st));
  }
  return traj;
}

Trajectory prescribed(const Scenario& s) {
  s.validate();
  Trajectory traj;
  traj.configured_initial = s.initial;
  double v0 = 0.0;
  for (std::size_t i = 0; i < s.partition.size(); ++i) {
    TrajectoryStep st;
    st.t = s.partition[i];
    st.z = i == 0 ? s.initial : s.forcing->complement_set(st.t, s.grid) & traj.steps.back().z;
    st.energy = scenario_energy(s, st.t, st.z);
    if (i == 0) v0 = volume(st.z);
    st.energy.dissipation_cum = s.a * (v0 - volume(st.z));
    traj.steps.push_back(std::move(st));
  }
  return traj;
}

ExtinctionReport detect_extinction(const Trajectory& traj, const Scenario& s) {
  ExtinctionReport rep;
  const double bound = s.density_constant * s.resolved_density_radius() * s.resolved_density_radius();
  for (const auto& st : traj.steps) {
    const double vol = volume(st.z);
    const double comp = volume(s.forcing->complement_set(st.t, s.grid));
    rep.volumes.push_back(vol);
    rep.complement_volumes.push_back(comp);
    if (!rep.extinction_time && vol == 0.0) rep.extinction_time = st.t;
    if (!rep.bound_time && comp < bound) {
      rep.bound_time = st.t;
      if (vol > 0.0) rep.consistent = false;
    }
  }
  return rep;
}

namespace {

KSweepEntry sweep_member(const Scenario& tmpl, double k, const Trajectory& brittle) {
  Scenario s = tmpl;
  s.mode = Mode::adhesive;
  s.k = k;
  KSweepEntry e;
  e.k = k;
  e.trajectory = run(s);
  double power = 0.0;
  for (std::size_t i = 0; i < e.trajectory.size(); ++i) {
    const auto& st = e.trajectory.steps[i];
    if (i > 0) power += power_adhesive(e.trajectory.steps[i - 1].t, st.t, st.z, k, *s.forcing);
    e.penalty.push_back(st.energy.penalty);
    e.symmetric_difference.push_back(s.grid.cell_area() *
                                     static_cast<double>(st.z.symmetric_difference_count(brittle.steps[i].z)));
    e.integrated_power.push_back(power);
  }
  return e;
}

}  // namespace

KSweepReport k_sweep(const Scenario& tmpl, const std::vector<double>& ks, int threads) {
  if (tmpl.mode != Mode::adhesive) throw ScenarioError("k_sweep needs an adhesive template");
  if (!std::is_sorted(ks.begin(), ks.end()) || ks.empty()) throw ScenarioError("k list must be ascending and nonempty");
  KSweepReport rep;
  rep.times = tmpl.partition;
  Scenario brittle = tmpl;
  brittle.mode = Mode::brittle;
  rep.brittle = run(brittle);
  if (threads <= 1) {
    for (double k : ks) rep.entries.push_back(sweep_member(tmpl, k, rep.brittle));
  } else {
    std::vector<std::future<KSweepEntry>> futs;
    for (double k : ks) {
      futs.push_back(std::async(std::launch::async, [&tmpl, k, &rep] { return sweep_member(tmpl, k, rep.brittle); }));
    }
    for (auto& f : futs) rep.entries.push_back(f.get());
  }
  return rep;
}

}  // namespace setevo
