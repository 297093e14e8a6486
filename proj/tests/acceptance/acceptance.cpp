// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "setevo/evolution.hpp"
#include "setevo/grid_solver.hpp"
#include "setevo/oracle.hpp"
#include "setevo/outputs.hpp"
#include "setevo/profile_solver.hpp"
#include "setevo/scenario_io.hpp"
#include "setevo/shape.hpp"
#include "setevo/verify.hpp"

using namespace setevo;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

LoadedConfig preset(const std::string& id) { return load_scenario(fs::path(SETEVO_TEST_PRESETS) / (id + ".json")); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct PresetRun {
  LoadedConfig cfg;
  Trajectory traj;
  std::vector<AuditReport> reports;
  double seconds = 0.0;
};

const std::vector<std::string> kTrajectoryPresets = {"disc-row", "extinction-balls", "adhesive-box",
                                                      "polygon-hexagon", "needle"};

std::map<std::string, PresetRun>& runs() {
  static std::map<std::string, PresetRun> cache;
  if (cache.empty()) {
    for (const auto& id : kTrajectoryPresets) {
      PresetRun r{preset(id), {}, {}, 0.0};
      const auto t0 = Clock::now();
      r.traj = run(r.cfg.scenario);
      r.seconds = seconds_since(t0);
      r.reports = audit_trajectory(r.traj, r.cfg.scenario, r.cfg.audit);
      cache.emplace(id, std::move(r));
    }
  }
  return cache;
}

const AuditReport* find_report(const std::vector<AuditReport>& reports, const std::string& prefix) {
  for (const auto& r : reports) {
    if (r.check.rfind(prefix, 0) == 0) return &r;
  }
  return nullptr;
}

Outcome brute_force_equivalence() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    StepProblem p = testing::random_step_problem(seed);
    p.scheme = PerimeterScheme::anisotropic;
    const double best = testing::enumerate_step(p).value;
    worst = std::max(worst, std::abs(single_step(p, {}).value - best));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10.0, "max |error| " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome arc_profile() {
  const auto t0 = Clock::now();
  const auto cfg = preset("regularity-arc");
  const ObstacleSpec& ob = cfg.profile.obstacles.at(0);
  const double a = cfg.profile.a_values.at(0);
  const int N = cfg.profile.N;
  const auto r = solve_profile(sample_obstacle(ob.function(), N), a, N);
  const ArcParams arc{ob.beta, a};
  const double xh = arc_tangency_x(arc);
  // Local coordinates at the apex: s = |x - 1/2|, depth = apex - u, obstacle beta s.
  double err = 0.0;
  int free_lo = N, free_hi = 0;
  for (int i = 0; i <= N; ++i) {
    const double s = std::abs(r.profile.x(i) - 0.5);
    if (r.profile.v[i] - r.profile.u[i] <= cfg.profile.contact_tol || s > 0.25) continue;
    free_lo = std::min(free_lo, i);
    free_hi = std::max(free_hi, i);
    if (s <= xh) err = std::max(err, std::abs(ob.apex_height - r.profile.u[i] - analytic_arc(arc, s)));
  }
  const double left = 0.5 - r.profile.x(free_lo), right = r.profile.x(free_hi) - 0.5;
  const double tangency_err = std::max(std::abs(left - xh), std::abs(right - xh)) * N;
  const double secs = seconds_since(t0);
  const bool pass = r.converged && free_lo <= free_hi && err <= 2.0 / N && tangency_err <= 2.0 && secs < 5.0;
  return {pass, "sup error " + fmt("%.3g", err) + " (bound " + fmt("%.3g", 2.0 / N) + "), tangency off by " +
                    fmt("%.2f", tangency_err) + " samples, " + fmt("%.2f", secs) + " s"};
}

Outcome curvature_law() {
  const auto cfg = preset("fig-f1");
  const auto cases = run_profile_config(cfg.profile);
  std::map<double, const ProfileCase*> by_a;
  for (const auto& c : cases) by_a[c.a] = &c;
  if (!by_a.count(7.0) || !by_a.count(3.0)) return {false, "preset lacks a = 7 and a = 3"};
  const auto& c7 = *by_a[7.0];
  const auto& c3 = *by_a[3.0];
  const double tol = cfg.profile.contact_tol;
  const double l7 = contact_length(c7.result.profile, tol), l3 = contact_length(c3.result.profile, tol);
  const double d7 = c7.curvature.max_deviation, d3 = c3.curvature.max_deviation;
  const bool pass = c7.result.converged && c3.result.converged && d7 <= 0.1 && d3 <= 0.1 && l7 > l3;
  return {pass, "curvature deviation " + fmt("%.4f", d7) + " (a=7), " + fmt("%.4f", d3) + " (a=3); contact " +
                    fmt("%.2f", l7) + " > " + fmt("%.2f", l3)};
}

Outcome small_a() {
  const auto cfg = preset("small-a");
  const auto cases = run_profile_config(cfg.profile);
  double worst = 0.0;
  for (const auto& c : cases) {
    worst = std::max({worst, c.result.profile.u.front(), c.result.profile.u.back()});
  }
  return {!cases.empty() && worst <= 1e-6, "max(u_0, u_N) " + fmt("%.3g", worst)};
}

Outcome oracle_constants() {
  const double a = 5.0;
  const auto m = oracle::mickey_angle();
  const double chord = oracle::mickey_chord(a) * a;
  const auto sq = oracle::compatible_rounded_square(a);
  const double flat_err = std::abs(sq.flat_portion() - std::sqrt(M_PI) / a);
  const double residual = std::abs(sq.perimeter() - a * sq.area());
  const double needle = oracle::needle_margin(1e-4, a);
  const bool ok_mickey = std::abs(m.alpha - 2.005) <= 1e-3 && std::abs(chord - 1.687) <= 2e-3;
  const bool ok_square = flat_err <= 1e-12 && residual <= 1e-12;
  const bool ok_needle = std::abs(needle + 4.0) <= 1e-3;
  return {ok_mickey && ok_square && ok_needle,
          "alpha " + fmt("%.5f", m.alpha) + ", chord*a " + fmt("%.5f", chord) + ", flat error " +
              fmt("%.2g", flat_err) + ", residual " + fmt("%.2g", residual) + ", needle_margin(1e-4, 5) " +
              fmt("%.6f", needle) + (ok_needle ? "" : " (off by " + fmt("%.2e", std::abs(needle + 4.0)) + ")")};
}

Outcome trajectory_invariants() {
  std::string bad;
  for (const auto& id : kTrajectoryPresets) {
    const auto& r = runs().at(id);
    const auto* inv = find_report(r.reports, "trajectory-invariants");
    const auto* en = find_report(r.reports, "energy-");
    bool ok = inv && !inv->failed() && en && !en->failed();
    // Telescoping: sum of step dissipations equals a |Z_0 \ Z_N| in whole cells.
    const auto masks = r.traj.masks();
    std::size_t removed = 0;
    for (std::size_t i = 1; i < masks.size(); ++i) {
      ok = ok && masks[i].subset_of(masks[i - 1]);
      removed += (masks[i - 1] - masks[i]).count();
    }
    ok = ok && removed == (masks.front() - masks.back()).count();
    if (!ok) bad += " " + id;
  }
  return {bad.empty(), bad.empty() ? "5 presets: inclusion, telescoping and energy estimates hold"
                                   : "violations in" + bad};
}

Outcome stability_falsification() {
  int states = 0;
  std::string bad;
  for (const auto& id : kTrajectoryPresets) {
    for (const auto& rep : runs().at(id).reports) {
      if (rep.check != "stability") continue;
      ++states;
      if (rep.failed()) bad += " " + id + "@" + std::to_string(rep.data.value("step", -1));
    }
  }
  const auto& box = runs().at("adhesive-box");
  BinaryField z = box.traj.steps.back().z;
  const GridSpec& g = z.grid();
  const int j = g.cells() / 2;
  int edge = -1;
  for (int i = 0; i < g.cells(); ++i) {
    if (z.at(i, j)) edge = i;
  }
  const int len = static_cast<int>(0.5 / g.h());
  for (int i = edge + 1; i <= std::min(g.cells() - 1, edge + len); ++i) z.set(i, j, true);
  const Scenario& s = box.cfg.scenario;
  const StabilityContext ctx{s.mode, s.k, s.a, s.forcing.get(), s.scheme};
  const auto spiked = check_stability(s.partition.back(), z, ctx, stability_competitors(z, s.seed));
  const bool spike_caught = edge >= 0 && spiked.failed() && !spiked.witness.is_null();
  return {bad.empty() && states > 0 && spike_caught,
          std::to_string(states) + " solver states checked" + (bad.empty() ? "" : ", failures:" + bad) +
              "; spiked mask " + (spike_caught ? "fails with witness " + spiked.witness.value("competitor", "?")
                                               : std::string("not caught"))};
}

Outcome lower_density() {
  int states = 0;
  std::string bad;
  double R = 0.0;
  for (const auto& id : kTrajectoryPresets) {
    const auto& r = runs().at(id);
    if (r.cfg.scenario.mode != Mode::brittle) continue;
    R = r.cfg.scenario.resolved_density_radius();
    if (r.cfg.scenario.density_constant != 0.5 || std::abs(R - 1.0 / r.cfg.scenario.a) > 1e-15) bad += " params:" + id;
    for (const auto& rep : r.reports) {
      if (rep.check != "density") continue;
      ++states;
      if (rep.failed()) bad += " " + id + "@" + std::to_string(rep.data.value("step", -1));
    }
  }
  const GridSpec g({-1, -1}, 2.0, 128);
  BinaryField cusp = rasterize(shapes::Ball{{0, 0}, 0.2}, g);
  for (int i = 0; i < g.cells(); ++i) {
    const double x = g.center(i, g.cells() / 2).x;
    if (x > 0 && x <= 0.5) cusp.set(i, g.cells() / 2, true);
  }
  const auto rep = check_density(cusp, {0.5, 0.2, {}});
  return {bad.empty() && states > 0 && rep.failed(),
          std::to_string(states) + " brittle states pass" + (bad.empty() ? "" : ", failures:" + bad) +
              "; cusp " + (rep.failed() ? "fails" : "passes")};
}

Outcome extinction() {
  const auto& r = runs().at("extinction-balls");
  const auto rep = detect_extinction(r.traj, r.cfg.scenario);
  const bool ordered = rep.extinction_time && rep.bound_time && *rep.extinction_time <= *rep.bound_time;
  const bool pass = ordered && rep.consistent && r.cfg.scenario.grid.cells() == 256 && r.seconds < 60.0;
  return {pass, "extinct at t=" + (rep.extinction_time ? fmt("%g", *rep.extinction_time) : std::string("never")) +
                    ", bound t=" + (rep.bound_time ? fmt("%g", *rep.bound_time) : std::string("none")) + ", " +
                    fmt("%.1f", r.seconds) + " s at 256^2"};
}

Outcome k_sweep_trend() {
  const auto cfg = preset("ksweep-growing");
  const auto t0 = Clock::now();
  const auto rep = k_sweep(cfg.scenario, cfg.sweep_ks, 1);
  const double secs = seconds_since(t0);
  bool pass = cfg.sweep_ks == std::vector<double>{1, 4, 16, 64} && secs < 300.0;
  std::string j = "J_k(T)", d = "symdiff";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    j += " " + fmt("%.4g", e.penalty.back());
    d += " " + fmt("%.4g", e.symmetric_difference.back());
    if (i > 0) {
      const auto& prev = rep.entries[i - 1];
      pass = pass && e.penalty.back() <= prev.penalty.back() &&
             e.symmetric_difference.back() <= prev.symmetric_difference.back();
    }
  }
  return {pass, j + "; " + d + "; " + fmt("%.1f", secs) + " s"};
}

Outcome polygon_forcing() {
  const auto& r = runs().at("polygon-hexagon");
  const Scenario& s = r.cfg.scenario;
  const oracle::RoundedPolygon hex(6, s.a, 1.6);
  const BinaryField expected = rasterize(hex.to_shape({0, 0}), s.grid);
  const double diff = r.traj.steps.back().z.symmetric_difference_count(expected) * s.grid.cell_area();
  const double band = 2.0 * s.grid.h() * hex.perimeter();
  return {diff <= band && 1.0 / s.a < 0.8, "symmetric difference " + fmt("%.4f", diff) + " <= band " +
                                                fmt("%.4f", band)};
}

std::string run_and_emit(const LoadedConfig& cfg, const fs::path& dir) {
  if (cfg.kind == ScenarioKind::profile) return emit_profiles(cfg, run_profile_config(cfg.profile), dir);
  if (!cfg.sweep_ks.empty()) return emit_sweep(cfg, k_sweep(cfg.scenario, cfg.sweep_ks, 1), dir);
  const Trajectory traj = cfg.prescribed ? prescribed(cfg.scenario) : run(cfg.scenario);
  return emit_trajectory(cfg, traj, audit_trajectory(traj, cfg.scenario, cfg.audit), dir);
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "setevo_acceptance";
  fs::remove_all(root);
  int checked = 0;
  std::string bad;
  for (const auto& entry : fs::directory_iterator(SETEVO_TEST_PRESETS)) {
    if (entry.path().extension() != ".json") continue;
    const std::string id = entry.path().stem().string();
    const auto cfg = load_scenario(entry.path());
    const std::string h1 = run_and_emit(cfg, root / (id + "_1"));
    const std::string h2 = run_and_emit(cfg, root / (id + "_2"));
    ++checked;
    if (h1 != h2) bad += " " + id;
  }
  fs::remove_all(root);
  return {bad.empty() && checked > 0,
          std::to_string(checked) + " presets" + (bad.empty() ? ", hashes identical" : ", mismatches:" + bad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"brute-force equivalence", brute_force_equivalence},
      {"arc-profile oracle", arc_profile},
      {"curvature law", curvature_law},
      {"small-a pathology", small_a},
      {"oracle constants", oracle_constants},
      {"trajectory invariants", trajectory_invariants},
      {"stability falsification", stability_falsification},
      {"lower density estimate", lower_density},
      {"extinction", extinction},
      {"k-sweep", k_sweep_trend},
      {"polygon forcing", polygon_forcing},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%2zu %-26s %s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
