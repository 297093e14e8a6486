// setevo command line: step, evolve, verify, oracle, sweep-k, reproduce-fig.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "setevo/evolution.hpp"
#include "setevo/grid_solver.hpp"
#include "setevo/mask_io.hpp"
#include "setevo/oracle.hpp"
#include "setevo/outputs.hpp"
#include "setevo/scenario_io.hpp"
#include "setevo/verify.hpp"

namespace {

using namespace setevo;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNotConverged = 3;
constexpr int kAuditFailure = 4;

std::filesystem::path out_dir(const LoadedConfig& cfg, const std::string& override_dir) {
  return override_dir.empty() ? cfg.outputs.directory : std::filesystem::path(override_dir);
}

int report_audits(const std::vector<AuditReport>& reports) {
  int failed = 0;
  for (const auto& r : reports) {
    if (r.status != AuditStatus::pass) {
      std::printf("  %-24s %-13s %s\n", r.check.c_str(), to_string(r.status), r.detail.c_str());
    }
    if (r.failed()) ++failed;
  }
  std::printf("audits: %zu checks, %d failed\n", reports.size(), failed);
  return failed == 0 ? kOk : kAuditFailure;
}

int run_profiles(const LoadedConfig& cfg, const std::filesystem::path& dir) {
  const auto cases = run_profile_config(cfg.profile);
  bool ok = true;
  for (const auto& c : cases) {
    std::printf("%-16s a=%-5g objective=%.9f stationarity=%.2e contact=%.3f curvature-dev=%.4f\n",
                c.obstacle.label().c_str(), c.a, c.result.objective, c.result.stationarity,
                contact_length(c.result.profile, cfg.profile.contact_tol), c.curvature.max_deviation);
    ok = ok && c.result.converged;
  }
  const std::string hash = emit_profiles(cfg, cases, dir);
  std::printf("manifest %s\n", hash.c_str());
  return ok ? kOk : kNotConverged;
}

int run_evolve(const LoadedConfig& cfg, const std::filesystem::path& dir, bool audit, bool audits_only) {
  if (cfg.kind == ScenarioKind::profile) return run_profiles(cfg, dir);
  const Trajectory traj = cfg.prescribed ? prescribed(cfg.scenario) : run(cfg.scenario);
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const auto& st = traj.steps[i];
    std::printf("step %3zu t=%-8g volume=%-10.6g energy=%-10.6g gap=%.2e iterations=%d\n", i, st.t, volume(st.z),
                st.energy.total, st.gap, st.iterations);
  }
  std::vector<AuditReport> reports;
  if (audit) {
    AuditOptions opt = cfg.audit;
    if (cfg.prescribed) opt.energy = opt.stability = opt.density = false;
    reports = audit_trajectory(traj, cfg.scenario, opt);
  }
  if (cfg.scenario.mode == Mode::brittle) {
    const auto ext = detect_extinction(traj, cfg.scenario);
    if (ext.extinction_time) std::printf("extinction at t=%g\n", *ext.extinction_time);
    if (ext.bound_time) std::printf("density bound met at t=%g\n", *ext.bound_time);
    if (audit) {
      AuditReport r;
      r.check = "extinction";
      r.status = ext.consistent ? AuditStatus::pass : AuditStatus::fail;
      r.detail = ext.consistent ? "no surviving volume past the density bound" : "volume survives the density bound";
      if (!ext.consistent) r.witness = {{"bound_time", *ext.bound_time}};
      reports.push_back(std::move(r));
    }
  }
  const std::string hash =
      audits_only ? emit_audits_only(cfg, reports, dir) : emit_trajectory(cfg, traj, reports, dir);
  std::printf("manifest %s\n", hash.c_str());
  return audit ? report_audits(reports) : kOk;
}

int run_step(const LoadedConfig& cfg, const std::filesystem::path& dir, double t) {
  if (cfg.kind != ScenarioKind::grid) throw ConfigError("/kind", "step needs a grid scenario");
  const Scenario& s = cfg.scenario;
  const double when = t >= 0.0 ? t : s.partition.at(1);
  const StepProblem p = make_step_problem(s, when, s.initial);
  const StepResult r = single_step(p, s.solver);
  std::printf("t=%g value=%.12g gap=%.3e relaxed_gap=%.3e iterations=%d converged=%d volume=%g\n", when, r.value,
              r.gap, r.relaxed_gap, r.iterations, r.converged ? 1 : 0, volume(r.z));
  OutputWriter w(dir);
  w.write_mask("step", r.z);
  if (cfg.outputs.emit_telemetry) w.write("telemetry.csv", telemetry_csv(r.telemetry));
  const std::string hash = w.finish({{"kind", "step"},
                                     {"name", cfg.name},
                                     {"config", manifest_config(cfg)},
                                     {"t", when},
                                     {"value", r.value},
                                     {"gap", r.gap},
                                     {"relaxed_gap", r.relaxed_gap},
                                     {"iterations", r.iterations},
                                     {"converged", r.converged}});
  std::printf("manifest %s\n", hash.c_str());
  return r.converged ? kOk : kNotConverged;
}

int run_sweep(LoadedConfig cfg, const std::filesystem::path& dir, std::vector<double> ks, int threads) {
  if (cfg.kind != ScenarioKind::grid) throw ConfigError("/kind", "sweep-k needs a grid scenario");
  if (ks.empty()) ks = cfg.sweep_ks;
  if (ks.empty()) ks = {1.0, 4.0, 16.0, 64.0};
  if (cfg.scenario.mode != Mode::adhesive) {
    cfg.scenario.mode = Mode::adhesive;
    cfg.scenario.k = ks.front();
  }
  const KSweepReport rep = k_sweep(cfg.scenario, ks, threads);
  for (const auto& e : rep.entries) {
    std::printf("k=%-6g J_k(T)=%-12.6g symdiff(T)=%-12.6g power(T)=%.6g\n", e.k, e.penalty.back(),
                e.symmetric_difference.back(), e.integrated_power.back());
  }
  std::printf("manifest %s\n", emit_sweep(cfg, rep, dir).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unidirectional evolution of finite-perimeter sets"};
  app.require_subcommand(1);

  std::string config, out, fig;
  bool no_audit = false;
  double step_time = -1.0, oracle_a = 5.0;
  std::vector<double> ks;
  int threads = 1;

  auto* step = app.add_subcommand("step", "Solve one incremental step from the initial set");
  step->add_option("config", config, "Scenario JSON")->required();
  step->add_option("--out", out, "Output directory");
  step->add_option("--t", step_time, "Step time (default: first partition time after 0)");

  auto* evolve = app.add_subcommand("evolve", "Run the scheme, audit and write outputs");
  evolve->add_option("config", config, "Scenario JSON")->required();
  evolve->add_option("--out", out, "Output directory");
  evolve->add_flag("--no-audit", no_audit, "Skip the auditors");

  auto* verify = app.add_subcommand("verify", "Run the scheme and write audit reports only");
  verify->add_option("config", config, "Scenario JSON")->required();
  verify->add_option("--out", out, "Output directory");

  auto* oracle_cmd = app.add_subcommand("oracle", "Print closed-form constants as JSON");
  oracle_cmd->add_option("--a", oracle_a, "Dissipation coefficient")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep-k", "Adhesive runs over increasing k against the brittle run");
  sweep->add_option("config", config, "Scenario JSON")->required();
  sweep->add_option("--out", out, "Output directory");
  sweep->add_option("--ks", ks, "Ascending k values")->delimiter(',');
  sweep->add_option("--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* repro = app.add_subcommand("reproduce-fig", "Run a shipped preset");
  repro->add_option("id", fig, "Preset id")->required();
  repro->add_option("--out", out, "Output directory");

  app.add_subcommand("presets", "List shipped presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& id : preset_ids()) std::printf("%s\n", id.c_str());
      return kOk;
    }
    if (*oracle_cmd) {
      std::cout << oracle::constants_json(oracle_a).dump(2) << "\n";
      return kOk;
    }
    if (*repro) {
      const LoadedConfig cfg = load_scenario(preset_path(fig));
      if (cfg.kind == ScenarioKind::grid && !cfg.sweep_ks.empty()) return run_sweep(cfg, out_dir(cfg, out), {}, 1);
      return run_evolve(cfg, out_dir(cfg, out), true, false);
    }
    const LoadedConfig cfg = load_scenario(config);
    if (*step) return run_step(cfg, out_dir(cfg, out), step_time);
    if (*evolve) return run_evolve(cfg, out_dir(cfg, out), !no_audit, false);
    if (*verify) return run_evolve(cfg, out_dir(cfg, out), true, true);
    if (*sweep) return run_sweep(cfg, out_dir(cfg, out), ks, threads);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const InfeasibleStart& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const NonMonotoneForcing& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const ScenarioError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const StepNotConverged& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kNotConverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kOk;
}
