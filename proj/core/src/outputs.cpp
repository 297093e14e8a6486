#include "setevo/outputs.hpp"

#include <cmath>
#include <cstdio>

#include "setevo/mask_io.hpp"
#include "setevo/svg.hpp"

namespace setevo {

using nlohmann::json;

namespace {

std::string step_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%04zu", i);
  return buf;
}

json finite_or_string(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

json energy_json(const EnergyBreakdown& e) {
  return {{"perimeter", e.perimeter},
          {"penalty", finite_or_string(e.penalty)},
          {"dissipation_cum", e.dissipation_cum},
          {"total", finite_or_string(e.total)},
          {"feasible", e.feasible}};
}

}  // namespace

std::string trajectory_energy_csv(const Trajectory& traj) {
  std::string out = energy_csv_header();
  for (const auto& st : traj.steps) out += energy_csv_row(st.t, st.energy);
  return out;
}

std::string profile_csv(const Profile& p) {
  std::string out = "x,u,v\r\n";
  for (int i = 0; i <= p.N; ++i) {
    out += format_number(p.x(i)) + "," + format_number(p.u[i]) + "," + format_number(p.v[i]) + "\r\n";
  }
  return out;
}

json audits_json(const std::vector<AuditReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr;
}

std::vector<ProfileCase> run_profile_config(const ProfileConfig& cfg) {
  std::vector<ProfileCase> out;
  for (const auto& ob : cfg.obstacles) {
    const auto v = sample_obstacle(ob.function(), cfg.N);
    for (double a : cfg.a_values) {
      ProfileCase c;
      c.obstacle = ob;
      c.a = a;
      c.result = solve_profile(v, a, cfg.N, {cfg.tolerance, 1000});
      c.curvature = curvature_scan(c.result.profile, a, cfg.contact_tol);
      out.push_back(std::move(c));
    }
  }
  return out;
}

json profile_case_json(const ProfileCase& c, double contact_tol) {
  const Profile& p = c.result.profile;
  json runs = json::array();
  for (const auto& r : c.curvature.runs) {
    runs.push_back({{"begin", r.begin}, {"end", r.end}, {"max_deviation", r.max_deviation}, {"skipped", r.skipped}});
  }
  return {{"obstacle", c.obstacle.label()},
          {"a", c.a},
          {"N", p.N},
          {"objective", c.result.objective},
          {"stationarity", c.result.stationarity},
          {"iterations", c.result.iterations},
          {"converged", c.result.converged},
          {"u0", p.u.front()},
          {"uN", p.u.back()},
          {"interior_min", interior_min_height(p)},
          {"contact_length", contact_length(p, contact_tol)},
          {"contact_indices", contact_indices(p, contact_tol)},
          {"curvature_max_deviation", finite_or_string(c.curvature.max_deviation)},
          {"curvature_runs", runs},
          {"notices", c.curvature.notices}};
}

OutputWriter::OutputWriter(std::filesystem::path directory) : dir_(std::move(directory)) {
  std::filesystem::create_directories(dir_);
}

void OutputWriter::write(const std::string& relative, const std::string& bytes) {
  write_file(dir_ / relative, bytes);
  hashes_[relative] = sha256_hex(bytes);
}

void OutputWriter::write_mask(const std::string& stem, const BinaryField& z) {
  write(stem + ".pgm", encode_pgm(z));
  write(stem + ".json", grid_to_json(z.grid()).dump(2) + "\n");
}

std::string OutputWriter::finish(json body) {
  body["files"] = hashes_;
  const std::string bytes = body.dump(2) + "\n";
  write_file(dir_ / "manifest.json", bytes);
  return sha256_hex(bytes);
}

json manifest_config(const LoadedConfig& cfg) {
  json c = cfg.echo;
  if (c.contains("outputs")) c["outputs"].erase("directory");
  return c;
}

std::string emit_trajectory(const LoadedConfig& cfg, const Trajectory& traj, const std::vector<AuditReport>& reports,
                            const std::filesystem::path& dir) {
  OutputWriter w(dir);
  const Scenario& s = cfg.scenario;
  w.write("energy.csv", trajectory_energy_csv(traj));
  json steps = json::array();
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const auto& st = traj.steps[i];
    json row = {{"index", i},
                {"t", st.t},
                {"volume", volume(st.z)},
                {"energy", energy_json(st.energy)},
                {"gap", st.gap},
                {"relaxed_gap", st.relaxed_gap},
                {"iterations", st.iterations},
                {"converged", st.converged}};
    if (cfg.outputs.emit_masks) {
      w.write_mask("masks/" + step_name(i), st.z);
      row["mask"] = "masks/" + step_name(i) + ".pgm";
    }
    if (cfg.outputs.emit_telemetry && !st.telemetry.empty()) {
      w.write("telemetry/" + step_name(i) + ".csv", telemetry_csv(st.telemetry));
    }
    if (cfg.outputs.emit_plots) {
      w.write("plots/" + step_name(i) + ".svg",
              grid_svg(st.z, s.forcing->open_set(st.t, s.grid), cfg.name + " t=" + format_number(st.t)));
    }
    steps.push_back(row);
  }
  if (!reports.empty()) w.write("audits.json", audits_json(reports).dump(2) + "\n");
  bool audits_pass = true;
  for (const auto& r : reports) audits_pass = audits_pass && !r.failed();
  return w.finish({{"kind", "trajectory"},
                   {"name", cfg.name},
                   {"config", manifest_config(cfg)},
                   {"relaxed_initial", traj.relaxed_initial},
                   {"total_gap", traj.total_gap()},
                   {"steps", steps},
                   {"audits_pass", audits_pass}});
}

std::string emit_audits_only(const LoadedConfig& cfg, const std::vector<AuditReport>& reports,
                             const std::filesystem::path& dir) {
  OutputWriter w(dir);
  w.write("audits.json", audits_json(reports).dump(2) + "\n");
  bool audits_pass = true;
  for (const auto& r : reports) audits_pass = audits_pass && !r.failed();
  return w.finish({{"kind", "audit"}, {"name", cfg.name}, {"config", manifest_config(cfg)}, {"audits_pass", audits_pass}});
}

std::string emit_profiles(const LoadedConfig& cfg, const std::vector<ProfileCase>& cases,
                          const std::filesystem::path& dir) {
  OutputWriter w(dir);
  json out = json::array();
  for (const auto& c : cases) {
    const std::string stem = c.obstacle.label() + "_a" + format_number(c.a);
    w.write("profiles/" + stem + ".csv", profile_csv(c.result.profile));
    if (cfg.outputs.emit_plots) {
      w.write("plots/" + stem + ".svg",
              profile_svg(c.result.profile, c.obstacle.label() + ", a = " + format_number(c.a)));
    }
    out.push_back(profile_case_json(c, cfg.profile.contact_tol));
  }
  return w.finish({{"kind", "profile"}, {"name", cfg.name}, {"config", manifest_config(cfg)}, {"cases", out}});
}

std::string emit_sweep(const LoadedConfig& cfg, const KSweepReport& rep, const std::filesystem::path& dir) {
  OutputWriter w(dir);
  std::string csv = "k,t,penalty,symmetric_difference,integrated_power\r\n";
  json entries = json::array();
  for (const auto& e : rep.entries) {
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
      csv += format_number(e.k) + "," + format_number(rep.times[i]) + "," + format_number(e.penalty[i]) + "," +
             format_number(e.symmetric_difference[i]) + "," + format_number(e.integrated_power[i]) + "\r\n";
    }
    entries.push_back({{"k", e.k},
                       {"final_penalty", e.penalty.back()},
                       {"final_symmetric_difference", e.symmetric_difference.back()},
                       {"final_integrated_power", e.integrated_power.back()}});
  }
  w.write("sweep.csv", csv);
  w.write("brittle_energy.csv", trajectory_energy_csv(rep.brittle));
  return w.finish({{"kind", "k-sweep"}, {"name", cfg.name}, {"config", manifest_config(cfg)}, {"entries", entries}});
}

}  // namespace setevo
