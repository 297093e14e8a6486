#pragma once

// Result persistence: manifest with content hashes, masks, CSV, audits, plots.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "setevo/evolution.hpp"
#include "setevo/profile_solver.hpp"
#include "setevo/scenario_io.hpp"
#include "setevo/verify.hpp"

namespace setevo {

/// Energy CSV for a trajectory (header only when empty).
std::string trajectory_energy_csv(const Trajectory& traj);

/// Profile CSV with columns x, u, v.
std::string profile_csv(const Profile& p);

nlohmann::json audits_json(const std::vector<AuditReport>& reports);

struct ProfileCase {
  ObstacleSpec obstacle;
  double a = 0.0;
  ProfileSolveResult result;
  CurvatureReport curvature;
};

/// Solves every (obstacle, a) pair of a profile configuration.
std::vector<ProfileCase> run_profile_config(const ProfileConfig& cfg);
nlohmann::json profile_case_json(const ProfileCase& c, double contact_tol);

/// Collects files and their SHA-256 hashes; writes manifest.json last.
class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path directory);

  void write(const std::string& relative, const std::string& bytes);
  /// Writes <relative>.pgm and its .json sidecar.
  void write_mask(const std::string& relative_stem, const BinaryField& z);
  /// Writes manifest.json with `body` plus the file table; returns the SHA-256
  /// of the manifest bytes.
  std::string finish(nlohmann::json body);

  [[nodiscard]] const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> hashes_;
};

/// Echo with the output directory removed, so that manifests do not depend on
/// where they were written.
nlohmann::json manifest_config(const LoadedConfig& cfg);

std::string emit_trajectory(const LoadedConfig& cfg, const Trajectory& traj, const std::vector<AuditReport>& reports,
                            const std::filesystem::path& dir);
std::string emit_audits_only(const LoadedConfig& cfg, const std::vector<AuditReport>& reports,
                             const std::filesystem::path& dir);
std::string emit_profiles(const LoadedConfig& cfg, const std::vector<ProfileCase>& cases,
                          const std::filesystem::path& dir);
std::string emit_sweep(const LoadedConfig& cfg, const KSweepReport& rep, const std::filesystem::path& dir);

}  // namespace setevo
