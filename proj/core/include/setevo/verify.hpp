#pragma once

// Falsification-style auditors: stability, lower density, compatibility,
// shape preservation and energy-dissipation estimates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "setevo/evolution.hpp"
#include "setevo/geometry.hpp"

namespace setevo {

enum class AuditStatus { pass, fail, indeterminate };
const char* to_string(AuditStatus s);

struct AuditReport {
  std::string check;
  AuditStatus status = AuditStatus::pass;
  /// Most negative margin found (>= 0 on pass); for residual checks, the
  /// signed worst residual.
  double worst = 0.0;
  std::string detail;
  /// Set whenever status == fail.
  nlohmann::json witness;
  nlohmann::json data;

  [[nodiscard]] bool failed() const { return status == AuditStatus::fail; }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Run-length encoding in scan order, starting with a run of zeros.
nlohmann::json mask_rle(const BinaryField& z);
BinaryField mask_from_rle(const nlohmann::json& j);

struct CompetitorFamily {
  std::vector<BinaryField> masks;
  std::vector<std::string> labels;
  std::uint64_t seed = 0;
};

/// Erosion by the closed disc of radius r cells; cells outside the grid count
/// as ones.
BinaryField erode(const BinaryField& z, int radius_cells);
BinaryField dilate(const BinaryField& z, int radius_cells);
/// dilate(erode(z)): removes features thinner than the disc, stays inside z.
BinaryField opening(const BinaryField& z, int radius_cells);

/// The empty set, erosions and openings at h, 2h, 4h, per-component
/// deletions and 64 seeded random sub-masks.
CompetitorFamily stability_competitors(const BinaryField& z, std::uint64_t seed, int random_count = 64);

struct StabilityContext {
  Mode mode = Mode::brittle;
  double k = 1.0;
  double a = 5.0;
  const Forcing* forcing = nullptr;
  PerimeterScheme scheme = PerimeterScheme::isotropic;
};

/// E(t, z) <= E(t, c) + D(z, c) + 1e-8 + slack for every competitor c.
AuditReport check_stability(double t, const BinaryField& z, const StabilityContext& ctx,
                            const CompetitorFamily& competitors, double slack = 0.0);

struct DensityParams {
  double constant = 0.5;
  double radius = 0.2;
  /// Empty selects 4h, 8h, ... below radius, plus radius itself.
  std::vector<double> probes;
};

std::vector<double> default_probe_radii(const GridSpec& grid, double radius);

/// min over boundary one-cells y and probes rho of
/// |Z cap B_rho(y)| - constant * min(rho, R)^2 * (1 - 4h / rho).
AuditReport check_density(const BinaryField& z, const DensityParams& p);

/// P(Z) - a |Z|.
double check_compatibility(const BinaryField& z, double a, PerimeterScheme scheme);

enum class ShapeProperty { convexity, mirror_x, mirror_y, point_symmetry };
const char* to_string(ShapeProperty p);
ShapeProperty shape_property_from_string(const std::string& name);

/// Convex up to a one-cell band: every cell of the rasterized convex hull of
/// the one-cell centers that is missing from z lies within h of the hull
/// boundary. Returns the offending cell index if any.
std::optional<std::size_t> convexity_violation(const BinaryField& z);
bool is_digitally_convex(const BinaryField& z);
BinaryField mirror(const BinaryField& z, ShapeProperty p);

/// `hypothesis_masks` are the forcing complements F^c(t_i); the property must
/// hold for them and for Z_0, otherwise the report is indeterminate.
AuditReport check_shape_preservation(const Trajectory& traj, ShapeProperty p,
                                     const std::vector<BinaryField>& hypothesis_masks);

/// Two-sided (adhesive) or lower (brittle) energy-dissipation estimates at
/// every prefix; tolerance = accumulated gaps + 1e-8. The brittle upper
/// residual is recorded, not asserted.
AuditReport audit_energy(const Trajectory& traj, const Scenario& s);

struct AuditOptions {
  bool energy = true;
  bool stability = true;
  bool density = true;
  std::vector<ShapeProperty> shapes;
  int random_competitors = 64;
};

/// Energy, per-step stability, per-step density (brittle), trajectory
/// invariants and the requested shape checks.
std::vector<AuditReport> audit_trajectory(const Trajectory& traj, const Scenario& s, const AuditOptions& opt = {});

}  // namespace setevo
