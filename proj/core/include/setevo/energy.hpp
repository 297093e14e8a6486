#pragma once

// Adhesive and brittle energies, the dissipation distance and the power term.

#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "setevo/forcing.hpp"
#include "setevo/geometry.hpp"

namespace setevo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct EnergyBreakdown {
  double perimeter = 0.0;
  /// J_k value, or 0 / +inf for the brittle indicator.
  double penalty = 0.0;
  double dissipation_cum = 0.0;
  /// perimeter + penalty; +inf when infeasible.
  double total = 0.0;
  bool feasible = true;
};

EnergyBreakdown adhesive_energy(double t, const BinaryField& z, double k, const Forcing& forcing,
                                PerimeterScheme scheme);

/// Infeasible (total = +inf) iff some cell has z = 1 and f(t, .) > 0.
EnergyBreakdown brittle_energy(double t, const BinaryField& z, const Forcing& forcing,
                               PerimeterScheme scheme);

/// Penalty k * h^2 * sum f z for a precomputed density.
double adhesive_penalty(const BinaryField& z, double k, std::span<const double> density);

/// a * h^2 * #(prev \ next) if next <= prev, +inf otherwise.
double dissipation(const BinaryField& prev, const BinaryField& next, double a);

/// Number of cells removed going from prev to next, or -1 when next is not a
/// subset of prev.
long long removed_cells(const BinaryField& prev, const BinaryField& next);

/// Time-integrated power k * h^2 * sum (f(t1) - f(t0)) z over [t0, t1] for
/// densities linear in time between partition points.
double power_adhesive(double t0, double t1, const BinaryField& z, double k, const Forcing& forcing);

class NonMonotoneTrajectory : public std::runtime_error {
 public:
  explicit NonMonotoneTrajectory(std::size_t step);
  std::size_t step;
};

/// Var_D over a nonincreasing sequence of masks. The telescoping sum and
/// D(first, last) are compared in exact cell counts; throws on a non-monotone
/// sequence or (never expected) a mismatch.
double total_dissipation(std::span<const BinaryField> masks, double a);

/// RFC-4180 CSV with header t,perimeter,penalty,dissipation_cum,total,feasible.
std::string energy_csv_header();
std::string energy_csv_row(double t, const EnergyBreakdown& e);
std::string format_number(double v);

}  // namespace setevo
