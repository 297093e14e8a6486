#include "setevo/energy.hpp"

#include <cmath>
#include <cstdio>

namespace setevo {

EnergyBreakdown adhesive_energy(double t, const BinaryField& z, double k, const Forcing& forcing,
                                PerimeterScheme scheme) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("adhesive k must be finite and positive");
  EnergyBreakdown e;
  e.perimeter = perimeter_estimate(z, scheme);
  e.penalty = z.none() ? 0.0 : adhesive_penalty(z, k, forcing.density(t, z.grid()));
  e.total = e.perimeter + e.penalty;
  return e;
}

EnergyBreakdown brittle_energy(double t, const BinaryField& z, const Forcing& forcing,
                               PerimeterScheme scheme) {
  EnergyBreakdown e;
  e.perimeter = perimeter_estimate(z, scheme);
  if (!z.none()) {
    const auto open = forcing.open_set(t, z.grid());
    for (std::size_t q = 0; q < z.size(); ++q) {
      if (z[q] && open[q]) {
        e.feasible = false;
        break;
      }
    }
  }
  e.penalty = e.feasible ? 0.0 : kInfinity;
  e.total = e.perimeter + e.penalty;
  return e;
}

double adhesive_penalty(const BinaryField& z, double k, std::span<const double> density) {
  if (density.size() != z.size()) throw GridError("density size does not match mask");
  double s = 0.0;
  for (std::size_t q = 0; q < z.size(); ++q) {
    if (z[q]) s += density[q];
  }
  return k * z.grid().cell_area() * s;
}

long long removed_cells(const BinaryField& prev, const BinaryField& next) {
  require_same_grid(prev.grid(), next.grid(), "dissipation");
  long long n = 0;
  for (std::size_t q = 0; q < prev.size(); ++q) {
    if (next[q] > prev[q]) return -1;
    n += prev[q] - next[q];
  }
  return n;
}

double dissipation(const BinaryField& prev, const BinaryField& next, double a) {
  const long long n = removed_cells(prev, next);
  if (n < 0) return kInfinity;
  return a * prev.grid().cell_area() * static_cast<double>(n);
}

double power_adhesive(double t0, double t1, const BinaryField& z, double k, const Forcing& forcing) {
  if (z.none()) return 0.0;
  const auto f0 = forcing.density(t0, z.grid());
  const auto f1 = forcing.density(t1, z.grid());
  double s = 0.0;
  for (std::size_t q = 0; q < z.size(); ++q) {
    if (z[q]) s += f1[q] - f0[q];
  }
  return k * z.grid().cell_area() * s;
}

NonMonotoneTrajectory::NonMonotoneTrajectory(std::size_t s)
    : std::runtime_error("trajectory is not monotone at step " + std::to_string(s)), step(s) {}

double total_dissipation(std::span<const BinaryField> masks, double a) {
  if (masks.size() < 2) return 0.0;
  long long telescoped = 0;
  for (std::size_t i = 1; i < masks.size(); ++i) {
    const long long n = removed_cells(masks[i - 1], masks[i]);
    if (n < 0) throw NonMonotoneTrajectory(i);
    telescoped += n;
  }
  const long long direct = removed_cells(masks.front(), masks.back());
  if (direct != telescoped) {
    throw std::logic_error("telescoping dissipation differs from the endpoint dissipation");
  }
  return a * masks.front().grid().cell_area() * static_cast<double>(direct);
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string energy_csv_header() { return "t,perimeter,penalty,dissipation_cum,total,feasible\r\n"; }

std::string energy_csv_row(double t, const EnergyBreakdown& e) {
  return format_number(t) + "," + format_number(e.perimeter) + "," + format_number(e.penalty) + "," +
         format_number(e.dissipation_cum) + "," + format_number(e.total) + "," +
         (e.feasible ? "true" : "false") + "\r\n";
}

}  // namespace setevo
