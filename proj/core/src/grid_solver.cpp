#include "setevo/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace setevo {

namespace {

// Bounding box of the admissible mask plus a one-cell margin, clipped to the
// grid. Cells outside the box are zero in every feasible field, so the
// objective restricted to the box is exact.
struct Crop {
  int i0 = 0, j0 = 0, w = 0, h = 0;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(w) * static_cast<std::size_t>(h); }
  [[nodiscard]] std::size_t global(const GridSpec& g, int li, int lj) const { return g.index(i0 + li, j0 + lj); }
};

Crop crop_of(const BinaryField& m) {
  const GridSpec& g = m.grid();
  int imin = g.cells(), imax = -1, jmin = g.cells(), jmax = -1;
  for (int j = 0; j < g.cells(); ++j) {
    for (int i = 0; i < g.cells(); ++i) {
      if (m.at(i, j)) {
        imin = std::min(imin, i);
        imax = std::max(imax, i);
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
      }
    }
  }
  Crop c;
  if (imax < 0) return c;
  c.i0 = std::max(0, imin - 1);
  c.j0 = std::max(0, jmin - 1);
  c.w = std::min(g.cells() - 1, imax + 1) - c.i0 + 1;
  c.h = std::min(g.cells() - 1, jmax + 1) - c.j0 + 1;
  return c;
}

template <typename T>
std::vector<T> gather(const Crop& c, const GridSpec& g, std::span<const T> full) {
  std::vector<T> out(c.size());
  for (int lj = 0; lj < c.h; ++lj) {
    for (int li = 0; li < c.w; ++li) out[static_cast<std::size_t>(lj) * c.w + li] = full[c.global(g, li, lj)];
  }
  return out;
}

double local_objective(std::span<const double> u, std::span<const double> g, const Crop& c, double h,
                       PerimeterScheme scheme) {
  double lin = 0.0;
  for (std::size_t q = 0; q < u.size(); ++q) lin += g[q] * u[q];
  return total_variation(u, c.w, c.h, h, scheme) + h * h * lin;
}

}  // namespace

void StepProblem::validate() const {
  if (g.size() != admissible.size()) throw SolverConfigError("weight size does not match the admissible mask");
  for (double v : g) {
    if (!std::isfinite(v)) throw SolverConfigError("weight contains a non-finite value");
  }
  if (!std::isfinite(offset)) throw SolverConfigError("offset must be finite");
}

double step_objective(const StepProblem& problem, const BinaryField& z) {
  require_same_grid(problem.admissible.grid(), z.grid(), "step objective");
  if (!z.subset_of(problem.admissible)) throw std::invalid_argument("mask is not below the admissible mask");
  double lin = 0.0;
  for (std::size_t q = 0; q < z.size(); ++q) {
    if (z[q]) lin += problem.g[q];
  }
  return perimeter_estimate(z, problem.scheme) + z.grid().cell_area() * lin + problem.offset;
}

double SolveParams::resolved_tolerance(const GridSpec& grid) const {
  return tolerance > 0.0 ? tolerance : 1e-6 * grid.area();
}
double SolveParams::resolved_sigma(const GridSpec& grid) const {
  return sigma > 0.0 ? sigma : grid.h() / std::sqrt(8.0);
}
double SolveParams::resolved_tau(const GridSpec& grid) const {
  return tau > 0.0 ? tau : grid.h() / std::sqrt(8.0);
}

void SolveParams::validate(const GridSpec& grid) const {
  if (max_iterations <= 0) throw SolverConfigError("max_iterations must be positive");
  if (check_every <= 0) throw SolverConfigError("check_every must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) throw SolverConfigError("threshold level must lie in (0, 1)");
  if (!std::isfinite(tolerance)) throw SolverConfigError("tolerance must be finite");
  const double l2 = 8.0 / grid.cell_area();
  if (resolved_sigma(grid) * resolved_tau(grid) * l2 > 1.0 + 1e-12) {
    throw SolverConfigError("step sizes violate sigma * tau * L^2 <= 1");
  }
}

BinaryField threshold(const RelaxedField& u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw SolverConfigError("threshold level must lie in (0, 1)");
  BinaryField z(u.grid());
  for (std::size_t q = 0; q < u.size(); ++q) z.set(q, u[q] >= s);
  return z;
}

namespace {

constexpr int kAdaptEvery = 5;
constexpr double kBalance = 1.5;
constexpr double kResidualScale = 3.0;
constexpr double kAlphaDecay = 0.95;

}  // namespace

RelaxedResult relaxed_solve(const StepProblem& problem, const SolveParams& params) {
  problem.validate();
  const GridSpec& grid = problem.admissible.grid();
  params.validate(grid);

  RelaxedResult res;
  res.u = RelaxedField(grid, 0.0);
  res.z = BinaryField(grid);
  if (problem.admissible.none()) {
    res.converged = true;
    return res;
  }

  const Crop c = crop_of(problem.admissible);
  const std::size_t n = c.size();
  const int w = c.w, hh = c.h;
  const double h = grid.h();
  const double inv_h = 1.0 / h;
  const double h2 = h * h;
  double sigma = params.resolved_sigma(grid);
  double tau = params.resolved_tau(grid);
  double alpha = 0.5;
  const double tol = params.resolved_tolerance(grid);
  const bool iso = problem.scheme == PerimeterScheme::isotropic;

  const std::vector<double> g = gather<double>(c, grid, problem.g);
  const std::vector<std::uint8_t> m = gather<std::uint8_t>(c, grid, problem.admissible.values());

  std::vector<double> u(n, 0.0), ubar(n, 0.0), px(n, 0.0), py(n, 0.0), div(n, 0.0), binary(n, 0.0);
  std::vector<double> best_u(n, 0.0), best_z(n, 0.0);
  std::vector<double> u_old, px_old, py_old, div_old;

  double best_primal = std::numeric_limits<double>::infinity();
  double best_binary = std::numeric_limits<double>::infinity();
  double best_dual = -std::numeric_limits<double>::infinity();

  auto compute_div = [&]() {
    for (int j = 0; j < hh; ++j) {
      for (int i = 0; i < w; ++i) {
        const std::size_t q = static_cast<std::size_t>(j) * w + i;
        double d = px[q] + py[q];
        if (i > 0) d -= px[q - 1];
        if (j > 0) d -= py[q - w];
        div[q] = d * inv_h;
      }
    }
  };

  auto check = [&](int it) {
    const double primal = local_objective(u, g, c, h, problem.scheme);
    if (primal < best_primal) {
      best_primal = primal;
      best_u = u;
    }
    for (std::size_t q = 0; q < n; ++q) binary[q] = u[q] >= params.threshold ? 1.0 : 0.0;
    const double bin = local_objective(binary, g, c, h, problem.scheme);
    if (bin < best_binary) {
      best_binary = bin;
      best_z = binary;
    }
    if (bin < best_primal) {
      best_primal = bin;
      best_u = binary;
    }
    compute_div();
    double dual = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      if (m[q]) dual += std::min(0.0, g[q] - div[q]);
    }
    dual *= h2;
    best_dual = std::max(best_dual, dual);
    const double gap = std::max(0.0, best_primal - best_dual);
    if (params.record_telemetry) res.telemetry.push_back({it, best_primal, best_dual, gap});
    return gap;
  };

  int it = 0;
  bool done = false;
  while (!done && it < params.max_iterations) {
    ++it;
    const bool adapt = params.adaptive_steps && it % kAdaptEvery == 0;
    if (adapt) {
      u_old = u;
      px_old = px;
      py_old = py;
      div_old = div;
    }
    for (int j = 0; j < hh; ++j) {
      for (int i = 0; i < w; ++i) {
        const std::size_t q = static_cast<std::size_t>(j) * w + i;
        const double dx = i + 1 < w ? (ubar[q + 1] - ubar[q]) * inv_h : 0.0;
        const double dy = j + 1 < hh ? (ubar[q + w] - ubar[q]) * inv_h : 0.0;
        double qx = px[q] + sigma * dx;
        double qy = py[q] + sigma * dy;
        if (iso) {
          const double nrm = std::sqrt(qx * qx + qy * qy);
          if (nrm > 1.0) {
            qx /= nrm;
            qy /= nrm;
          }
        } else {
          qx = std::clamp(qx, -1.0, 1.0);
          qy = std::clamp(qy, -1.0, 1.0);
        }
        px[q] = qx;
        py[q] = qy;
      }
    }
    compute_div();
    for (std::size_t q = 0; q < n; ++q) {
      const double un = m[q] ? std::clamp(u[q] + tau * (div[q] - g[q]), 0.0, 1.0) : 0.0;
      ubar[q] = 2.0 * un - u[q];
      u[q] = un;
    }
    if (adapt) {
      // Residual balancing: the product sigma * tau stays fixed.
      double primal_res = 0.0, dual_res = 0.0;
      for (int j = 0; j < hh; ++j) {
        for (int i = 0; i < w; ++i) {
          const std::size_t q = static_cast<std::size_t>(j) * w + i;
          const double du = u[q] - u_old[q];
          primal_res += std::abs(du / tau + div[q] - div_old[q]);
          const double gx = i + 1 < w ? (u[q + 1] - u_old[q + 1] - du) * inv_h : 0.0;
          const double gy = j + 1 < hh ? (u[q + w] - u_old[q + w] - du) * inv_h : 0.0;
          dual_res += std::abs((px[q] - px_old[q]) / sigma - gx) + std::abs((py[q] - py_old[q]) / sigma - gy);
        }
      }
      dual_res *= kResidualScale;
      if (primal_res > kBalance * dual_res) {
        tau /= 1.0 - alpha;
        sigma *= 1.0 - alpha;
        alpha *= kAlphaDecay;
      } else if (primal_res * kBalance < dual_res) {
        tau *= 1.0 - alpha;
        sigma /= 1.0 - alpha;
        alpha *= kAlphaDecay;
      }
    }
    if (it == 1 || it % params.check_every == 0 || it == params.max_iterations) {
      const double gap = check(it);
      const double bgap = std::max(0.0, best_binary - best_dual);
      done = bgap <= tol || gap <= 0.1 * tol;
    }
  }

  res.iterations = it;
  res.primal = best_primal;
  res.dual = best_dual;
  res.gap = std::max(0.0, best_primal - best_dual);
  res.binary_gap = std::max(0.0, best_binary - best_dual);
  res.converged = res.gap <= tol;

  std::vector<double> full(grid.size(), 0.0);
  for (int lj = 0; lj < c.h; ++lj) {
    for (int li = 0; li < c.w; ++li) {
      const std::size_t q = static_cast<std::size_t>(lj) * w + li;
      full[c.global(grid, li, lj)] = best_u[q];
      res.z.set(c.global(grid, li, lj), best_z[q] > 0.5);
    }
  }
  res.u = RelaxedField(grid, std::move(full));
  return res;
}

StepResult single_step(const StepProblem& problem, const SolveParams& params) {
  RelaxedResult r = relaxed_solve(problem, params);
  StepResult out;
  out.z = std::move(r.z);
  out.value = step_objective(problem, out.z);
  // The empty mask and the full admissible mask are always feasible.
  const double full = step_objective(problem, problem.admissible);
  if (full < out.value - 1e-12) {
    out.value = full;
    out.z = problem.admissible;
  }
  if (problem.offset < out.value - 1e-12) {
    out.value = problem.offset;
    out.z = BinaryField(problem.admissible.grid());
  }
  out.gap = std::max(0.0, out.value - problem.offset - r.dual);
  out.relaxed_gap = r.gap;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.telemetry = std::move(r.telemetry);
  return out;
}

BruteForceResult brute_force_step(const StepProblem& problem) {
  problem.validate();
  const GridSpec& grid = problem.admissible.grid();
  std::vector<std::size_t> cells;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    if (problem.admissible[q]) cells.push_back(q);
  }
  if (cells.size() > kBruteForceMaxCells) {
    throw TooManyCells("brute force admits at most " + std::to_string(kBruteForceMaxCells) +
                       " admissible cells, got " + std::to_string(cells.size()));
  }
  BruteForceResult best{BinaryField(grid), problem.offset};
  if (cells.empty()) return best;

  const Crop c = crop_of(problem.admissible);
  const std::vector<double> g = gather<double>(c, grid, problem.g);
  std::vector<std::size_t> local(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const int i = static_cast<int>(cells[k] % grid.cells()) - c.i0;
    const int j = static_cast<int>(cells[k] / grid.cells()) - c.j0;
    local[k] = static_cast<std::size_t>(j) * c.w + i;
  }

  // Cell 0 in scan order is the most significant bit, so counting up visits
  // masks in lexicographic order and the first strict minimum wins ties.
  const std::size_t nc = cells.size();
  std::vector<double> u(c.size(), 0.0);
  double best_value = std::numeric_limits<double>::infinity();
  std::uint64_t best_bits = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << nc); ++bits) {
    for (std::size_t k = 0; k < nc; ++k) u[local[k]] = (bits >> (nc - 1 - k)) & 1U ? 1.0 : 0.0;
    const double v = local_objective(u, g, c, grid.h(), problem.scheme);
    if (v < best_value - 1e-12) {
      best_value = v;
      best_bits = bits;
    }
  }
  for (std::size_t k = 0; k < nc; ++k) best.z.set(cells[k], (best_bits >> (nc - 1 - k)) & 1U);
  best.value = step_objective(problem, best.z);
  return best;
}

std::string telemetry_csv(const std::vector<TelemetryRow>& rows) {
  std::string out = "iteration,primal,dual,gap\r\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iteration) + "," + format_number(r.primal) + "," + format_number(r.dual) + "," +
           format_number(r.gap) + "\r\n";
  }
  return out;
}

}  // namespace setevo
