#include "setevo/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace setevo {

namespace {

std::string monotone_message(double earlier, double later) {
  std::ostringstream ss;
  ss << "forcing is not monotone: F(" << earlier << ") is not contained in F(" << later << ")";
  return ss.str();
}

}  // namespace

const char* to_string(DensityKind kind) {
  return kind == DensityKind::characteristic ? "characteristic" : "smoothed";
}

NonMonotoneForcing::NonMonotoneForcing(double e, double l)
    : std::runtime_error(monotone_message(e, l)), earlier(e), later(l) {}

std::vector<double> smoothed_density(const BinaryField& complement) {
  const auto& g = complement.grid();
  const double h = g.h();
  const double delta = 2.0 * h;
  std::vector<double> f(complement.size(), 0.0);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (complement.at(i, j)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int dj = -2; dj <= 2; ++dj) {
        for (int di = -2; di <= 2; ++di) {
          const int ii = i + di;
          const int jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= g.nx() || jj >= g.ny()) continue;
          if (complement.at(ii, jj)) best = std::min(best, h * std::hypot(di, dj));
        }
      }
      f[g.index(i, j)] = std::min(1.0, best / delta);
    }
  }
  return f;
}

std::vector<double> Forcing::density(double t, const GridSpec& grid) const {
  const auto comp = complement_set(t, grid);
  if (density_kind() == DensityKind::smoothed) return smoothed_density(comp);
  std::vector<double> f(comp.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = comp[k] ? 0.0 : 1.0;
  return f;
}

std::vector<double> Forcing::time_derivative(double t0, double t1, const GridSpec& grid) const {
  if (!(t1 > t0)) throw std::invalid_argument("time_derivative needs t1 > t0");
  auto f0 = density(t0, grid);
  const auto f1 = density(t1, grid);
  for (std::size_t k = 0; k < f0.size(); ++k) f0[k] = (f1[k] - f0[k]) / (t1 - t0);
  return f0;
}

ShapeForcing::ShapeForcing(ComplementFn complement_at, DensityKind kind)
    : complement_at_(std::move(complement_at)), kind_(kind) {
  if (!complement_at_) throw std::invalid_argument("ShapeForcing needs a complement function");
}

BinaryField ShapeForcing::complement_set(double t, const GridSpec& grid) const {
  return rasterize(complement_at_(t), grid);
}

void validate_monotone(const Forcing& forcing, std::span<const double> partition,
                       const GridSpec& grid) {
  if (partition.empty()) return;
  BinaryField prev = forcing.open_set(partition[0], grid);
  for (std::size_t i = 1; i < partition.size(); ++i) {
    BinaryField next = forcing.open_set(partition[i], grid);
    if (!prev.subset_of(next)) throw NonMonotoneForcing(partition[i - 1], partition[i]);
    prev = std::move(next);
  }
}

}  // namespace setevo
