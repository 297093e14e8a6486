#pragma once

// Time-dependent forcing F(t) = { f(t, .) > 0 } given through its complement.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "setevo/geometry.hpp"
#include "setevo/shape.hpp"

namespace setevo {

enum class DensityKind {
  /// f(t, .) = indicator of F(t) at cell centers.
  characteristic,
  /// f(t, .) = min(1, dist(., F^c(t)) / (2h)); same positivity set.
  smoothed,
};

const char* to_string(DensityKind kind);

class NonMonotoneForcing : public std::runtime_error {
 public:
  NonMonotoneForcing(double earlier, double later);
  double earlier;
  double later;
};

class Forcing {
 public:
  virtual ~Forcing() = default;

  /// F^c(t) on the grid.
  [[nodiscard]] virtual BinaryField complement_set(double t, const GridSpec& grid) const = 0;
  [[nodiscard]] virtual DensityKind density_kind() const = 0;

  [[nodiscard]] BinaryField open_set(double t, const GridSpec& grid) const {
    return complement_set(t, grid).complement();
  }
  /// Cellwise density f(t, .) >= 0.
  [[nodiscard]] std::vector<double> density(double t, const GridSpec& grid) const;
  /// Finite-difference surrogate (f(t1) - f(t0)) / (t1 - t0).
  [[nodiscard]] std::vector<double> time_derivative(double t0, double t1, const GridSpec& grid) const;
};

/// Forcing whose complement at time t is an analytic shape.
class ShapeForcing final : public Forcing {
 public:
  using ComplementFn = std::function<Shape(double)>;

  ShapeForcing(ComplementFn complement_at, DensityKind kind = DensityKind::characteristic);

  [[nodiscard]] BinaryField complement_set(double t, const GridSpec& grid) const override;
  [[nodiscard]] DensityKind density_kind() const override { return kind_; }
  [[nodiscard]] Shape complement_shape(double t) const { return complement_at_(t); }

 private:
  ComplementFn complement_at_;
  DensityKind kind_;
};

/// Smoothed density from a complement mask.
std::vector<double> smoothed_density(const BinaryField& complement);

/// Checks F(t_{i-1}) subset F(t_i) for consecutive partition times; throws
/// NonMonotoneForcing naming the first offending pair.
void validate_monotone(const Forcing& forcing, std::span<const double> partition,
                       const GridSpec& grid);

}  // namespace setevo
