#pragma once

// Closed-form constructions and constants used as ground truth.

#include <functional>

#include <json.hpp>

#include "setevo/geometry.hpp"
#include "setevo/shape.hpp"

namespace setevo::oracle {

/// d / a, the radius of the only ball with P = a |B|.
double compatible_ball_radius(int d, double a);

/// Regular n-gon of circumscribing side `side` whose corners are rounded by
/// arcs of radius 1/a.
struct RoundedPolygon {
  int n = 4;
  double a = 1.0;
  double side = 1.0;

  RoundedPolygon(int n, double a, double side);

  [[nodiscard]] double corner_radius() const { return 1.0 / a; }
  [[nodiscard]] double apothem() const;
  /// Length of the straight part of each side.
  [[nodiscard]] double flat_portion() const;
  [[nodiscard]] double perimeter() const;
  [[nodiscard]] double area() const;
  [[nodiscard]] Shape to_shape(Vec2 center, double rotation = 0.0) const;
};

/// The unique rounded n-gon with corner radius 1/a and P = a |Z|.
RoundedPolygon compatible_rounded_polygon(int n, double a);
/// n = 4: circumscribing side (2 + sqrt(pi)) / a.
RoundedPolygon compatible_rounded_square(double a);

struct MickeyAngle {
  double alpha = 0.0;
  double residual = 0.0;
};

/// Root in [0, pi] of 2 pi - alpha - 4 sin(alpha / 2) - sin(alpha), by bisection.
MickeyAngle mickey_angle();
double mickey_residual(double alpha);
/// 2 sin(alpha / 2) / a.
double mickey_chord(double a);
/// Distance of the disc center beyond the flat side it is attached to.
double mickey_center_offset(double a);

/// -2 sqrt((2 gamma)^2 + (2 - 2 gamma)^2) + 2 gamma + 4 a gamma.
double needle_margin(double gamma, double a);

/// Tangency abscissa beta / (a sqrt(1 + beta^2)).
double arc_tangency(double beta, double a);

/// F(y) - F(l) for the circular-arc profile against the straight corner.
double arc_vs_corner_margin(double beta, double a);
/// beta^3 / (3 a (1 + beta^2)^{3/2}) - beta^3 / (2 a (1 + beta^2)).
double arc_vs_corner_bound(double beta, double a);

/// Adaptive Simpson quadrature on [lo, hi].
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth = 50);

/// All oracle constants for the standard parameters as JSON.
nlohmann::json constants_json(double a = 5.0);

}  // namespace setevo::oracle
