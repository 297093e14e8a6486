#pragma once

// Analytic planar shapes and their cell-center rasterization.

#include <functional>
#include <memory>
#include <type_traits>
#include <string>
#include <variant>
#include <vector>

#include "setevo/geometry.hpp"

namespace setevo {

class Shape;

namespace shapes {

struct Everything {};
struct Nothing {};

/// Closed ball.
struct Ball {
  Vec2 center;
  double radius = 0.0;
};

/// Axis-aligned closed box [lo, hi].
struct Box {
  Vec2 lo;
  Vec2 hi;
};

/// Regular n-gon with the given side length whose corners are rounded by
/// circular arcs of radius corner_radius (0 gives the sharp polygon). Edge k
/// has outward normal at angle rotation + 2 pi k / n.
struct RoundedPolygon {
  int n = 4;
  Vec2 center;
  double side = 1.0;
  double corner_radius = 0.0;
  double rotation = 0.0;
};

/// Epigraph { y >= apex.y + slope * |x - apex.x| }.
struct ConeEpigraph {
  Vec2 apex;
  double slope = 1.0;
};

/// { p : (p - point) . normal <= 0 }.
struct HalfPlane {
  Vec2 point;
  Vec2 normal{1.0, 0.0};
};

/// The complement of the needle-like forcing: the square [-1, 1]^2 minus the
/// slit {gamma} x [-1 + gamma, inf) and the slit {-gamma} x (-inf, 1 - gamma],
/// each slit thickened to |x -+ gamma| < half_width.
struct NeedleComplement {
  double gamma = 0.05;
  double half_width = 0.0;
};

/// { 0 <= x <= 1, |y| <= min(v(x), cap) }: the region below a symmetric
/// graph profile.
struct GraphRegion {
  std::function<double(double)> v;
  double cap = 1.0;
};

struct Union {
  std::vector<Shape> parts;
};
struct Intersection {
  std::vector<Shape> parts;
};
struct Complement {
  std::vector<Shape> part;  // exactly one element
};

}  // namespace shapes

class Shape {
 public:
  using Variant = std::variant<shapes::Everything, shapes::Nothing, shapes::Ball, shapes::Box,
                               shapes::RoundedPolygon, shapes::ConeEpigraph, shapes::HalfPlane,
                               shapes::NeedleComplement, shapes::GraphRegion, shapes::Union, shapes::Intersection,
                               shapes::Complement>;

  Shape() : v_(shapes::Nothing{}) {}
  template <typename T>
    requires std::is_constructible_v<Variant, T>
  Shape(T t) : v_(std::move(t)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] bool contains(Vec2 p) const;
  [[nodiscard]] const Variant& variant() const { return v_; }

  static Shape unite(std::vector<Shape> parts) { return shapes::Union{std::move(parts)}; }
  static Shape intersect(std::vector<Shape> parts) { return shapes::Intersection{std::move(parts)}; }
  static Shape complement_of(Shape s) { return shapes::Complement{{std::move(s)}}; }

 private:
  Variant v_;
};

/// Cell value 1 iff the cell center lies in the shape.
BinaryField rasterize(const Shape& shape, const GridSpec& grid);

/// Distance from p to a regular polygon with the given apothem (0 inside).
double distance_to_regular_polygon(Vec2 p, Vec2 center, int n, double apothem, double rotation);

}  // namespace setevo
