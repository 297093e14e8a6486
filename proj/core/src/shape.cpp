#include "setevo/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace setevo {

namespace {

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = p.x - (a.x + t * vx);
  const double dy = p.y - (a.y + t * vy);
  return std::hypot(dx, dy);
}

struct Contains {
  Vec2 p;

  bool operator()(const shapes::Everything&) const { return true; }
  bool operator()(const shapes::Nothing&) const { return false; }
  bool operator()(const shapes::Ball& b) const {
    const double dx = p.x - b.center.x;
    const double dy = p.y - b.center.y;
    return dx * dx + dy * dy <= b.radius * b.radius;
  }
  bool operator()(const shapes::Box& b) const {
    return p.x >= b.lo.x && p.x <= b.hi.x && p.y >= b.lo.y && p.y <= b.hi.y;
  }
  bool operator()(const shapes::RoundedPolygon& r) const {
    const double apothem = r.side / (2.0 * std::tan(std::numbers::pi / r.n));
    const double inner = apothem - r.corner_radius;
    if (inner < 0.0) return false;
    return distance_to_regular_polygon(p, r.center, r.n, inner, r.rotation) <= r.corner_radius;
  }
  bool operator()(const shapes::ConeEpigraph& c) const {
    return p.y >= c.apex.y + c.slope * std::abs(p.x - c.apex.x);
  }
  bool operator()(const shapes::HalfPlane& hp) const {
    return (p.x - hp.point.x) * hp.normal.x + (p.y - hp.point.y) * hp.normal.y <= 0.0;
  }
  bool operator()(const shapes::NeedleComplement& n) const {
    if (p.x < -1.0 || p.x > 1.0 || p.y < -1.0 || p.y > 1.0) return false;
    const bool right_slit = std::abs(p.x - n.gamma) < n.half_width && p.y >= -1.0 + n.gamma;
    const bool left_slit = std::abs(p.x + n.gamma) < n.half_width && p.y <= 1.0 - n.gamma;
    return !(right_slit || left_slit);
  }
  bool operator()(const shapes::GraphRegion& g) const {
    if (p.x < 0.0 || p.x > 1.0) return false;
    return std::abs(p.y) <= std::min(g.v(p.x), g.cap);
  }
  bool operator()(const shapes::Union& u) const {
    for (const auto& s : u.parts) {
      if (s.contains(p)) return true;
    }
    return false;
  }
  bool operator()(const shapes::Intersection& u) const {
    for (const auto& s : u.parts) {
      if (!s.contains(p)) return false;
    }
    return true;
  }
  bool operator()(const shapes::Complement& c) const {
    if (c.part.size() != 1) throw std::invalid_argument("complement takes exactly one shape");
    return !c.part.front().contains(p);
  }
};

}  // namespace

double distance_to_regular_polygon(Vec2 p, Vec2 center, int n, double apothem, double rotation) {
  if (n < 3) throw std::invalid_argument("polygon needs at least 3 sides");
  const double step = 2.0 * std::numbers::pi / n;
  bool inside = true;
  for (int k = 0; k < n; ++k) {
    const double th = rotation + step * k;
    const double s = (p.x - center.x) * std::cos(th) + (p.y - center.y) * std::sin(th);
    if (s > apothem) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;
  // Vertices sit between consecutive edge normals at the circumradius.
  const double circum = apothem / std::cos(std::numbers::pi / n);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double a0 = rotation + step * k - step / 2.0;
    const double a1 = a0 + step;
    const Vec2 v0{center.x + circum * std::cos(a0), center.y + circum * std::sin(a0)};
    const Vec2 v1{center.x + circum * std::cos(a1), center.y + circum * std::sin(a1)};
    best = std::min(best, segment_distance(p, v0, v1));
  }
  return best;
}

bool Shape::contains(Vec2 p) const { return std::visit(Contains{p}, v_); }

BinaryField rasterize(const Shape& shape, const GridSpec& grid) {
  BinaryField out(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (shape.contains(grid.center(i, j))) out.set(i, j, true);
    }
  }
  return out;
}

}  // namespace setevo
