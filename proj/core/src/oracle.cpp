#include "setevo/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace setevo::oracle {

using std::numbers::pi;

double compatible_ball_radius(int d, double a) {
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  return static_cast<double>(d) / a;
}

RoundedPolygon::RoundedPolygon(int n_, double a_, double side_) : n(n_), a(a_), side(side_) {
  if (n < 3) throw std::invalid_argument("rounded polygon needs at least 3 sides");
  if (!(a > 0.0) || !(side > 0.0)) throw std::invalid_argument("rounded polygon needs a > 0 and side > 0");
  if (!(corner_radius() < 0.5 * side)) {
    throw std::invalid_argument("corner radius 1/a must be less than half the side");
  }
  if (!(corner_radius() * std::tan(pi / n) < 0.5 * side)) {
    throw std::invalid_argument("corner arcs overlap: side too short for radius 1/a");
  }
}

double RoundedPolygon::apothem() const { return side / (2.0 * std::tan(pi / n)); }

double RoundedPolygon::flat_portion() const { return side - 2.0 * corner_radius() * std::tan(pi / n); }

double RoundedPolygon::perimeter() const {
  const double r = corner_radius();
  return n * side - 2.0 * n * r * std::tan(pi / n) + 2.0 * pi * r;
}

double RoundedPolygon::area() const {
  const double r = corner_radius();
  const double t = std::tan(pi / n);
  return n * side * side / (4.0 * t) - n * r * r * (t - pi / n);
}

Shape RoundedPolygon::to_shape(Vec2 center, double rotation) const {
  return shapes::RoundedPolygon{n, center, side, corner_radius(), rotation};
}

RoundedPolygon compatible_rounded_polygon(int n, double a) {
  if (n < 3) throw std::invalid_argument("rounded polygon needs at least 3 sides");
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  // P = a |Z| is the quadratic s^2 - (4t/a) s + 4t(nt - pi)/(n a^2) = 0 in
  // the side s, t = tan(pi/n); the larger root is the feasible one.
  const double t = std::tan(pi / n);
  const double s = 2.0 * t / a * (1.0 + std::sqrt(pi / (n * t)));
  RoundedPolygon poly(n, a, s);
  const double residual = poly.perimeter() - a * poly.area();
  if (std::abs(residual) > 1e-12 * std::max(1.0, poly.perimeter())) {
    throw std::logic_error("compatible rounded polygon residual " + std::to_string(residual));
  }
  return poly;
}

RoundedPolygon compatible_rounded_square(double a) { return compatible_rounded_polygon(4, a); }

double mickey_residual(double alpha) {
  return 2.0 * pi - alpha - 4.0 * std::sin(alpha / 2.0) - std::sin(alpha);
}

MickeyAngle mickey_angle() {
  double lo = 1.5, hi = 2.5;
  double flo = mickey_residual(lo);
  if (!(flo * mickey_residual(hi) < 0.0)) throw std::logic_error("mickey bracket does not straddle a root");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = mickey_residual(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double alpha = 0.5 * (lo + hi);
  return {alpha, mickey_residual(alpha)};
}

double mickey_chord(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  return 2.0 * std::sin(mickey_angle().alpha / 2.0) / a;
}

double mickey_center_offset(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  return std::cos(mickey_angle().alpha / 2.0) / a;
}

double needle_margin(double gamma, double a) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  const double l = 2.0 - 2.0 * gamma;
  return -2.0 * std::sqrt(4.0 * gamma * gamma + l * l) + 2.0 * gamma + 4.0 * a * gamma;
}

double arc_tangency(double beta, double a) {
  if (!(beta > 0.0) || !(a > 0.0)) throw std::invalid_argument("beta and a must be positive");
  return beta / (a * std::sqrt(1.0 + beta * beta));
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double lo, double hi, double flo, double fmid,
                   double fhi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  const double flm = f(lm), frm = f(rm);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol, int max_depth) {
  const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth);
}

double arc_vs_corner_margin(double beta, double a) {
  const double xhat = arc_tangency(beta, a);
  const double integral = adaptive_simpson(
      [a](double x) { return a * a * x * x / std::sqrt(1.0 - a * a * x * x); }, 0.0, xhat, 1e-13);
  return integral - beta * beta * beta / (2.0 * a * (1.0 + beta * beta));
}

double arc_vs_corner_bound(double beta, double a) {
  const double b3 = beta * beta * beta;
  const double q = 1.0 + beta * beta;
  return b3 / (3.0 * a * std::pow(q, 1.5)) - b3 / (2.0 * a * q);
}

nlohmann::json constants_json(double a) {
  const auto sq = compatible_rounded_square(a);
  const auto hex = compatible_rounded_polygon(6, a);
  const auto mick = mickey_angle();
  nlohmann::json j;
  j["a"] = a;
  j["compatible_ball_radius_2d"] = compatible_ball_radius(2, a);
  j["rounded_square"] = {{"side", sq.side},
                         {"corner_radius", sq.corner_radius()},
                         {"flat_portion", sq.flat_portion()},
                         {"perimeter", sq.perimeter()},
                         {"area", sq.area()}};
  j["rounded_hexagon"] = {{"side", hex.side},
                          {"corner_radius", hex.corner_radius()},
                          {"flat_portion", hex.flat_portion()},
                          {"perimeter", hex.perimeter()},
                          {"area", hex.area()}};
  j["mickey"] = {{"alpha", mick.alpha},
                 {"residual", mick.residual},
                 {"chord", mickey_chord(a)},
                 {"center_offset", mickey_center_offset(a)}};
  j["needle_margin"] = {{"gamma", 0.05}, {"value", needle_margin(0.05, a)}};
  j["arc"] = {{"beta", 1.0},
              {"x_hat", arc_tangency(1.0, a)},
              {"y0", (std::sqrt(2.0) - 1.0) / a},
              {"margin", arc_vs_corner_margin(1.0, a)},
              {"bound", arc_vs_corner_bound(1.0, a)}};
  return j;
}

}  // namespace setevo::oracle
