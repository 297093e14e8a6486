#include "setevo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace setevo {

const char* to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass:
      return "pass";
    case AuditStatus::fail:
      return "fail";
    case AuditStatus::indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["status"] = to_string(status);
  j["worst"] = std::isfinite(worst) ? nlohmann::json(worst) : nlohmann::json(format_number(worst));
  j["detail"] = detail;
  j["witness"] = witness;
  j["data"] = data;
  return j;
}

nlohmann::json mask_rle(const BinaryField& z) {
  nlohmann::json runs = nlohmann::json::array();
  std::uint8_t cur = 0;
  std::size_t len = 0;
  for (std::size_t q = 0; q < z.size(); ++q) {
    if (z[q] == cur) {
      ++len;
    } else {
      runs.push_back(len);
      cur = z[q];
      len = 1;
    }
  }
  runs.push_back(len);
  const GridSpec& g = z.grid();
  return {{"origin", {g.origin().x, g.origin().y}}, {"side", g.side()}, {"cells", g.cells()}, {"rle", runs}};
}

BinaryField mask_from_rle(const nlohmann::json& j) {
  const GridSpec g({j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()}, j.at("side").get<double>(),
                   j.at("cells").get<int>());
  std::vector<std::uint8_t> v;
  v.reserve(g.size());
  std::uint8_t cur = 0;
  for (const auto& r : j.at("rle")) {
    v.insert(v.end(), r.get<std::size_t>(), cur);
    cur ^= 1U;
  }
  if (v.size() != g.size()) throw std::invalid_argument("run lengths do not cover the grid");
  return BinaryField(g, std::move(v));
}

namespace {

std::vector<std::pair<int, int>> disc_offsets(int r) {
  std::vector<std::pair<int, int>> out;
  for (int dj = -r; dj <= r; ++dj) {
    for (int di = -r; di <= r; ++di) {
      if (di * di + dj * dj <= r * r) out.emplace_back(di, dj);
    }
  }
  return out;
}

}  // namespace

BinaryField erode(const BinaryField& z, int r) {
  const GridSpec& g = z.grid();
  const int n = g.cells();
  const auto offs = disc_offsets(r);
  BinaryField out(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!z.at(i, j)) continue;
      bool keep = true;
      for (auto [di, dj] : offs) {
        const int ii = i + di, jj = j + dj;
        if (ii >= 0 && ii < n && jj >= 0 && jj < n && !z.at(ii, jj)) {
          keep = false;
          break;
        }
      }
      out.set(i, j, keep);
    }
  }
  return out;
}

BinaryField dilate(const BinaryField& z, int r) {
  const GridSpec& g = z.grid();
  const int n = g.cells();
  const auto offs = disc_offsets(r);
  BinaryField out(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!z.at(i, j)) continue;
      for (auto [di, dj] : offs) {
        const int ii = i + di, jj = j + dj;
        if (ii >= 0 && ii < n && jj >= 0 && jj < n) out.set(ii, jj, true);
      }
    }
  }
  return out;
}

BinaryField opening(const BinaryField& z, int r) { return dilate(erode(z, r), r) & z; }

CompetitorFamily stability_competitors(const BinaryField& z, std::uint64_t seed, int random_count) {
  CompetitorFamily fam;
  fam.seed = seed;
  const GridSpec& g = z.grid();
  fam.masks.push_back(BinaryField(g));
  fam.labels.emplace_back("empty");
  if (z.none()) return fam;
  for (int r : {1, 2, 4}) {
    fam.masks.push_back(erode(z, r));
    fam.labels.push_back("erosion-" + std::to_string(r) + "h");
    fam.masks.push_back(opening(z, r));
    fam.labels.push_back("opening-" + std::to_string(r) + "h");
  }
  const Components comps = connected_components(z);
  if (comps.count > 1) {
    for (int c = 1; c <= comps.count && c <= 64; ++c) {
      BinaryField m = z;
      for (std::size_t q = 0; q < m.size(); ++q) {
        if (comps.labels[q] == c) m.set(q, false);
      }
      fam.masks.push_back(std::move(m));
      fam.labels.push_back("delete-component-" + std::to_string(c));
    }
  }
  std::vector<std::size_t> ones;
  for (std::size_t q = 0; q < z.size(); ++q) {
    if (z[q]) ones.push_back(q);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int max_radius = std::max(2, g.cells() / 16);
  for (int c = 0; c < random_count; ++c) {
    BinaryField m = z;
    if (c % 2 == 0) {
      const double p = 0.01 + 0.3 * unit(rng);
      for (std::size_t q : ones) {
        if (unit(rng) < p) m.set(q, false);
      }
      fam.labels.push_back("random-cells-" + std::to_string(c));
    } else {
      const std::size_t q0 = ones[static_cast<std::size_t>(unit(rng) * ones.size()) % ones.size()];
      const int r = 1 + static_cast<int>(unit(rng) * max_radius);
      const int i0 = static_cast<int>(q0 % g.cells()), j0 = static_cast<int>(q0 / g.cells());
      for (auto [di, dj] : disc_offsets(r)) {
        const int ii = i0 + di, jj = j0 + dj;
        if (ii >= 0 && ii < g.cells() && jj >= 0 && jj < g.cells()) m.set(ii, jj, false);
      }
      fam.labels.push_back("random-ball-" + std::to_string(c));
    }
    fam.masks.push_back(std::move(m));
  }
  return fam;
}

AuditReport check_stability(double t, const BinaryField& z, const StabilityContext& ctx,
                            const CompetitorFamily& competitors, double slack) {
  if (ctx.forcing == nullptr) throw std::invalid_argument("stability check needs a forcing");
  AuditReport rep;
  rep.check = "stability";
  rep.data["competitors"] = competitors.masks.size();
  rep.data["seed"] = competitors.seed;
  rep.data["t"] = t;
  rep.data["slack"] = slack;

  const GridSpec& g = z.grid();
  const std::vector<double> f = ctx.forcing->density(t, g);
  auto energy = [&](const BinaryField& m) {
    double pen = 0.0;
    for (std::size_t q = 0; q < m.size(); ++q) {
      if (!m[q] || f[q] <= 0.0) continue;
      if (ctx.mode == Mode::brittle) return kInfinity;
      pen += f[q];
    }
    return perimeter_estimate(m, ctx.scheme) + ctx.k * g.cell_area() * pen;
  };
  const double ez = energy(z);
  if (!std::isfinite(ez)) {
    rep.status = AuditStatus::fail;
    rep.worst = -kInfinity;
    rep.detail = "state violates the brittle constraint";
    rep.witness = {{"competitor", "state"}, {"mask", mask_rle(z)}};
    return rep;
  }
  double worst = kInfinity;
  for (std::size_t c = 0; c < competitors.masks.size(); ++c) {
    const BinaryField& m = competitors.masks[c];
    const double d = dissipation(z, m, ctx.a);
    if (!std::isfinite(d)) continue;
    const double margin = energy(m) + d - ez;
    if (margin < worst) worst = margin;
    if (margin < -(1e-8 + slack) && rep.status != AuditStatus::fail) {
      rep.status = AuditStatus::fail;
      rep.detail = "competitor " + competitors.labels[c] + " lowers energy plus dissipation by " +
                   format_number(-margin);
      rep.witness = {{"competitor", competitors.labels[c]}, {"margin", margin}, {"mask", mask_rle(m)}};
    }
  }
  rep.worst = worst;
  if (rep.status == AuditStatus::pass) {
    rep.detail = "not refuted by " + std::to_string(competitors.masks.size()) + " competitors";
  }
  return rep;
}

std::vector<double> default_probe_radii(const GridSpec& grid, double radius) {
  std::vector<double> out;
  for (double r = 4.0 * grid.h(); r < radius; r *= 2.0) out.push_back(r);
  out.push_back(radius);
  return out;
}

AuditReport check_density(const BinaryField& z, const DensityParams& p) {
  if (!(p.constant > 0.0) || !(p.radius > 0.0)) throw std::invalid_argument("density parameters must be positive");
  AuditReport rep;
  rep.check = "density";
  const GridSpec& g = z.grid();
  const double h = g.h();
  const std::vector<double> probes = p.probes.empty() ? default_probe_radii(g, p.radius) : p.probes;
  rep.data["constant"] = p.constant;
  rep.data["radius"] = p.radius;
  rep.data["probes"] = probes;
  const int n = g.cells();
  double worst = kInfinity;
  std::size_t points = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!z.at(i, j)) continue;
      const bool boundary = (i > 0 && !z.at(i - 1, j)) || (i + 1 < n && !z.at(i + 1, j)) ||
                            (j > 0 && !z.at(i, j - 1)) || (j + 1 < n && !z.at(i, j + 1));
      if (!boundary) continue;
      ++points;
      const Vec2 y = g.center(i, j);
      for (double rho : probes) {
        const double r = std::min(rho, p.radius);
        const double need = p.constant * r * r * (1.0 - 4.0 * h / rho);
        const double margin = ball_intersection_volume(z, y, rho) - need;
        if (margin < worst) {
          worst = margin;
          if (margin < 0.0) {
            rep.status = AuditStatus::fail;
            rep.witness = {{"x", y.x}, {"y", y.y}, {"rho", rho}, {"margin", margin}};
          }
        }
      }
    }
  }
  rep.data["boundary_points"] = points;
  rep.worst = points == 0 ? 0.0 : worst;
  rep.detail = rep.failed() ? "density bound violated" : "all probes satisfied";
  return rep;
}

double check_compatibility(const BinaryField& z, double a, PerimeterScheme scheme) {
  return perimeter_estimate(z, scheme) - a * volume(z);
}

const char* to_string(ShapeProperty p) {
  switch (p) {
    case ShapeProperty::convexity:
      return "convexity";
    case ShapeProperty::mirror_x:
      return "mirror-x";
    case ShapeProperty::mirror_y:
      return "mirror-y";
    case ShapeProperty::point_symmetry:
      return "point-symmetry";
  }
  return "unknown";
}

ShapeProperty shape_property_from_string(const std::string& name) {
  for (auto p : {ShapeProperty::convexity, ShapeProperty::mirror_x, ShapeProperty::mirror_y,
                 ShapeProperty::point_symmetry}) {
    if (name == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown shape property '" + name + "'");
}

namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  const double t = len2 > 0.0 ? std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(p.x - a.x - t * vx, p.y - a.y - t * vy);
}

}  // namespace

std::optional<std::size_t> convexity_violation(const BinaryField& z) {
  const GridSpec& g = z.grid();
  std::vector<Vec2> pts;
  int imin = g.cells(), imax = -1, jmin = g.cells(), jmax = -1;
  for (int j = 0; j < g.cells(); ++j) {
    for (int i = 0; i < g.cells(); ++i) {
      if (!z.at(i, j)) continue;
      pts.push_back(g.center(i, j));
      imin = std::min(imin, i);
      imax = std::max(imax, i);
      jmin = std::min(jmin, j);
      jmax = std::max(jmax, j);
    }
  }
  if (pts.size() < 3) return std::nullopt;
  const std::vector<Vec2> hull = convex_hull(std::move(pts));
  const double h = g.h();
  const double eps = 1e-9 * h;
  for (int j = jmin; j <= jmax; ++j) {
    for (int i = imin; i <= imax; ++i) {
      if (z.at(i, j)) continue;
      const Vec2 c = g.center(i, j);
      bool inside = true;
      double dist = kInfinity;
      for (std::size_t e = 0; e < hull.size(); ++e) {
        const Vec2 a = hull[e], b = hull[(e + 1) % hull.size()];
        if (cross(a, b, c) < -eps) inside = false;
        dist = std::min(dist, segment_distance(c, a, b));
      }
      if (hull.size() < 3) inside = false;
      if (inside && dist > h + eps) return g.index(i, j);
    }
  }
  return std::nullopt;
}

bool is_digitally_convex(const BinaryField& z) { return !convexity_violation(z).has_value(); }

BinaryField mirror(const BinaryField& z, ShapeProperty p) {
  const GridSpec& g = z.grid();
  const int n = g.cells();
  BinaryField out(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int si = i, sj = j;
      switch (p) {
        case ShapeProperty::mirror_x:
          si = n - 1 - i;
          break;
        case ShapeProperty::mirror_y:
          sj = n - 1 - j;
          break;
        case ShapeProperty::point_symmetry:
          si = n - 1 - i;
          sj = n - 1 - j;
          break;
        case ShapeProperty::convexity:
          throw std::invalid_argument("convexity is not a mirror");
      }
      out.set(i, j, z.at(si, sj));
    }
  }
  return out;
}

namespace {

std::optional<std::size_t> property_violation(const BinaryField& z, ShapeProperty p) {
  if (p == ShapeProperty::convexity) return convexity_violation(z);
  const BinaryField m = mirror(z, p);
  for (std::size_t q = 0; q < z.size(); ++q) {
    if (z[q] != m[q]) return q;
  }
  return std::nullopt;
}

}  // namespace

AuditReport check_shape_preservation(const Trajectory& traj, ShapeProperty p,
                                     const std::vector<BinaryField>& hypothesis_masks) {
  AuditReport rep;
  rep.check = std::string("shape-") + to_string(p);
  if (traj.steps.empty()) return rep;
  const bool start_ok = !property_violation(traj.steps.front().z, p).has_value();
  bool forcing_ok = true;
  for (const auto& m : hypothesis_masks) {
    if (property_violation(m, p)) {
      forcing_ok = false;
      break;
    }
  }
  rep.data["initial_has_property"] = start_ok;
  rep.data["forcing_has_property"] = forcing_ok;
  if (!start_ok || !forcing_ok) {
    rep.status = AuditStatus::indeterminate;
    rep.detail = "hypothesis fails: initial set or forcing complement lacks the property";
    return rep;
  }
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const auto& z = traj.steps[i].z;
    if (auto q = property_violation(z, p)) {
      const Vec2 c = z.grid().center(*q);
      rep.status = AuditStatus::fail;
      rep.worst = -1.0;
      rep.detail = "property lost at step " + std::to_string(i);
      rep.witness = {{"step", i}, {"t", traj.steps[i].t}, {"x", c.x}, {"y", c.y}};
      return rep;
    }
  }
  rep.detail = "property holds at every step";
  return rep;
}

AuditReport audit_energy(const Trajectory& traj, const Scenario& s) {
  AuditReport rep;
  rep.check = s.mode == Mode::adhesive ? "energy-two-sided" : "energy-lower";
  if (traj.steps.empty()) return rep;
  const auto& st0 = traj.steps.front();
  const double e0 = st0.energy.total;
  double tol = st0.gap + 1e-8;
  double p_left = 0.0, p_right = 0.0;
  double worst = kInfinity;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 1; i < traj.steps.size(); ++i) {
    const auto& prev = traj.steps[i - 1];
    const auto& cur = traj.steps[i];
    tol += cur.gap;
    const double middle = cur.energy.total + dissipation(st0.z, cur.z, s.a);
    nlohmann::json row = {{"step", i}, {"t", cur.t}, {"tolerance", tol}, {"middle", middle}};
    if (s.mode == Mode::adhesive) {
      p_left += power_adhesive(prev.t, cur.t, cur.z, s.k, *s.forcing);
      p_right += power_adhesive(prev.t, cur.t, prev.z, s.k, *s.forcing);
      const double lower_res = middle - (e0 + p_left);
      const double upper_res = (e0 + p_right) - middle;
      row["lower_residual"] = lower_res;
      row["upper_residual"] = upper_res;
      const double m = std::min(lower_res, upper_res);
      worst = std::min(worst, m);
      if (m < -tol && !rep.failed()) {
        rep.status = AuditStatus::fail;
        rep.witness = {{"step", i}, {"t", cur.t}, {"lower_residual", lower_res}, {"upper_residual", upper_res}};
      }
    } else {
      const double lower_res = middle - e0;
      row["lower_residual"] = lower_res;
      row["upper_residual_unasserted"] = e0 - middle;
      worst = std::min(worst, lower_res);
      if (lower_res < -tol && !rep.failed()) {
        rep.status = AuditStatus::fail;
        rep.witness = {{"step", i}, {"t", cur.t}, {"lower_residual", lower_res}};
      }
    }
    rows.push_back(row);
  }
  rep.worst = traj.steps.size() > 1 ? worst : 0.0;
  rep.data["prefixes"] = rows;
  rep.detail = rep.failed() ? "energy-dissipation estimate violated beyond tolerance" : "estimates hold within gaps";
  return rep;
}

namespace {

AuditReport audit_invariants(const Trajectory& traj, const Scenario& s) {
  AuditReport rep;
  rep.check = "trajectory-invariants";
  const auto masks = traj.masks();
  for (std::size_t i = 1; i < masks.size(); ++i) {
    if (!masks[i].subset_of(masks[i - 1])) {
      rep.status = AuditStatus::fail;
      rep.detail = "inclusion violated";
      rep.witness = {{"step", i}};
      return rep;
    }
  }
  const double var = total_dissipation(masks, s.a);
  rep.data["total_dissipation"] = var;
  if (s.mode == Mode::brittle) {
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
      const auto& st = traj.steps[i];
      if ((st.z & s.forcing->open_set(st.t, s.grid)).count() > 0) {
        rep.status = AuditStatus::fail;
        rep.detail = "brittle constraint violated";
        rep.witness = {{"step", i}, {"t", st.t}};
        return rep;
      }
    }
  }
  rep.detail = "monotone inclusion and telescoping dissipation hold exactly";
  return rep;
}

}  // namespace

std::vector<AuditReport> audit_trajectory(const Trajectory& traj, const Scenario& s, const AuditOptions& opt) {
  std::vector<AuditReport> out;
  out.push_back(audit_invariants(traj, s));
  if (opt.energy) out.push_back(audit_energy(traj, s));
  const StabilityContext ctx{s.mode, s.k, s.a, s.forcing.get(), s.scheme};
  const std::size_t first = traj.relaxed_initial ? 0 : 1;
  for (std::size_t i = first; i < traj.steps.size(); ++i) {
    const auto& st = traj.steps[i];
    if (opt.stability) {
      const auto fam = stability_competitors(st.z, s.seed + i, opt.random_competitors);
      AuditReport r = check_stability(st.t, st.z, ctx, fam, st.gap);
      r.data["step"] = i;
      out.push_back(std::move(r));
    }
    if (opt.density && s.mode == Mode::brittle) {
      AuditReport r = check_density(st.z, {s.density_constant, s.resolved_density_radius(), {}});
      r.data["step"] = i;
      out.push_back(std::move(r));
    }
  }
  if (!opt.shapes.empty()) {
    std::vector<BinaryField> comps;
    for (const auto& st : traj.steps) comps.push_back(s.forcing->complement_set(st.t, s.grid));
    for (auto p : opt.shapes) out.push_back(check_shape_preservation(traj, p, comps));
  }
  AuditReport compat;
  compat.check = "compatibility";
  compat.status = AuditStatus::pass;
  const auto& z0 = traj.steps.empty() ? s.initial : traj.steps.front().z;
  compat.worst = check_compatibility(z0, s.a, s.scheme);
  compat.detail = "residual P - a|Z_0| reported, not asserted";
  compat.data["perimeter"] = perimeter_estimate(z0, s.scheme);
  compat.data["a_volume"] = s.a * volume(z0);
  out.push_back(std::move(compat));
  return out;
}

}  // namespace setevo
