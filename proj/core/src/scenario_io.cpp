#include "setevo/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "setevo/mask_io.hpp"
#include "setevo/oracle.hpp"
#include "setevo/profile_solver.hpp"

#ifndef SETEVO_PRESET_DIR
#define SETEVO_PRESET_DIR "presets"
#endif

namespace setevo {

using nlohmann::json;

ConfigError::ConfigError(std::string ptr, const std::string& message)
    : std::invalid_argument((ptr.empty() ? std::string("/") : ptr) + ": " + message), pointer(std::move(ptr)) {}

namespace {

std::string child(const std::string& ptr, const std::string& key) {
  std::string esc;
  for (char c : key) {
    if (c == '~') {
      esc += "~0";
    } else if (c == '/') {
      esc += "~1";
    } else {
      esc += c;
    }
  }
  return ptr + "/" + esc;
}

std::string child(const std::string& ptr, std::size_t idx) { return ptr + "/" + std::to_string(idx); }

// Reads one JSON object, records defaults into an echo object and rejects
// keys that were never read.
class Obj {
 public:
  Obj(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) throw ConfigError(ptr_, "expected an object");
  }

  [[nodiscard]] const std::string& ptr() const { return ptr_; }
  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }
  [[nodiscard]] json& echo() { return echo_; }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(child(ptr_, key), "missing required key");
    return j_.at(key);
  }

  const json& raw_or(const std::string& key, const json& fallback) {
    used_.insert(key);
    return j_.contains(key) ? j_.at(key) : fallback;
  }

  template <typename T>
  T get(const std::string& key) {
    const json& v = raw(key);
    T out = convert<T>(v, child(ptr_, key));
    echo_[key] = v;
    return out;
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) {
      used_.insert(key);
      echo_[key] = fallback;
      return fallback;
    }
    return get<T>(key);
  }

  double positive(const std::string& key) {
    const double v = get<double>(key);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(child(ptr_, key), "must be finite and positive");
    return v;
  }
  double positive(const std::string& key, double fallback) {
    const double v = get<double>(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(child(ptr_, key), "must be finite and positive");
    return v;
  }
  double nonnegative(const std::string& key, double fallback) {
    const double v = get<double>(key, fallback);
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(child(ptr_, key), "must be finite and nonnegative");
    return v;
  }

  Vec2 vec2(const std::string& key) {
    const json& v = raw(key);
    const std::string p = child(ptr_, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(p, "expected [x, y]");
    }
    echo_[key] = v;
    return {v[0].get<double>(), v[1].get<double>()};
  }
  Vec2 vec2(const std::string& key, Vec2 fallback) {
    if (!has(key)) {
      used_.insert(key);
      echo_[key] = {fallback.x, fallback.y};
      return fallback;
    }
    return vec2(key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw ConfigError(child(ptr_, k), "unknown key");
    }
  }

  template <typename T>
  static T convert(const json& v, const std::string& p) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(p, "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(p, "expected a string");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(p, "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(p, "expected a number");
    } else {
      if (!v.is_array()) throw ConfigError(p, "expected an array");
    }
    try {
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(p, e.what());
    }
  }

 private:
  const json& j_;
  std::string ptr_;
  std::set<std::string> used_;
  json echo_ = json::object();
};

std::vector<double> number_list(const json& v, const std::string& p) {
  if (!v.is_array()) throw ConfigError(p, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(child(p, i), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace

std::function<double(double)> ObstacleSpec::function() const {
  const double b = beta;
  const double h = apex_height;
  if (id == "fig-f1") return obstacles::f1;
  if (id == "fig-f2") return [b](double x) { return obstacles::f2(x, b); };
  if (id == "fig-f21") return [](double x) { return obstacles::f2(x, 2.0); };
  if (id == "fig-f22") return [](double x) { return obstacles::f2(x, 0.2); };
  if (id == "fig-f31") return obstacles::f31;
  if (id == "fig-f32") return obstacles::f32;
  if (id == "fig-f41") return obstacles::f41;
  if (id == "fig-f42") return obstacles::f42;
  if (id == "cone") return [b, h](double x) { return obstacles::cone(x, b, h); };
  throw ConfigError("", "unknown obstacle id '" + id + "'");
}

std::string ObstacleSpec::label() const {
  if (id == "fig-f2" || id == "cone") return id + "-beta" + format_number(beta);
  return id;
}

ObstacleSpec parse_obstacle(const json& j, const std::string& pointer) {
  Obj o(j, pointer);
  ObstacleSpec s;
  s.id = o.get<std::string>("id");
  static const std::set<std::string> known = {"fig-f1",  "fig-f2",  "fig-f21", "fig-f22", "fig-f31",
                                              "fig-f32", "fig-f41", "fig-f42", "cone"};
  if (!known.count(s.id)) throw ConfigError(child(pointer, "id"), "unknown obstacle id '" + s.id + "'");
  if (s.id == "fig-f2" || s.id == "cone") s.beta = o.positive("beta");
  if (s.id == "cone") s.apex_height = o.positive("apex_height", 0.75);
  o.finish();
  return s;
}

Shape parse_shape(const json& j, double a, const std::string& pointer) {
  Obj o(j, pointer);
  const std::string type = o.get<std::string>("type");
  Shape out;
  auto parts = [&](const std::string& key) {
    const json& arr = o.raw(key);
    if (!arr.is_array() || arr.empty()) throw ConfigError(child(pointer, key), "expected a nonempty array of shapes");
    std::vector<Shape> ps;
    for (std::size_t i = 0; i < arr.size(); ++i) ps.push_back(parse_shape(arr[i], a, child(child(pointer, key), i)));
    return ps;
  };
  if (type == "everything") {
    out = shapes::Everything{};
  } else if (type == "nothing") {
    out = shapes::Nothing{};
  } else if (type == "ball") {
    out = shapes::Ball{o.vec2("center", {0.0, 0.0}), o.nonnegative("radius", 0.0)};
  } else if (type == "compatible_ball") {
    out = shapes::Ball{o.vec2("center", {0.0, 0.0}), oracle::compatible_ball_radius(2, o.positive("a", a)) *
                                                          o.positive("radius_factor", 1.0)};
  } else if (type == "box") {
    const Vec2 lo = o.vec2("lo"), hi = o.vec2("hi");
    if (!(lo.x <= hi.x && lo.y <= hi.y)) throw ConfigError(pointer, "box needs lo <= hi");
    out = shapes::Box{lo, hi};
  } else if (type == "rounded_polygon") {
    const int n = o.get<int>("n");
    if (n < 3) throw ConfigError(child(pointer, "n"), "polygon needs at least 3 sides");
    out = shapes::RoundedPolygon{n, o.vec2("center", {0.0, 0.0}), o.positive("side"),
                                 o.nonnegative("corner_radius", 0.0), o.get<double>("rotation", 0.0)};
  } else if (type == "compatible_polygon") {
    const int n = o.get<int>("n", 4);
    if (n < 3) throw ConfigError(child(pointer, "n"), "polygon needs at least 3 sides");
    const auto poly = oracle::compatible_rounded_polygon(n, o.positive("a", a));
    out = poly.to_shape(o.vec2("center", {0.0, 0.0}), o.get<double>("rotation", 0.0));
  } else if (type == "cone_epigraph") {
    out = shapes::ConeEpigraph{o.vec2("apex", {0.0, 0.0}), o.positive("slope", 1.0)};
  } else if (type == "half_plane") {
    out = shapes::HalfPlane{o.vec2("point", {0.0, 0.0}), o.vec2("normal", {1.0, 0.0})};
  } else if (type == "needle_complement") {
    const double g = o.positive("gamma");
    if (!(g < 1.0)) throw ConfigError(child(pointer, "gamma"), "gamma must lie in (0, 1)");
    out = shapes::NeedleComplement{g, o.positive("half_width")};
  } else if (type == "graph_region") {
    const ObstacleSpec ob = parse_obstacle(o.raw("obstacle"), child(pointer, "obstacle"));
    out = shapes::GraphRegion{ob.function(), o.positive("cap", 1.0)};
  } else if (type == "union") {
    out = Shape::unite(parts("parts"));
  } else if (type == "intersection") {
    out = Shape::intersect(parts("parts"));
  } else if (type == "complement") {
    out = Shape::complement_of(parse_shape(o.raw("part"), a, child(pointer, "part")));
  } else {
    throw ConfigError(child(pointer, "type"), "unknown shape type '" + type + "'");
  }
  o.finish();
  return out;
}

namespace {

DensityKind density_kind(Obj& o) {
  const std::string d = o.get<std::string>("density", "characteristic");
  if (d == "characteristic") return DensityKind::characteristic;
  if (d == "smoothed") return DensityKind::smoothed;
  throw ConfigError(child(o.ptr(), "density"), "expected 'characteristic' or 'smoothed'");
}

// Mickey configuration: compatible rounded square plus one disc of radius 1/a
// on each listed side, positioned so that the union stays compatible.
Shape mickey_shape(double a, Vec2 c, const std::vector<std::string>& sides, std::size_t count) {
  const auto sq = oracle::compatible_rounded_square(a);
  std::vector<Shape> parts{sq.to_shape(c)};
  const double off = sq.side / 2.0 + oracle::mickey_center_offset(a);
  for (std::size_t i = 0; i < count && i < sides.size(); ++i) {
    Vec2 d{0.0, 0.0};
    if (sides[i] == "top") d = {0.0, off};
    if (sides[i] == "bottom") d = {0.0, -off};
    if (sides[i] == "right") d = {off, 0.0};
    if (sides[i] == "left") d = {-off, 0.0};
    parts.push_back(shapes::Ball{{c.x + d.x, c.y + d.y}, 1.0 / a});
  }
  return Shape::unite(std::move(parts));
}

}  // namespace

std::shared_ptr<const Forcing> build_forcing(const json& spec, double a, const GridSpec& grid,
                                             const std::string& pointer) {
  Obj o(spec, pointer);
  const std::string builder = o.get<std::string>("builder");
  const DensityKind kind = density_kind(o);
  std::shared_ptr<const Forcing> out;

  if (builder == "static-shape") {
    const Shape comp = parse_shape(o.raw("complement"), a, child(pointer, "complement"));
    out = std::make_shared<ShapeForcing>([comp](double) { return comp; }, kind);
  } else if (builder == "schedule") {
    const std::vector<double> times = number_list(o.raw("times"), child(pointer, "times"));
    const json& cs = o.raw("complements");
    if (!cs.is_array() || cs.size() != times.size() || times.empty()) {
      throw ConfigError(child(pointer, "complements"), "expected one shape per schedule time");
    }
    if (times.front() != 0.0) throw ConfigError(child(pointer, "times"), "schedule must start at t = 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) throw ConfigError(child(pointer, "times"), "schedule times must increase");
    }
    std::vector<Shape> shapes;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      shapes.push_back(parse_shape(cs[i], a, child(child(pointer, "complements"), i)));
    }
    out = std::make_shared<ShapeForcing>(
        [times, shapes](double t) {
          std::size_t idx = 0;
          while (idx + 1 < times.size() && times[idx + 1] <= t) ++idx;
          return shapes[idx];
        },
        kind);
  } else if (builder == "needle") {
    const double g = o.positive("gamma");
    if (!(g < 1.0)) throw ConfigError(child(pointer, "gamma"), "gamma must lie in (0, 1)");
    const double hw = o.positive("half_width", 0.6 * grid.h());
    const Shape comp = shapes::NeedleComplement{g, hw};
    out = std::make_shared<ShapeForcing>([comp](double) { return comp; }, kind);
  } else if (builder == "shrinking-balls") {
    const json& cj = o.raw("centers");
    if (!cj.is_array() || cj.empty()) throw ConfigError(child(pointer, "centers"), "expected a nonempty array");
    std::vector<Vec2> centers;
    for (std::size_t i = 0; i < cj.size(); ++i) {
      const auto xy = number_list(cj[i], child(child(pointer, "centers"), i));
      if (xy.size() != 2) throw ConfigError(child(child(pointer, "centers"), i), "expected [x, y]");
      centers.push_back({xy[0], xy[1]});
    }
    const double r0 = o.positive("r0");
    const double rate = o.get<double>("rate", 0.0);
    if (!(rate >= 0.0)) throw ConfigError(child(pointer, "rate"), "a growing radius would shrink F (non-monotone)");
    out = std::make_shared<ShapeForcing>(
        [centers, r0, rate](double t) {
          const double r = std::max(0.0, r0 - rate * t);
          std::vector<Shape> balls;
          for (const auto& c : centers) balls.push_back(shapes::Ball{c, r});
          return Shape::unite(std::move(balls));
        },
        kind);
  } else if (builder == "polygon-complement") {
    const int n = o.get<int>("n");
    if (n < 3) throw ConfigError(child(pointer, "n"), "polygon needs at least 3 sides");
    const Shape comp = shapes::RoundedPolygon{n, o.vec2("center", {0.0, 0.0}), o.positive("side"), 0.0,
                                              o.get<double>("rotation", 0.0)};
    out = std::make_shared<ShapeForcing>([comp](double) { return comp; }, kind);
  } else if (builder == "disc-row") {
    const int M = o.get<int>("M");
    if (M < 1) throw ConfigError(child(pointer, "M"), "M must be at least 1");
    const double r = o.positive("radius", oracle::compatible_ball_radius(2, a));
    const double spacing = o.positive("spacing", 1.0);
    out = std::make_shared<ShapeForcing>(
        [M, r, spacing](double t) {
          const int m = M - static_cast<int>(std::floor(t));
          std::vector<Shape> balls;
          for (int i = 1; i <= m; ++i) balls.push_back(shapes::Ball{{spacing * i, 0.0}, r});
          return balls.empty() ? Shape(shapes::Nothing{}) : Shape::unite(std::move(balls));
        },
        kind);
  } else if (builder == "mickey-sequence") {
    const double aa = o.positive("a", a);
    const Vec2 c = o.vec2("center", {0.0, 0.0});
    std::vector<std::string> sides = o.get<std::vector<std::string>>("sides", {"top", "right"});
    for (std::size_t i = 0; i < sides.size(); ++i) {
      const auto& s = sides[i];
      if (s != "top" && s != "bottom" && s != "left" && s != "right") {
        throw ConfigError(child(child(pointer, "sides"), i), "expected top, bottom, left or right");
      }
    }
    out = std::make_shared<ShapeForcing>(
        [aa, c, sides](double t) {
          const auto removed = static_cast<std::size_t>(std::max(0.0, std::floor(t)));
          const std::size_t count = removed >= sides.size() ? 0 : sides.size() - removed;
          return mickey_shape(aa, c, sides, count);
        },
        kind);
  } else if (builder == "profile-obstacle") {
    const ObstacleSpec ob = parse_obstacle(o.raw("obstacle"), child(pointer, "obstacle"));
    o.echo()["obstacle"] = spec.at("obstacle");
    const Shape comp = shapes::GraphRegion{ob.function(), 1.0};
    out = std::make_shared<ShapeForcing>([comp](double) { return comp; }, kind);
  } else {
    throw ConfigError(child(pointer, "builder"), "unknown forcing builder '" + builder + "'");
  }
  o.finish();
  return out;
}

LoadedConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  Obj root(doc, "");
  LoadedConfig cfg;
  json& echo = root.echo();
  cfg.name = root.get<std::string>("name", "scenario");
  const std::string kind = root.get<std::string>("kind", "grid");
  if (kind != "grid" && kind != "profile") throw ConfigError("/kind", "expected 'grid' or 'profile'");
  cfg.kind = kind == "grid" ? ScenarioKind::grid : ScenarioKind::profile;
  const double a = root.positive("a", 5.0);
  const auto seed = root.get<std::uint64_t>("seed", 0);
  cfg.prescribed = root.get<bool>("prescribed", false);

  {
    const json def = json::object();
    Obj o(root.raw_or("outputs", def), "/outputs");
    cfg.outputs.directory = o.get<std::string>("directory", "out/" + cfg.name);
    cfg.outputs.emit_plots = o.get<bool>("emit_plots", true);
    cfg.outputs.emit_telemetry = o.get<bool>("emit_telemetry", false);
    cfg.outputs.emit_masks = o.get<bool>("emit_masks", true);
    o.finish();
    echo["outputs"] = o.echo();
  }

  if (cfg.kind == ScenarioKind::profile) {
    for (const char* k : {"domain", "time", "mode", "initial", "forcing", "solver", "audit", "sweep"}) {
      if (root.has(k)) throw ConfigError(child("", k), "grid keys are not allowed in a profile scenario");
    }
    Obj p(root.raw("profile"), "/profile");
    cfg.profile.N = p.get<int>("N", 100);
    if (cfg.profile.N < 2) throw ConfigError("/profile/N", "N must be at least 2");
    const json& obs = p.raw("obstacles");
    if (!obs.is_array() || obs.empty()) throw ConfigError("/profile/obstacles", "expected a nonempty array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      cfg.profile.obstacles.push_back(parse_obstacle(obs[i], child("/profile/obstacles", i)));
    }
    p.echo()["obstacles"] = obs;
    const json a_default = json::array({a});
    cfg.profile.a_values = number_list(p.raw_or("a_values", a_default), "/profile/a_values");
    if (cfg.profile.a_values.empty()) throw ConfigError("/profile/a_values", "expected at least one value");
    for (std::size_t i = 0; i < cfg.profile.a_values.size(); ++i) {
      if (!(cfg.profile.a_values[i] > 0.0)) throw ConfigError(child("/profile/a_values", i), "must be positive");
    }
    p.echo()["a_values"] = cfg.profile.a_values;
    cfg.profile.tolerance = p.positive("tolerance", 1e-10);
    cfg.profile.contact_tol = p.positive("contact_tol", 1e-4);
    p.finish();
    echo["profile"] = p.echo();
    root.finish();
    cfg.echo = echo;
    return cfg;
  }

  if (root.has("profile")) throw ConfigError("/profile", "profile keys are not allowed in a grid scenario");
  Scenario& s = cfg.scenario;
  s.name = cfg.name;
  s.a = a;
  s.seed = seed;

  {
    const json def = json::object();
    const json side_def = 6.0, cells_def = 256;
    Obj d(root.raw_or("domain", def), "/domain");
    const Vec2 origin = d.vec2("origin", {-3.0, -3.0});
    const json& side = d.raw_or("side", side_def);
    const json& cells = d.raw_or("cells", cells_def);
    Vec2 side2;
    int cx = 0, cy = 0;
    if (side.is_number()) {
      side2 = {side.get<double>(), side.get<double>()};
    } else if (side.is_array() && side.size() == 2 && side[0].is_number() && side[1].is_number()) {
      side2 = {side[0].get<double>(), side[1].get<double>()};
    } else {
      throw ConfigError("/domain/side", "expected a number or [sx, sy]");
    }
    if (cells.is_number_integer()) {
      cx = cy = cells.get<int>();
    } else if (cells.is_array() && cells.size() == 2 && cells[0].is_number_integer() && cells[1].is_number_integer()) {
      cx = cells[0].get<int>();
      cy = cells[1].get<int>();
    } else {
      throw ConfigError("/domain/cells", "expected an integer or [nx, ny]");
    }
    try {
      s.grid = GridSpec::from_axes(origin, side2, cx, cy);
    } catch (const GridError& e) {
      throw ConfigError("/domain", e.what());
    }
    d.echo()["side"] = s.grid.side();
    d.echo()["cells"] = s.grid.cells();
    d.finish();
    echo["domain"] = d.echo();
  }

  {
    const json def = json::object();
    Obj t(root.raw_or("time", def), "/time");
    if (t.has("partition")) {
      s.partition = number_list(t.raw("partition"), "/time/partition");
      t.echo()["partition"] = s.partition;
    } else {
      const double T = t.positive("T", 1.0);
      const int steps = t.get<int>("steps", 1);
      if (steps < 1) throw ConfigError("/time/steps", "must be at least 1");
      s.partition = uniform_partition(T, steps);
    }
    t.finish();
    echo["time"] = t.echo();
  }

  {
    const json& m = root.raw("mode");
    if (m.is_string()) {
      const std::string name = m.get<std::string>();
      if (name != "brittle") throw ConfigError("/mode", "string mode must be 'brittle'; use {\"type\": \"adhesive\", \"k\": ...}");
      s.mode = Mode::brittle;
      echo["mode"] = {{"type", "brittle"}};
    } else {
      Obj mo(m, "/mode");
      const std::string type = mo.get<std::string>("type");
      if (type == "adhesive") {
        s.mode = Mode::adhesive;
        s.k = mo.positive("k");
      } else if (type == "brittle") {
        s.mode = Mode::brittle;
      } else {
        throw ConfigError("/mode/type", "expected 'adhesive' or 'brittle'");
      }
      mo.finish();
      echo["mode"] = mo.echo();
    }
  }

  {
    const std::string scheme = root.get<std::string>("perimeter_scheme", "isotropic");
    try {
      s.scheme = perimeter_scheme_from_string(scheme);
    } catch (const std::exception& e) {
      throw ConfigError("/perimeter_scheme", e.what());
    }
  }

  {
    const json def = json::object();
    Obj so(root.raw_or("solver", def), "/solver");
    s.solver.max_iterations = so.get<int>("max_iterations", 20000);
    s.solver.tolerance = so.get<double>("tolerance", 1e-6 * s.grid.area());
    s.solver.threshold = so.get<double>("threshold", 0.5);
    s.solver.check_every = so.get<int>("check_every", 20);
    s.solver.sigma = so.get<double>("sigma", SolveParams{}.resolved_sigma(s.grid));
    s.solver.tau = so.get<double>("tau", SolveParams{}.resolved_tau(s.grid));
    s.solver.adaptive_steps = so.get<bool>("adaptive_steps", true);
    if (!(s.solver.tolerance > 0.0)) throw ConfigError("/solver/tolerance", "must be positive");
    if (s.solver.max_iterations < 1) throw ConfigError("/solver/max_iterations", "must be positive");
    if (!(s.solver.threshold > 0.0 && s.solver.threshold < 1.0)) {
      throw ConfigError("/solver/threshold", "must lie in (0, 1)");
    }
    if (!(s.solver.sigma > 0.0) || !(s.solver.tau > 0.0)) throw ConfigError("/solver", "step sizes must be positive");
    try {
      s.solver.validate(s.grid);
    } catch (const SolverConfigError& e) {
      throw ConfigError("/solver", e.what());
    }
    so.finish();
    echo["solver"] = so.echo();
  }

  {
    const json& f = root.raw("forcing");
    s.forcing = build_forcing(f, a, s.grid, "/forcing");
    echo["forcing"] = f;
  }

  {
    Obj in(root.raw("initial"), "/initial");
    s.relax_initial = in.get<bool>("relax", false);
    s.allow_empty_initial = in.get<bool>("allow_empty", false);
    int sources = 0;
    if (in.has("shape")) {
      ++sources;
      s.initial = rasterize(parse_shape(in.raw("shape"), a, "/initial/shape"), s.grid);
      in.echo()["shape"] = doc.at("initial").at("shape");
    }
    if (in.has("mask")) {
      ++sources;
      const std::string rel = in.get<std::string>("mask");
      const std::filesystem::path p = std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel) : base_dir / rel;
      try {
        s.initial = read_mask(p);
      } catch (const std::exception& e) {
        throw ConfigError("/initial/mask", e.what());
      }
      if (s.initial.grid() != s.grid) throw ConfigError("/initial/mask", "mask grid differs from the domain");
    }
    if (in.has("forcing_complement")) {
      ++sources;
      if (in.get<bool>("forcing_complement")) s.initial = s.forcing->complement_set(0.0, s.grid);
    }
    if (in.has("full")) {
      ++sources;
      if (in.get<bool>("full")) s.initial = BinaryField::full(s.grid);
    }
    if (sources != 1) throw ConfigError("/initial", "give exactly one of shape, mask, forcing_complement, full");
    if (s.initial.size() != s.grid.size()) throw ConfigError("/initial", "initial set source is disabled");
    in.finish();
    echo["initial"] = in.echo();
  }

  {
    const json def = json::object();
    Obj au(root.raw_or("audit", def), "/audit");
    s.density_constant = au.positive("density_constant", 0.5);
    s.density_radius = au.positive("density_radius", 1.0 / a);
    cfg.audit.stability = au.get<bool>("stability", true);
    cfg.audit.density = au.get<bool>("density", true);
    cfg.audit.random_competitors = au.get<int>("random_competitors", 64);
    if (cfg.audit.random_competitors < 0) throw ConfigError("/audit/random_competitors", "must be nonnegative");
    const auto shapes = au.get<std::vector<std::string>>("shapes", {});
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      try {
        cfg.audit.shapes.push_back(shape_property_from_string(shapes[i]));
      } catch (const std::exception& e) {
        throw ConfigError(child("/audit/shapes", i), e.what());
      }
    }
    au.finish();
    echo["audit"] = au.echo();
  }

  if (root.has("sweep")) {
    Obj sw(root.raw("sweep"), "/sweep");
    cfg.sweep_ks = number_list(sw.raw("ks"), "/sweep/ks");
    if (cfg.sweep_ks.empty() || !std::is_sorted(cfg.sweep_ks.begin(), cfg.sweep_ks.end())) {
      throw ConfigError("/sweep/ks", "expected an ascending nonempty list");
    }
    for (std::size_t i = 0; i < cfg.sweep_ks.size(); ++i) {
      if (!(cfg.sweep_ks[i] > 0.0)) throw ConfigError(child("/sweep/ks", i), "must be positive");
    }
    sw.echo()["ks"] = cfg.sweep_ks;
    sw.finish();
    echo["sweep"] = sw.echo();
  }

  root.finish();
  try {
    s.validate();
  } catch (const ScenarioError& e) {
    throw ConfigError("", e.what());
  }
  cfg.echo = echo;
  return cfg;
}

LoadedConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("SETEVO_PRESETS")) return env;
  return SETEVO_PRESET_DIR;
}

std::filesystem::path preset_path(const std::string& id) {
  const auto p = preset_directory() / (id + ".json");
  if (!std::filesystem::exists(p)) throw ConfigError("", "unknown preset '" + id + "' (looked in " + p.string() + ")");
  return p;
}

std::vector<std::string> preset_ids() {
  std::vector<std::string> out;
  const auto dir = preset_directory();
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace setevo
