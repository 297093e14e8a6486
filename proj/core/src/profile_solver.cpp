#include "setevo/profile_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace setevo {

void Profile::validate(double slack) const {
  if (N < 1) throw std::invalid_argument("profile needs N >= 1");
  const auto n = static_cast<std::size_t>(N) + 1;
  if (u.size() != n || v.size() != n) throw std::invalid_argument("profile arrays must have N + 1 entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v[i] >= 0.0)) throw std::invalid_argument("obstacle must be nonnegative at sample " + std::to_string(i));
    if (u[i] < -slack || u[i] > v[i] + slack) {
      throw std::invalid_argument("profile violates 0 <= u <= v at sample " + std::to_string(i));
    }
  }
}

double profile_objective(const Profile& p, double a) {
  p.validate(1e-12);
  const double dx = 1.0 / p.N;
  double s = p.u.front() + p.u.back();
  for (int i = 1; i <= p.N; ++i) {
    const double d = p.u[i] - p.u[i - 1];
    s += std::sqrt(d * d + dx * dx) + a * dx * (p.v[i] - p.u[i]);
  }
  return 2.0 * s;
}

std::vector<double> profile_gradient(const Profile& p, double a) {
  const double dx = 1.0 / p.N;
  std::vector<double> g(p.u.size(), 0.0);
  g.front() += 2.0;
  g.back() += 2.0;
  for (int i = 1; i <= p.N; ++i) {
    const double d = p.u[i] - p.u[i - 1];
    const double t = d / std::sqrt(d * d + dx * dx);
    g[i] += 2.0 * (t - a * dx);
    g[i - 1] -= 2.0 * t;
  }
  return g;
}

ProfileNotConverged::ProfileNotConverged(const std::string& what, double r)
    : std::runtime_error(what), stationarity(r) {}

std::vector<double> sample_obstacle(const std::function<double(double)>& v, int N) {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  std::vector<double> out(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) out[i] = v(static_cast<double>(i) / N);
  return out;
}

namespace {

double stationarity(const Profile& p, const std::vector<double>& g) {
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    r = std::max(r, std::abs(p.u[i] - std::clamp(p.u[i] - g[i], 0.0, p.v[i])));
  }
  return r;
}

// Solves a tridiagonal system in place; lower[i] couples i and i - 1.
void thomas(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
            std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

ProfileSolveResult solve_profile(const std::vector<double>& v, double a, int N, const ProfileSolveParams& params) {
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (!(params.tolerance > 0.0)) throw std::invalid_argument("profile tolerance must be positive");
  ProfileSolveResult res;
  Profile& p = res.profile;
  p.N = N;
  p.v = v;
  p.u.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) p.u[i] = 0.5 * v[i];
  p.validate();

  const std::size_t n = v.size();
  const double dx = 1.0 / N;
  const double lipschitz = 8.0 * N;
  std::vector<double> lower(n), diag(n), upper(n), step(n), trial(n);
  double f = profile_objective(p, a);

  for (int it = 0; it < params.max_iterations; ++it) {
    const std::vector<double> g = profile_gradient(p, a);
    const double r = stationarity(p, g);
    res.stationarity = r;
    res.iterations = it;
    if (r <= params.tolerance) {
      res.converged = true;
      break;
    }
    const double eps = std::min(1e-6, r);
    std::vector<bool> active(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      active[i] = (p.u[i] <= eps && g[i] > 0.0) || (p.u[i] >= p.v[i] - eps && g[i] < 0.0) || p.v[i] == 0.0;
    }
    std::fill(lower.begin(), lower.end(), 0.0);
    std::fill(upper.begin(), upper.end(), 0.0);
    std::fill(diag.begin(), diag.end(), 1e-12 + 1e-8 * r);
    for (int i = 1; i <= N; ++i) {
      const double d = p.u[i] - p.u[i - 1];
      const double s = std::sqrt(d * d + dx * dx);
      const double w = 2.0 * dx * dx / (s * s * s);
      diag[i] += w;
      diag[i - 1] += w;
      if (!active[i] && !active[i - 1]) {
        lower[i] = -w;
        upper[i - 1] = -w;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      step[i] = -g[i];
      if (active[i]) diag[i] = 1.0;
    }
    thomas(lower, diag, upper, step);

    auto try_direction = [&](const std::vector<double>& dir, double alpha0) {
      for (double alpha = alpha0; alpha > 1e-14 * alpha0; alpha *= 0.5) {
        double descent = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          trial[i] = std::clamp(p.u[i] + alpha * dir[i], 0.0, p.v[i]);
          descent += g[i] * (trial[i] - p.u[i]);
        }
        if (!(descent < 0.0)) continue;
        Profile q{N, trial, p.v};
        const double ft = profile_objective(q, a);
        if (ft <= f + 1e-4 * descent + 1e-15 * std::abs(f)) {
          p.u = trial;
          f = ft;
          return true;
        }
      }
      return false;
    };

    if (!try_direction(step, 1.0)) {
      std::vector<double> neg(n);
      for (std::size_t i = 0; i < n; ++i) neg[i] = -g[i];
      if (!try_direction(neg, 1.0 / lipschitz)) break;
    }
  }
  if (!res.converged) {
    const std::vector<double> g = profile_gradient(p, a);
    res.stationarity = stationarity(p, g);
    res.converged = res.stationarity <= params.tolerance;
  }
  res.objective = profile_objective(p, a);
  return res;
}

double analytic_arc(const ArcParams& params, double x) {
  if (!(params.a > 0.0) || !(params.beta > 0.0)) throw std::invalid_argument("beta and a must be positive");
  if (x < 0.0 || x > 1.0 / params.a) throw std::invalid_argument("x must lie in [0, 1/a]");
  const double ax = params.a * x;
  return (-std::sqrt(std::max(0.0, 1.0 - ax * ax)) + std::sqrt(1.0 + params.beta * params.beta)) / params.a;
}

double arc_tangency_x(const ArcParams& params) {
  return params.beta / (params.a * std::sqrt(1.0 + params.beta * params.beta));
}

double arc_y0(const ArcParams& params) {
  return (std::sqrt(1.0 + params.beta * params.beta) - 1.0) / params.a;
}

double menger_curvature(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double cross = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0);
  const double d01 = std::hypot(x1 - x0, y1 - y0);
  const double d12 = std::hypot(x2 - x1, y2 - y1);
  const double d02 = std::hypot(x2 - x0, y2 - y0);
  const double den = d01 * d12 * d02;
  return den > 0.0 ? 2.0 * std::abs(cross) / den : 0.0;
}

CurvatureReport curvature_scan(const Profile& p, double a, double contact_tol) {
  p.validate(1e-12);
  CurvatureReport rep;
  const int n = p.N + 1;
  int i = 0;
  while (i < n) {
    if (p.v[i] - p.u[i] <= contact_tol) {
      ++i;
      continue;
    }
    CurvatureRun run;
    run.begin = i;
    while (i < n && p.v[i] - p.u[i] > contact_tol) ++i;
    run.end = i;
    if (run.end - run.begin < 5) {
      run.skipped = true;
      rep.notices.push_back("free run [" + std::to_string(run.begin) + ", " + std::to_string(run.end) +
                            ") shorter than 5 samples skipped");
    } else {
      for (int k = run.begin + 2; k < run.end - 2; ++k) {
        const double kappa =
            menger_curvature(p.x(k - 1), p.u[k - 1], p.x(k), p.u[k], p.x(k + 1), p.u[k + 1]);
        const double dev = std::abs(kappa / a - 1.0);
        run.max_deviation = std::max(run.max_deviation, dev);
        ++rep.samples_scanned;
      }
      rep.max_deviation = std::max(rep.max_deviation, run.max_deviation);
    }
    rep.runs.push_back(run);
  }
  if (rep.samples_scanned == 0) rep.max_deviation = std::numeric_limits<double>::infinity();
  return rep;
}

std::vector<int> contact_indices(const Profile& p, double contact_tol) {
  std::vector<int> out;
  for (int i = 0; i <= p.N; ++i) {
    if (p.v[i] - p.u[i] <= contact_tol) out.push_back(i);
  }
  return out;
}

double contact_length(const Profile& p, double contact_tol) {
  return static_cast<double>(contact_indices(p, contact_tol).size()) / p.N;
}

double interior_min_height(const Profile& p) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 1; i < p.N; ++i) m = std::min(m, p.u[i]);
  return m;
}

bool is_concave(const std::vector<double>& u, double tol) {
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    if (u[i - 1] - 2.0 * u[i] + u[i + 1] > tol) return false;
  }
  return true;
}

namespace obstacles {

double f1(double x) { return (x - 0.5) * (x - 0.5) + 0.5; }
double f2(double x, double beta) { return 0.75 - beta * (x - 0.5) * (x - 0.5); }
double f31(double x) { return 0.75 - std::abs(x - 0.5); }
double f32(double x) { return 0.25 + std::abs(x - 0.5); }
double f41(double x) { return std::max(1.0 - 5.0 * std::abs(x - 0.5), 0.5); }
double f42(double x) { return std::floor(5.0 * x + 1e-12) / 5.0 + 0.2; }
double cone(double x, double beta, double apex_height) { return apex_height - beta * std::abs(x - 0.5); }

}  // namespace obstacles

}  // namespace setevo
