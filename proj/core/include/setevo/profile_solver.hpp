#pragma once

// Symmetric graph profiles |y| <= u(x) over [0, 1] below an obstacle v, and
// the closed-form circular arc near a cone apex.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace setevo {

struct Profile {
  int N = 0;
  std::vector<double> u;
  std::vector<double> v;

  [[nodiscard]] double x(int i) const { return static_cast<double>(i) / N; }
  /// Throws std::invalid_argument unless sizes are N + 1 and 0 <= u <= v.
  void validate(double slack = 0.0) const;
};

/// 2 (u_0 + u_N + sum sqrt((u_i - u_{i-1})^2 + N^-2) + (a/N) sum_{i>=1} (v_i - u_i)).
double profile_objective(const Profile& p, double a);
std::vector<double> profile_gradient(const Profile& p, double a);

struct ProfileSolveParams {
  double tolerance = 1e-10;
  int max_iterations = 1000;
};

class ProfileNotConverged : public std::runtime_error {
 public:
  ProfileNotConverged(const std::string& what, double stationarity);
  double stationarity;
};

struct ProfileSolveResult {
  Profile profile;
  double objective = 0.0;
  /// || u - P(u - grad) ||_inf at the returned point.
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Samples v at x_i = i / N.
std::vector<double> sample_obstacle(const std::function<double(double)>& v, int N);

/// Projected Newton on the box 0 <= u <= v; never throws on non-convergence,
/// the caller inspects `converged`.
ProfileSolveResult solve_profile(const std::vector<double>& v, double a, int N,
                                 const ProfileSolveParams& params = {});

struct ArcParams {
  double beta = 1.0;
  double a = 5.0;
};

/// -(1/a) sqrt(1 - a^2 x^2) + (1/a) sqrt(1 + beta^2) on [0, 1/a].
double analytic_arc(const ArcParams& params, double x);
/// beta / (a sqrt(1 + beta^2)).
double arc_tangency_x(const ArcParams& params);
/// (sqrt(1 + beta^2) - 1) / a.
double arc_y0(const ArcParams& params);

struct CurvatureRun {
  int begin = 0;  // first free sample
  int end = 0;    // one past the last free sample
  double max_deviation = 0.0;
  bool skipped = false;
};

struct CurvatureReport {
  std::vector<CurvatureRun> runs;
  /// max |kappa / a - 1| over scanned samples; +inf if nothing was scanned.
  double max_deviation = 0.0;
  int samples_scanned = 0;
  std::vector<std::string> notices;
};

/// Three-point circle curvature on maximal free runs (v - u > contact_tol),
/// excluding two samples at each run end.
CurvatureReport curvature_scan(const Profile& p, double a, double contact_tol = 1e-4);

/// Curvature through three points; 0 for collinear points.
double menger_curvature(double x0, double y0, double x1, double y1, double x2, double y2);

/// Indices with v_i - u_i <= contact_tol.
std::vector<int> contact_indices(const Profile& p, double contact_tol = 1e-4);
/// Number of contact samples divided by N.
double contact_length(const Profile& p, double contact_tol = 1e-4);
/// min over 0 < i < N of u_i.
double interior_min_height(const Profile& p);
/// Second differences u_{i-1} - 2 u_i + u_{i+1} <= tol for all interior i.
bool is_concave(const std::vector<double>& u, double tol);

namespace obstacles {

/// (x - 1/2)^2 + 1/2.
double f1(double x);
/// 3/4 - beta (x - 1/2)^2.
double f2(double x, double beta);
/// 3/4 - |x - 1/2|.
double f31(double x);
/// 1/4 + |x - 1/2|.
double f32(double x);
/// max(1 - 5 |x - 1/2|, 1/2).
double f41(double x);
/// floor(5x)/5 + 1/5.
double f42(double x);
/// apex_height - beta |x - 1/2|.
double cone(double x, double beta, double apex_height);

}  // namespace obstacles

}  // namespace setevo
