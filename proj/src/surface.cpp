#include "soliton/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "fft_util.hpp"
#include "soliton/errors.hpp"
#include "soliton/simd/kernels.hpp"

namespace soliton {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::size_t nearest(double v, double origin, double step, std::size_t n) {
  const double r = std::round((v - origin) / step);
  return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n - 1)));
}

// ∫ over [x_i, x_{i+1}] of the quintic through six neighbouring samples
// (cubic through four in the first and last two intervals).
double interval_integral(const std::vector<double>& f, std::size_t i, double dx) {
  const std::size_t n = f.size();
  if (n < 4) return 0.5 * dx * (f[i] + f[i + 1]);
  if (i >= 2 && i + 3 < n) {
    return dx * (11.0 * (f[i - 2] + f[i + 3]) - 93.0 * (f[i - 1] + f[i + 2]) + 802.0 * (f[i] + f[i + 1])) / 1440.0;
  }
  if (i == 0) return dx * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
  if (i + 2 >= n) return dx * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]) / 24.0;
  return dx * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
}

// Derivatives of a per-node vector field: along x by differences, along y spectrally.
struct NodeDerivatives {
  std::vector<Vec3> dx, dy;
};

NodeDerivatives differentiate(const CylinderGrid& g, const std::vector<Vec3>& f) {
  const std::size_t nx = g.x.n, ny = g.ny;
  NodeDerivatives out{std::vector<Vec3>(g.size()), std::vector<Vec3>(g.size())};
  std::vector<double> column(nx);
  for (std::size_t j = 0; j < ny; ++j) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < nx; ++i) column[i] = f[g.index(i, j)][c];
      for (std::size_t i = 0; i < nx; ++i) out.dx[g.index(i, j)][c] = derivative_at(column, i, g.x.dx);
    }
  }
  detail::FFT fft(ny);
  std::vector<cplx> row(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    // Two real coordinates per complex transform.
    for (std::size_t j = 0; j < ny; ++j) row[j] = cplx(f[g.index(i, j)][0], f[g.index(i, j)][1]);
    auto d01 = detail::periodic_derivative(fft, row.data());
    for (std::size_t j = 0; j < ny; ++j) row[j] = f[g.index(i, j)][2];
    auto d2 = detail::periodic_derivative(fft, row.data());
    for (std::size_t j = 0; j < ny; ++j) out.dy[g.index(i, j)] = {d01[j].real(), d01[j].imag(), d2[j].real()};
  }
  return out;
}

// ⟨ΔX, n⟩ / (2|X_x|²)-style mean curvature from frame fields and their derivatives.
std::vector<double> geometric_mean_curvature(const CylinderGrid& g, const std::vector<Vec3>& Xx,
                                             const std::vector<Vec3>& Xy, const std::vector<double>& metric) {
  const auto dXx = differentiate(g, Xx);
  const auto dXy = differentiate(g, Xy);
  std::vector<double> H(g.size(), 0.0);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Vec3 n = cross(Xx[p], Xy[p]);
    const double nn = norm(n);
    if (nn == 0.0 || metric[p] == 0.0) continue;
    const Vec3 lap = dXx.dx[p] + dXy.dy[p];
    H[p] = dot(lap, n) / (nn * 2.0 * metric[p]);
  }
  return H;
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

// Exponents c± of mean_y D ~ e^{-c±|x|} fitted over the outer window of each end.
std::pair<double, double> decay_exponents(const ImmersedSurface& s, double window) {
  const auto& g = s.grid;
  std::vector<double> xl, yl, xr, yr;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) m += s.D[g.index(i, j)];
    m /= static_cast<double>(g.ny);
    if (m <= 0.0) continue;
    const double x = g.x.x(i);
    if (x <= g.x.x0 + window) {
      xl.push_back(x);
      yl.push_back(std::log(m));
    }
    if (x >= g.x.xmax() - window) {
      xr.push_back(x);
      yr.push_back(std::log(m));
    }
  }
  return {fitted_slope(xl, yl), -fitted_slope(xr, yr)};
}

double max_pairwise_distance(const ImmersedSurface& s, std::size_t i) {
  const auto& g = s.grid;
  double best = 0.0;
  for (std::size_t a = 0; a < g.ny; ++a) {
    for (std::size_t b = a + 1; b < g.ny; ++b) {
      best = std::max(best, norm(s.points[g.index(i, a)] - s.points[g.index(i, b)]));
    }
  }
  return best;
}

}  // namespace

ImmersedSurface immerse(const SpinorField& psi, double x0, double y0) {
  const auto& g = psi.grid;
  const std::size_t nx = g.x.n, ny = g.ny, n = g.size();
  if (psi.psi1.size() != n || psi.psi2.size() != n) fail(ErrorKind::validation, "shape", "spinor field does not match its grid");
  if (x0 < g.x.x0 || x0 > g.x.xmax()) fail(ErrorKind::parameter, "basepoint", "basepoint outside the x range");

  ImmersedSurface s;
  s.grid = g;
  s.potential = psi.potential;
  s.base_i = nearest(x0, g.x.x0, g.x.dx, nx);
  s.base_j = nearest(std::fmod(std::fmod(y0, kTwoPi) + kTwoPi, kTwoPi), 0.0, g.dy(), ny + 1) % ny;

  std::vector<double> xx(3 * n), xy(3 * n);
  s.D.resize(n);
  simd::weierstrass_frame(psi.psi1.data(), psi.psi2.data(), xx.data(), xy.data(), s.D.data(), n);
  s.Xx.resize(n);
  s.Xy.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    s.Xx[p] = {xx[p], xx[n + p], xx[2 * n + p]};
    s.Xy[p] = {xy[p], xy[n + p], xy[2 * n + p]};
  }

  // Spine: the basepoint column integrated along x.
  std::vector<Vec3> spine(nx, Vec3{0.0, 0.0, 0.0});
  std::vector<double> column(nx);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < nx; ++i) column[i] = s.Xx[g.index(i, s.base_j)][c];
    for (std::size_t i = s.base_i; i + 1 < nx; ++i) {
      spine[i + 1][c] = spine[i][c] + interval_integral(column, i, g.x.dx);
    }
    for (std::size_t i = s.base_i; i > 0; --i) {
      spine[i - 1][c] = spine[i][c] - interval_integral(column, i - 1, g.x.dx);
    }
  }

  // Each circle: spectral antiderivative of X_y plus the secular mean term.
  s.points.assign(n, Vec3{0.0, 0.0, 0.0});
  s.periods.assign(nx, Vec3{0.0, 0.0, 0.0});
  detail::FFT fft(ny);
  std::vector<cplx> row(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    std::array<std::vector<double>, 3> anti;
    for (int c = 0; c < 3; ++c) {
      for (std::size_t j = 0; j < ny; ++j) row[j] = s.Xy[g.index(i, j)][c];
      auto F = fft.forward(row);
      const double mean = F[0].real() / static_cast<double>(ny);
      s.periods[i][c] = kTwoPi * mean;
      F[0] = 0.0;
      for (std::size_t m = 1; m < ny; ++m) {
        F[m] = fft.nyquist(m) ? cplx(0.0) : F[m] / cplx(0.0, static_cast<double>(fft.mode(m)));
      }
      const auto a = fft.inverse(F);
      anti[c].resize(ny);
      for (std::size_t j = 0; j < ny; ++j) anti[c][j] = a[j].real() + mean * g.y(j);
    }
    for (std::size_t j = 0; j < ny; ++j) {
      for (int c = 0; c < 3; ++c) {
        s.points[g.index(i, j)][c] = spine[i][c] + anti[c][j] - anti[c][s.base_j];
      }
    }
  }

  s.H.assign(n, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const auto p = g.index(i, j);
      if (s.D[p] > 0.0) s.H[p] = 2.0 * psi.potential[i] / s.D[p];
    }
  }
  std::vector<double> metric(n);
  for (std::size_t p = 0; p < n; ++p) metric[p] = s.D[p] * s.D[p];
  s.H_geom = geometric_mean_curvature(g, s.Xx, s.Xy, metric);

  s.K.assign(n, 0.0);
  const double dx2 = g.x.dx * g.x.dx, dy2 = g.dy() * g.dy();
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const auto p = g.index(i, j);
      if (s.D[p] <= 0.0) continue;
      const double c = std::log(s.D[p]);
      const double l = std::log(s.D[g.index(i - 1, j)]), r = std::log(s.D[g.index(i + 1, j)]);
      const double d = std::log(s.D[g.index(i, (j + ny - 1) % ny)]), u = std::log(s.D[g.index(i, (j + 1) % ny)]);
      const double lap = (l - 2.0 * c + r) / dx2 + (d - 2.0 * c + u) / dy2;
      s.K[p] = -lap / (s.D[p] * s.D[p]);
    }
  }
  return s;
}

ClosureDiagnostics closure_check(const ImmersedSurface& s, double fit_window) {
  ClosureDiagnostics out;
  for (const auto& p : s.periods) out.period_norm = std::max(out.period_norm, norm(p));
  out.diameter_minus = max_pairwise_distance(s, 0);
  out.diameter_plus = max_pairwise_distance(s, s.grid.x.n - 1);
  std::tie(out.decay_minus, out.decay_plus) = decay_exponents(s, fit_window);
  return out;
}

double willmore_mesh(const ImmersedSurface& s) {
  const auto& g = s.grid;
  double total = 0.0;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    const double w = (i == 0 || i + 1 == g.x.n) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto p = g.index(i, j);
      row += s.H_geom[p] * s.H_geom[p] * s.D[p] * s.D[p];
    }
    total += w * row;
  }
  return total * g.x.dx * g.dy();
}

double willmore_potential(const GridPotential& U) {
  std::vector<double> sq(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) sq[i] = U.values[i] * U.values[i];
  return 8.0 * std::numbers::pi * trapezoid(sq, U.grid.dx);
}

IdentityDefects identity_defects(const ImmersedSurface& s, double region_floor) {
  const auto& g = s.grid;
  const auto d = differentiate(g, s.points);
  const double dmax = *std::max_element(s.D.begin(), s.D.end());
  IdentityDefects out;

  std::vector<double> metric(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) metric[p] = 0.5 * (dot(d.dx[p], d.dx[p]) + dot(d.dy[p], d.dy[p]));
  const auto H = geometric_mean_curvature(g, d.dx, d.dy, metric);

  for (std::size_t i = 3; i + 3 < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto p = g.index(i, j);
      if (s.D[p] < region_floor * dmax) continue;
      const double D2 = s.D[p] * s.D[p];
      const double exx = dot(d.dx[p], d.dx[p]), eyy = dot(d.dy[p], d.dy[p]), exy = dot(d.dx[p], d.dy[p]);
      out.conformal = std::max({out.conformal, std::abs(exy) / D2, std::abs(exx - eyy) / D2});
      out.metric = std::max(out.metric, std::abs(exx - D2) / D2);
      out.mean_curvature = std::max(out.mean_curvature, std::abs(H[p] * s.D[p] - 2.0 * s.potential[i]));
    }
  }
  for (std::size_t i = 1; i + 1 < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto p = g.index(i, j);
      out.gauss_bonnet += s.K[p] * s.D[p] * s.D[p];
    }
  }
  out.gauss_bonnet *= g.x.dx * g.dy();
  return out;
}

BranchReport detect_branch_points(const ImmersedSurface& s, double d_floor, double exponent_tol) {
  const auto& g = s.grid;
  std::vector<double> env(g.size());
  double emax = 0.0;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    const double w = std::exp(std::abs(g.x.x(i)));
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto p = g.index(i, j);
      env[p] = s.D[p] * w;
      emax = std::max(emax, env[p]);
    }
  }
  BranchReport out;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      if (env[g.index(i, j)] < d_floor * emax) out.nodes.emplace_back(i, j);
    }
  }
  const double window = std::min(6.0, 0.25 * (g.x.xmax() - g.x.x0));
  std::tie(out.decay_minus, out.decay_plus) = decay_exponents(s, window);
  out.branch_minus = out.decay_minus > 1.0 + exponent_tol;
  out.branch_plus = out.decay_plus > 1.0 + exponent_tol;
  return out;
}

SphereFit fit_sphere(const std::vector<Vec3>& points) {
  if (points.size() < 4) fail(ErrorKind::parameter, "too_few_points", "sphere fit needs at least 4 points");
  // |X|² = 2 c·X + d, r² = d + |c|².
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector4d row(2.0 * p[0], 2.0 * p[1], 2.0 * p[2], 1.0);
    A += row * row.transpose();
    rhs += row * dot(p, p);
  }
  const Eigen::Vector4d sol = A.ldlt().solve(rhs);
  SphereFit fit;
  fit.center = {sol[0], sol[1], sol[2]};
  const double r2 = sol[3] + dot(fit.center, fit.center);
  if (!(r2 > 0.0)) fail(ErrorKind::numerical, "sphere_fit", "points do not determine a sphere");
  fit.radius = std::sqrt(r2);
  for (const auto& p : points) {
    fit.residual = std::max(fit.residual, std::abs(norm(p - fit.center) - fit.radius) / fit.radius);
  }
  return fit;
}

double revolution_defect(const ImmersedSurface& s) {
  const auto& g = s.grid;
  std::vector<Vec3> centroids(g.x.n, Vec3{0.0, 0.0, 0.0});
  Vec3 mean{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) centroids[i] = centroids[i] + s.points[g.index(i, j)];
    centroids[i] = (1.0 / static_cast<double>(g.ny)) * centroids[i];
    mean = mean + centroids[i];
  }
  mean = (1.0 / static_cast<double>(g.x.n)) * mean;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& c : centroids) {
    const Eigen::Vector3d v(c[0] - mean[0], c[1] - mean[1], c[2] - mean[2]);
    cov += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d ax = eig.eigenvectors().col(2);
  const Vec3 axis{ax[0], ax[1], ax[2]};

  double worst = 0.0;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    double lo = INFINITY, hi = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
      const Vec3 v = s.points[g.index(i, j)] - mean;
      const double r = norm(v - dot(v, axis) * axis);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

SpinorRecovery spinor_from_immersion(const ImmersedSurface& s) {
  const auto& g = s.grid;
  const std::size_t n = g.size();
  const auto d = differentiate(g, s.points);

  double scale = 0.0, extent = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    scale = std::max({scale, norm(d.dx[p]), norm(d.dy[p])});
    extent = std::max(extent, norm(s.points[p] - s.points[0]));
  }
  if (!(scale > 1e-12) || extent == 0.0) {
    fail(ErrorKind::validation, "not_immersed", "surface is degenerate: X is constant");
  }

  SpinorRecovery out;
  out.field.grid = g;
  out.field.psi1.resize(n);
  out.field.psi2.resize(n);
  out.flagged.assign(n, false);

  // ∂Φ = ½(Φ_x - iΦ_y), Φ = X² + iX¹.
  auto take_root = [](cplx w, cplx prev) {
    const cplx r = std::sqrt(w);
    return std::abs(r - prev) <= std::abs(r + prev) ? r : -r;
  };
  cplx prev1_col = 1.0, prev2_col = 1.0;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    cplx prev1 = prev1_col, prev2 = prev2_col;
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto p = g.index(i, j);
      const cplx phix(d.dx[p][1], d.dx[p][0]), phiy(d.dy[p][1], d.dy[p][0]);
      const cplx del = 0.5 * (phix - cplx(0.0, 1.0) * phiy);
      const cplx delbar = 0.5 * (phix + cplx(0.0, 1.0) * phiy);
      prev1 = out.field.psi1[p] = take_root(-del, prev1);
      prev2 = out.field.psi2[p] = take_root(delbar, prev2);
      if (j == 0) {
        prev1_col = prev1;
        prev2_col = prev2;
      }
      const Vec3 dz{0.5 * d.dx[p][2], -0.5 * d.dy[p][2], 0.0};
      if (std::hypot(dz[0], dz[1]) < 1e-6 * norm(d.dx[p])) out.flagged[p] = true;
    }
  }

  std::vector<double> metric(n);
  for (std::size_t p = 0; p < n; ++p) metric[p] = 0.5 * (dot(d.dx[p], d.dx[p]) + dot(d.dy[p], d.dy[p]));
  const auto H = geometric_mean_curvature(g, d.dx, d.dy, metric);
  out.potential.resize(n);
  out.field.potential.assign(g.x.n, 0.0);
  for (std::size_t i = 0; i < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto p = g.index(i, j);
      out.potential[p] = 0.5 * H[p] * std::sqrt(metric[p]);
      out.field.potential[i] += out.potential[p] / static_cast<double>(g.ny);
    }
  }
  return out;
}

}  // namespace soliton
