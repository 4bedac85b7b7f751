#include "soliton/marchenko.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

const cplx I(0.0, 1.0);
constexpr double kImagTol = 1e-10;

double taper(double k, double kmax) {
  const double k0 = 0.9 * kmax;
  const double a = std::abs(k);
  if (a <= k0) return 1.0;
  if (a >= kmax) return 0.0;
  return 0.5 * (1.0 + std::cos(M_PI * (a - k0) / (kmax - k0)));
}

void gauss_panels(double a, double span, double width, std::vector<double>& nodes, std::vector<double>& weights) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto& xs = Rule::abscissa();
  const auto& ws = Rule::weights();
  const int panels = std::max(1, static_cast<int>(std::ceil(span / width)));
  const double h = span / panels;
  nodes.clear();
  weights.clear();
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      nodes.push_back(mid - 0.5 * h * xs[j]);
      weights.push_back(0.5 * h * ws[j]);
      nodes.push_back(mid + 0.5 * h * xs[j]);
      weights.push_back(0.5 * h * ws[j]);
    }
  }
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return nodes[l] < nodes[r]; });
  std::vector<double> n2, w2;
  for (auto i : order) {
    n2.push_back(nodes[i]);
    w2.push_back(weights[i]);
  }
  nodes.swap(n2);
  weights.swap(w2);
}

}  // namespace

double MarchenkoKernel::discrete_part(double z) const {
  cplx s = 0.0;
  for (std::size_t j = 0; j < poles_.size(); ++j) s -= normings_[j] * std::exp(I * poles_[j] * z);
  return s.real();
}

double MarchenkoKernel::reflection_part(double z) const {
  if (r_.empty() || z > z_grid_.xmax()) return 0.0;
  if (z < z_grid_.x0) {
    std::ostringstream os;
    os << "kernel evaluated at z = " << z << " left of its grid start " << z_grid_.x0;
    fail(ErrorKind::parameter, "z_range", os.str());
  }
  return (*spline_)(z);
}

double MarchenkoKernel::omega(double z) const { return discrete_part(z) + reflection_part(z); }

std::vector<double> MarchenkoKernel::omega_samples() const {
  std::vector<double> out(z_grid_.n);
  for (std::size_t i = 0; i < z_grid_.n; ++i) out[i] = omega(z_grid_.x(i));
  return out;
}

Grid1D kernel_grid_for(double xmin, double xmax, double span, double dz) {
  const double z0 = std::min(0.0, 2.0 * xmin) - 1.0;
  const double z1 = 2.0 * std::max(std::abs(xmin), std::abs(xmax)) + 2.0 * span + 1.0;
  const auto n = static_cast<std::size_t>(std::ceil((z1 - z0) / dz)) + 1;
  return Grid1D{z0, dz, n};
}

struct KernelBuilder {
  static MarchenkoKernel one_side(const SpectralData& data, const Grid1D& z_grid);
  static void attach_mirror(MarchenkoKernel& K, MarchenkoKernel mirror) {
    K.mirror_ = std::make_shared<const MarchenkoKernel>(std::move(mirror));
  }
};

namespace {

bool uniform(const std::vector<double>& k) {
  const double dk = (k.back() - k.front()) / static_cast<double>(k.size() - 1);
  for (std::size_t j = 1; j < k.size(); ++j) {
    if (std::abs(k[j] - k[j - 1] - dk) > 1e-9 * dk) return false;
  }
  return true;
}

// (1/2πi) ∫ f(s)/(s - k) ds by trapezoid, for k off the real axis.
cplx cauchy_integral(const ReflectionTable& tab, const std::vector<double>& f, cplx k) {
  cplx s = 0.0;
  const std::size_t m = tab.k.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double lo = j > 0 ? tab.k[j] - tab.k[j - 1] : tab.k[1] - tab.k[0];
    const double hi = j + 1 < m ? tab.k[j + 1] - tab.k[j] : tab.k[m - 1] - tab.k[m - 2];
    s += 0.5 * (lo + hi) * f[j] / (tab.k[j] - k);
  }
  return s / (2.0 * M_PI * I);
}

std::vector<double> log_one_minus_b2(const ReflectionTable& tab) {
  std::vector<double> f(tab.k.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = -std::log1p(std::norm(tab.R[j]));
  return f;
}

}  // namespace

cplx transmission_inverse_from_data(const SpectralData& data, cplx k) {
  cplx a = 1.0;
  for (const auto& kap : data.poles) a *= (k - kap) / (k - std::conj(kap));
  if (data.reflection && data.reflection->k.size() >= 2) {
    a *= std::exp(cauchy_integral(*data.reflection, log_one_minus_b2(*data.reflection), k));
  }
  return a;
}

SpectralData mirror_data(const SpectralData& data) {
  if (data.poles.size() != data.normings.size()) {
    fail(ErrorKind::parameter, "structural", "poles and normings differ in length");
  }
  SpectralData out;
  out.poles = data.poles;
  std::vector<double> f;
  if (data.reflection && data.reflection->k.size() >= 2) f = log_one_minus_b2(*data.reflection);
  for (std::size_t j = 0; j < data.poles.size(); ++j) {
    const cplx kj = data.poles[j];
    cplx da = 1.0 / (kj - std::conj(kj));
    for (std::size_t l = 0; l < data.poles.size(); ++l) {
      if (l != j) da *= (kj - data.poles[l]) / (kj - std::conj(data.poles[l]));
    }
    if (!f.empty()) da *= std::exp(cauchy_integral(*data.reflection, f, kj));
    const cplx gamma = 1.0 / da;
    out.normings.push_back(-gamma * gamma / data.normings[j]);
  }
  if (data.reflection) {
    const auto& tab = *data.reflection;
    const std::size_t m = tab.k.size();
    ReflectionTable t{tab.k, std::vector<cplx>(m)};
    if (m >= 2) {
      if (!uniform(tab.k)) {
        fail(ErrorKind::parameter, "reflection_grid", "mirrored data need a uniformly spaced reflection table");
      }
      const double dk = tab.k[1] - tab.k[0];
      for (std::size_t i = 0; i < m; ++i) {
        // Boundary value of the Cauchy integral: f/2 plus a principal value,
        // the latter by the alternate-point rule on the uniform grid.
        double pv = 0.0;
        for (std::size_t n = (i + 1) % 2; n < m; n += 2) {
          if (n != i) pv += f[n] / (tab.k[n] - tab.k[i]);
        }
        pv *= 2.0 * dk;
        const double phase_chi = -pv / (2.0 * M_PI);  // Im of the boundary value
        double phase = phase_chi;
        for (const auto& kap : data.poles) phase += std::arg((tab.k[i] - kap) / (tab.k[i] - std::conj(kap)));
        // conj(b)/a = conj(R) conj(a)/a = conj(R) e^{-2i arg a}
        t.R[i] = std::conj(tab.R[i]) * std::exp(-2.0 * I * phase);
      }
    }
    out.reflection = t;
  }
  return out;
}

MarchenkoKernel build_kernel(const SpectralData& data, const Grid1D& z_grid) {
  MarchenkoKernel K = KernelBuilder::one_side(data, z_grid);
  KernelBuilder::attach_mirror(K, KernelBuilder::one_side(mirror_data(data), z_grid));
  return K;
}

MarchenkoKernel KernelBuilder::one_side(const SpectralData& data, const Grid1D& z_grid) {
  if (data.poles.size() != data.normings.size()) {
    fail(ErrorKind::parameter, "structural", "poles and normings differ in length");
  }
  if (z_grid.n < 8) fail(ErrorKind::parameter, "z_range", "kernel z grid needs at least 8 nodes");
  MarchenkoKernel K;
  K.poles_ = data.poles;
  K.normings_ = data.normings;
  K.z_grid_ = z_grid;

  double worst_imag = 0.0;
  std::vector<cplx> r(z_grid.n, 0.0);
  if (data.reflection && !data.reflection->k.empty()) {
    const auto& tab = *data.reflection;
    const std::size_t m = tab.k.size();
    if (m < 4) fail(ErrorKind::parameter, "reflection_resolution", "reflection table needs at least 4 samples");
    double dk_max = 0.0;
    for (std::size_t j = 1; j < m; ++j) dk_max = std::max(dk_max, tab.k[j] - tab.k[j - 1]);
    const double zabs = std::max(std::abs(z_grid.x0), std::abs(z_grid.xmax()));
    if (M_PI / dk_max < zabs) {
      std::ostringstream os;
      os << "reflection table spacing " << dk_max << " aliases within |z| <= " << zabs << " (need dk <= "
         << M_PI / zabs << ")";
      fail(ErrorKind::parameter, "reflection_resolution", os.str());
    }
    const double kmax = std::max(std::abs(tab.k.front()), std::abs(tab.k.back()));
    std::vector<cplx> wR(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double lo = j > 0 ? tab.k[j] - tab.k[j - 1] : tab.k[1] - tab.k[0];
      const double hi = j + 1 < m ? tab.k[j + 1] - tab.k[j] : tab.k[m - 1] - tab.k[m - 2];
      wR[j] = tab.R[j] * (0.5 * (lo + hi)) * taper(tab.k[j], kmax) / (2.0 * M_PI);
    }
    for (std::size_t i = 0; i < z_grid.n; ++i) {
      const double z = z_grid.x(i);
      cplx s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += wR[j] * std::exp(I * tab.k[j] * z);
      r[i] = s;
    }
    K.r_.resize(z_grid.n);
    for (std::size_t i = 0; i < z_grid.n; ++i) K.r_[i] = r[i].real();
    auto spline = std::make_shared<boost::math::interpolators::cardinal_quintic_b_spline<double>>(
        K.r_, z_grid.x0, z_grid.dx);
    K.spline_ = std::make_shared<const std::function<double(double)>>([spline](double z) { return (*spline)(z); });
  }
  for (std::size_t i = 0; i < z_grid.n; ++i) {
    const double z = z_grid.x(i);
    cplx s = r[i];
    for (std::size_t j = 0; j < data.poles.size(); ++j) s -= data.normings[j] * std::exp(I * data.poles[j] * z);
    if (std::isfinite(std::abs(s))) worst_imag = std::max(worst_imag, std::abs(s.imag()) / std::max(1.0, std::abs(s)));
  }
  K.imag_residual_ = worst_imag;
  if (worst_imag > kImagTol) {
    std::ostringstream os;
    os << "Marchenko kernel is not real: max |Im Omega| = " << worst_imag << " (reality conditions violated)";
    fail(ErrorKind::validation, "kernel_not_real", os.str());
  }
  return K;
}

double MarchenkoRow::B1(const MarchenkoKernel& K, double y) const {
  double s = K.omega(x + y);
  for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * b2[j] * K.omega(nodes[j] + y);
  return s;
}

double MarchenkoRow::B2(const MarchenkoKernel& K, double y) const {
  double s = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) s -= weights[j] * b1[j] * K.omega(nodes[j] + y);
  return s;
}

MarchenkoRow solve_marchenko(const MarchenkoKernel& K, double x, const MarchenkoOptions& opt) {
  if (!(opt.span > 0.0) || !(opt.panel_width > 0.0)) {
    fail(ErrorKind::parameter, "marchenko_options", "span and panel width must be positive");
  }
  if (K.has_reflection() && 2.0 * x < K.z_grid().x0) {
    fail(ErrorKind::parameter, "z_range", "x lies left of the range covered by the kernel grid");
  }
  MarchenkoRow row;
  row.x = x;
  gauss_panels(x, opt.span, opt.panel_width, row.nodes, row.weights);
  const auto n = static_cast<Eigen::Index>(row.nodes.size());

  // Symmetrized Nyström matrix Kt = W^{1/2} [Ω(y_i + y_j)] W^{1/2}. The
  // coupled real system for c = W^{1/2} b is equivalent to the complex one
  // (I + i Kt)(c1 + i c2) = W^{1/2} Ω(x + y).
  Eigen::MatrixXd Kt(n, n);
  Eigen::VectorXd sw(n), f(n);
  for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(row.weights[i]);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = sw(i) * sw(j) * K.omega(row.nodes[i] + row.nodes[j]);
      Kt(i, j) = v;
      Kt(j, i) = v;
    }
    f(i) = sw(i) * K.omega(x + row.nodes[i]);
  }
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) + I * Kt.cast<cplx>();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  row.condition = 1.0 / lu.rcond();
  if (!(row.condition <= opt.cond_max)) {
    std::ostringstream os;
    os << "Marchenko system at x = " << x << " has condition estimate " << row.condition << " > " << opt.cond_max;
    fail(ErrorKind::numerical, "ill_posed", os.str());
  }
  const Eigen::VectorXcd zc = lu.solve(f.cast<cplx>());
  const Eigen::VectorXd c1 = zc.real(), c2 = zc.imag();
  row.b1.resize(n);
  row.b2.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.b1[i] = c1(i) / sw(i);
    row.b2[i] = c2(i) / sw(i);
  }
  // Residual of the unsymmetrized discrete equations.
  const Eigen::VectorXd r1 = c2 + Kt * c1;
  const Eigen::VectorXd r2 = f - c1 + Kt * c2;
  double res = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) res = std::max({res, std::abs(r1(i) / sw(i)), std::abs(r2(i) / sw(i))});
  row.residual = res;
  return row;
}

GridPotential recover_potential(const MarchenkoKernel& K, const Grid1D& grid, const MarchenkoOptions& opt,
                                RecoveryStats* stats) {
  GridPotential U{grid, std::vector<double>(grid.n)};
  RecoveryStats st;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const MarchenkoKernel& side = x >= 0.0 || !K.mirror() ? K : *K.mirror();
    const double xs = x >= 0.0 ? x : -x;
    const MarchenkoRow row = solve_marchenko(side, xs, opt);
    U.values[i] = -row.B1(side, xs);
    st.max_condition = std::max(st.max_condition, row.condition);
    st.max_residual = std::max(st.max_residual, row.residual);
  }
  if (stats) *stats = st;
  return U;
}

GoursatPair goursat_pair(const MarchenkoKernel& K, const Grid1D& grid, std::size_t m_count,
                         const MarchenkoOptions& opt) {
  GoursatPair p{grid, m_count, std::vector<double>(grid.n * m_count), std::vector<double>(grid.n * m_count)};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const MarchenkoRow row = solve_marchenko(K, grid.x(i), opt);
    for (std::size_t m = 0; m < m_count; ++m) {
      const double y = grid.x(i) + static_cast<double>(m) * grid.dx;
      p.B1[i * m_count + m] = row.B1(K, y);
      p.B2[i * m_count + m] = row.B2(K, y);
    }
  }
  return p;
}

GoursatResiduals goursat_residual(const GoursatPair& p, const GridPotential& U) {
  if (p.grid.n < 5 || p.m_count < 5) {
    fail(ErrorKind::parameter, "grid_too_coarse", "Goursat residuals need at least 5 nodes per direction");
  }
  if (!U.grid.same_as(p.grid)) fail(ErrorKind::parameter, "grid_mismatch", "potential and Goursat grids differ");
  const double h = p.grid.dx;
  GoursatResiduals r;
  for (std::size_t i = 1; i + 1 < p.grid.n; ++i) {
    const double u = U.values[i];
    for (std::size_t m = 1; m + 1 < p.m_count; ++m) {
      const double b1y = (p.b1(i, m + 1) - p.b1(i, m - 1)) / (2.0 * h);
      const double b1x = (p.b1(i + 1, m - 1) - p.b1(i - 1, m + 1)) / (2.0 * h);
      const double b2y = (p.b2(i, m + 1) - p.b2(i, m - 1)) / (2.0 * h);
      const double b2x = (p.b2(i + 1, m - 1) - p.b2(i - 1, m + 1)) / (2.0 * h);
      r.r18 = std::max(r.r18, std::abs(b1y - b1x + 2.0 * u * p.b2(i, m)));
      r.r20 = std::max(r.r20, std::abs(b2x + b2y + 2.0 * u * p.b1(i, m)));
    }
    const double d = (p.b2(i + 1, 0) - p.b2(i - 1, 0)) / (2.0 * h);
    r.r21 = std::max(r.r21, std::abs(d - 2.0 * u * u));
  }
  return r;
}

double energy_identity_defect(const MarchenkoKernel& K, const GridPotential& U, const MarchenkoOptions& opt) {
  std::vector<double> u2(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) u2[i] = 2.0 * U.values[i] * U.values[i];
  const double lhs = trapezoid(u2, U.grid.dx);
  const double x0 = U.grid.x0, x1 = U.grid.xmax();
  const auto b2 = [&](const MarchenkoKernel& side, double x) { return solve_marchenko(side, x, opt).B2(side, x); };
  double rhs = 0.0;
  if (x0 >= 0.0 || !K.mirror()) {
    rhs = b2(K, x1) - b2(K, x0);
  } else {
    // Left of the origin the mirrored kernel is the well-conditioned one; its B2
    // integrates U(-x)² from the mirrored point.
    const double a = std::min(x1, 0.0);
    rhs = b2(*K.mirror(), -x0) - b2(*K.mirror(), -a);
    if (x1 > 0.0) rhs += b2(K, x1) - b2(K, 0.0);
  }
  return std::abs(lhs - rhs);
}

}  // namespace soliton
