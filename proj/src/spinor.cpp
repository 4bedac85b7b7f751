#include "soliton/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft_util.hpp"
#include "soliton/errors.hpp"
#include "soliton/marchenko.hpp"
#include "soliton/reflectionless.hpp"
#include "soliton/scattering.hpp"

namespace soliton {

namespace {

const cplx I(0.0, 1.0);

using Profile = std::vector<std::array<cplx, 2>>;

// For x < 0 the closed form would cancel growing exponentials; there the profile
// comes from the mirrored data: (φ₂(-x), φ₁(-x)) solves the level equation for U(-x).
Profile closed_form_profile(const SpectralData& data, cplx kappa, const Grid1D& g) {
  const JostField plus = jost_from_data(data, kappa, g);
  Profile out(plus.samples.begin(), plus.samples.end());
  if (g.x0 >= 0.0) return out;
  const Grid1D mg{-g.xmax(), g.dx, g.n};
  const JostField minus = jost_from_data(mirror_data(data), kappa, mg);
  const auto left = [&](std::size_t i) {
    const auto& v = minus.samples[g.n - 1 - i];
    return std::array<cplx, 2>{v[1], v[0]};
  };
  const double pos = std::clamp(-g.x0 / g.dx, 0.0, static_cast<double>(g.n - 1));
  const auto m = static_cast<std::size_t>(std::lround(pos));
  const auto l = left(m);
  const cplx c = (std::conj(l[0]) * out[m][0] + std::conj(l[1]) * out[m][1]) / (std::norm(l[0]) + std::norm(l[1]));
  for (std::size_t i = 0; i < g.n && g.x(i) < 0.0; ++i) {
    const auto v = left(i);
    out[i] = {c * v[0], c * v[1]};
  }
  return out;
}

// φ⁺₁ at a bound state, taken from the Jost solution that decays in the
// direction of integration on each side of the peak.
Profile integrated_profile(const GridPotential& U, cplx kappa) {
  const JostField fp = jost_solve(U, kappa, JostKind::plus_col1);
  const JostField fm = jost_solve(U, kappa, JostKind::minus_col2);
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t i = 0; i < fp.samples.size(); ++i) {
    const double v = std::hypot(std::abs(fp.samples[i][0]), std::abs(fp.samples[i][1])) *
                     std::hypot(std::abs(fm.samples[i][0]), std::abs(fm.samples[i][1]));
    if (std::isfinite(v) && v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const auto& p = fp.samples[best];
  const auto& m = fm.samples[best];
  const cplx mu = (std::conj(p[0]) * m[0] + std::conj(p[1]) * m[1]) / (std::norm(p[0]) + std::norm(p[1]));
  Profile out(fp.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = i >= best ? fp.samples[i] : std::array<cplx, 2>{fm.samples[i][0] / mu, fm.samples[i][1] / mu};
  }
  return out;
}

std::array<cplx, 2> star(const std::array<cplx, 2>& v) { return {std::conj(v[1]), -std::conj(v[0])}; }

void fill(SpinorField& f) {
  const auto& g = f.grid;
  f.psi1.assign(g.size(), 0.0);
  f.psi2.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto v = f.at(i, g.y(j));
      f.psi1[g.index(i, j)] = v[0];
      f.psi2[g.index(i, j)] = v[1];
    }
  }
}

}  // namespace

double CylinderGrid::dy() const { return 2.0 * M_PI / static_cast<double>(ny); }

CylinderGrid CylinderGrid::default_grid() { return {Grid1D::span(-20.0, 20.0, 1024), 256}; }

std::array<cplx, 2> SpinorField::at(std::size_t i, double y) const {
  std::array<cplx, 2> out{0.0, 0.0};
  for (const auto& t : levels) {
    const cplx e = std::exp(t.kappa * y);
    const std::array<cplx, 2> v{t.profile[i][0] * e, t.profile[i][1] * e};
    const auto s = star(v);
    out[0] += t.coeff * v[0] + t.star_coeff * s[0];
    out[1] += t.coeff * v[1] + t.star_coeff * s[1];
  }
  return out;
}

std::vector<cplx> SpinorField::coefficients() const {
  std::vector<cplx> a;
  for (const auto& t : levels) a.push_back(t.coeff);
  for (const auto& t : levels) a.push_back(t.star_coeff);
  return a;
}

std::vector<std::size_t> level_indices(const SpectralData& data, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < data.poles.size(); ++j) {
    if (HalfIntegerLevel::match(data.poles[j], tol)) out.push_back(j);
  }
  return out;
}

int kernel_dimension(const SpectralData& data) { return static_cast<int>(level_indices(data).size()); }

SpinorField build_spinor(const SpectralData& data, const GridPotential& U, const std::vector<cplx>& coeffs,
                         std::size_t ny, const SpinorOptions& opt) {
  if (ny < 4) fail(ErrorKind::parameter, "grid_too_small", "cylinder grid needs at least 4 y nodes");
  std::vector<std::size_t> used;
  if (opt.require_levels) {
    used = level_indices(data);
    if (used.empty()) {
      fail(ErrorKind::validation, "not_a_level",
           "no pole of the form i(2n+1)/2: other poles give neither periodic nor antiperiodic spinors");
    }
  } else {
    for (std::size_t j = 0; j < data.poles.size(); ++j) used.push_back(j);
  }
  const std::size_t L = used.size();
  if (coeffs.size() != 2 * L) {
    std::ostringstream os;
    os << "expected " << 2 * L << " coefficients (2L with L = " << L << "), got " << coeffs.size();
    fail(ErrorKind::parameter, "coefficient_count", os.str());
  }
  if (std::all_of(coeffs.begin(), coeffs.end(), [](cplx c) { return c == 0.0; })) {
    fail(ErrorKind::parameter, "zero_coefficients", "coefficient vector a must be nonzero");
  }
  SpinorField f;
  f.grid = CylinderGrid{U.grid, ny};
  f.potential = U.values;
  for (std::size_t l = 0; l < L; ++l) {
    const cplx kappa = data.poles[used[l]];
    LevelTerm t;
    t.kappa = kappa;
    t.profile = data.reflectionless() ? closed_form_profile(data, kappa, U.grid) : integrated_profile(U, kappa);
    t.coeff = coeffs[l];
    t.star_coeff = coeffs[L + l];
    f.levels.push_back(std::move(t));
  }
  fill(f);
  return f;
}

SpinorField star_transform(const SpinorField& psi) {
  SpinorField out = psi;
  for (std::size_t n = 0; n < psi.psi1.size(); ++n) {
    out.psi1[n] = std::conj(psi.psi2[n]);
    out.psi2[n] = -std::conj(psi.psi1[n]);
  }
  for (auto& t : out.levels) {
    const cplx a = t.coeff, b = t.star_coeff;
    t.coeff = -std::conj(b);
    t.star_coeff = std::conj(a);
  }
  return out;
}

SpinorField rotate_frame(const SpinorField& psi, cplx lambda, cplx mu) {
  if (lambda == 0.0 && mu == 0.0) fail(ErrorKind::parameter, "zero_rotation", "lambda and mu cannot both vanish");
  SpinorField out = psi;
  for (std::size_t n = 0; n < psi.psi1.size(); ++n) {
    out.psi1[n] = lambda * psi.psi1[n] + mu * std::conj(psi.psi2[n]);
    out.psi2[n] = lambda * psi.psi2[n] - mu * std::conj(psi.psi1[n]);
  }
  for (auto& t : out.levels) {
    const cplx a = t.coeff, b = t.star_coeff;
    t.coeff = lambda * a - mu * std::conj(b);
    t.star_coeff = lambda * b + mu * std::conj(a);
  }
  return out;
}

double dirac_residual(const SpinorField& psi) {
  const auto& g = psi.grid;
  const std::size_t nx = g.x.n, ny = g.ny;
  detail::FFT fft(ny);
  std::vector<cplx> row(ny), twist(ny);
  for (std::size_t j = 0; j < ny; ++j) twist[j] = std::exp(-0.5 * I * g.y(j));
  // ∂y of an antiperiodic row: ψ = e^{iy/2} h with h periodic.
  auto dy = [&](const std::vector<cplx>& field, std::size_t i) {
    for (std::size_t j = 0; j < ny; ++j) row[j] = field[g.index(i, j)] * twist[j];
    auto d = detail::periodic_derivative(fft, row.data());
    for (std::size_t j = 0; j < ny; ++j) d[j] = (d[j] + 0.5 * I * row[j]) / twist[j];
    return d;
  };
  double scale = 0.0;
  for (std::size_t n = 0; n < psi.psi1.size(); ++n) {
    scale = std::max({scale, std::abs(psi.psi1[n]), std::abs(psi.psi2[n])});
  }
  std::vector<cplx> col1(nx), col2(nx);
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < nx; ++i) {
    const auto d1y = dy(psi.psi1, i);
    const auto d2y = dy(psi.psi2, i);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t k = i - 3; k <= i + 3; ++k) {
        col1[k] = psi.psi1[g.index(k, j)];
        col2[k] = psi.psi2[g.index(k, j)];
      }
      const cplx d1x = derivative_at(col1, i, g.x.dx);
      const cplx d2x = derivative_at(col2, i, g.x.dx);
      const double u = psi.potential[i];
      const cplx r1 = 0.5 * (d2x - I * d2y[j]) + u * psi.psi1[g.index(i, j)];
      const cplx r2 = -0.5 * (d1x + I * d1y[j]) + u * psi.psi2[g.index(i, j)];
      worst = std::max({worst, std::abs(r1), std::abs(r2)});
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

double antiperiodicity_defect(const SpinorField& psi) {
  const auto& g = psi.grid;
  detail::FFT fft(g.ny);
  std::vector<cplx> row(g.ny);
  double peak = 0.0;
  for (std::size_t n = 0; n < psi.psi1.size(); ++n) peak = std::max(peak, std::norm(psi.psi1[n]) + std::norm(psi.psi2[n]));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    double total = 0.0, high = 0.0;
    for (const auto* field : {&psi.psi1, &psi.psi2}) {
      for (std::size_t j = 0; j < g.ny; ++j) row[j] = (*field)[g.index(i, j)] * std::exp(-0.5 * I * g.y(j));
      const auto F = fft.forward(row);
      for (std::size_t j = 0; j < g.ny; ++j) {
        const double e = std::norm(F[j]);
        total += e;
        if (std::abs(fft.mode(j)) > static_cast<long>(g.ny / 4)) high += e;
      }
    }
    if (total / static_cast<double>(g.ny * g.ny) < 1e-24 * peak) continue;
    worst = std::max(worst, std::sqrt(high / total));
  }
  return worst;
}

Eigen::Matrix3d rho_matrix(cplx l, cplx m) {
  const cplx lb = std::conj(l), mb = std::conj(m);
  Eigen::Matrix3cd r;
  // Signs of the μ-linear entries follow from substituting λψ + μψ* into the
  // Weierstrass integrands.
  r << (l * l + lb * lb + m * m + mb * mb) / 2.0, I * (-l * l + lb * lb + m * m - mb * mb) / 2.0, -I * (lb * mb - l * m),
      I * (l * l - lb * lb + m * m - mb * mb) / 2.0, (l * l + lb * lb - m * m - mb * mb) / 2.0, -(lb * mb + l * m),
      -I * (m * lb - l * mb), l * mb + m * lb, l * lb - m * mb;
  return r.real();
}

Eigen::Matrix3d rho_rotation(cplx lambda, cplx mu) {
  const double n = std::sqrt(std::norm(lambda) + std::norm(mu));
  if (n == 0.0) fail(ErrorKind::parameter, "zero_rotation", "lambda and mu cannot both vanish");
  Eigen::Matrix3d r = rho_matrix(lambda / n, mu / n);
  for (int c = 0; c < 3; ++c) {
    for (int p = 0; p < c; ++p) r.col(c) -= r.col(p).dot(r.col(c)) * r.col(p);
    r.col(c).normalize();
  }
  return r;
}

bool is_revolution(const std::vector<cplx>& coeffs, int L) {
  if (L < 1 || coeffs.size() != 2 * static_cast<std::size_t>(L)) {
    fail(ErrorKind::parameter, "coefficient_count", "coefficient vector must have length 2L");
  }
  int pair = -1;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0.0) continue;
    const int p = static_cast<int>(j) % L;
    if (pair >= 0 && pair != p) return false;
    pair = p;
  }
  return true;
}

PlaneField to_plane(const SpinorField& psi) {
  const auto& g = psi.grid;
  PlaneField p{g, std::vector<cplx>(g.size()), std::vector<cplx>(g.size()), std::vector<cplx>(g.size())};
  for (std::size_t i = 0; i < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      const cplx zp(g.x.x(i), g.y(j));
      const std::size_t n = g.index(i, j);
      p.Z[n] = std::exp(zp);
      p.Psi1[n] = std::exp(-0.5 * zp) * psi.psi1[n];
      p.Psi2[n] = std::exp(-0.5 * std::conj(zp)) * psi.psi2[n];
    }
  }
  return p;
}

double plane_single_valuedness(const SpinorField& psi) {
  const auto& g = psi.grid;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    const double x = g.x.x(i);
    const auto a = psi.at(i, 0.0);
    const auto b = psi.at(i, 2.0 * M_PI);
    const cplx za(x, 0.0), zb(x, 2.0 * M_PI);
    const cplx d1 = std::exp(-0.5 * za) * a[0] - std::exp(-0.5 * zb) * b[0];
    const cplx d2 = std::exp(-0.5 * std::conj(za)) * a[1] - std::exp(-0.5 * std::conj(zb)) * b[1];
    worst = std::max({worst, std::abs(d1), std::abs(d2)});
  }
  return worst;
}

PlaneDecay plane_decay(const SpinorField& psi, double window) {
  const auto& g = psi.grid;
  std::vector<double> vals;
  for (std::size_t i = 0; i < g.x.n; ++i) {
    const double x = g.x.x(i);
    if (x < g.x.xmax() - window) continue;
    double m = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
      const std::size_t n = g.index(i, j);
      m += std::norm(psi.psi1[n]) + std::norm(psi.psi2[n]);
    }
    vals.push_back(std::exp(x) * m / static_cast<double>(g.ny));
  }
  PlaneDecay d;
  if (vals.empty()) return d;
  double sum = 0.0;
  for (double v : vals) sum += v;
  d.c_plus = sum / static_cast<double>(vals.size());
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  d.spread = d.c_plus > 0.0 ? (*hi - *lo) / d.c_plus : 0.0;
  return d;
}

std::vector<cplx> parse_coefficients(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::vector<double> v;
    for (char& c : item) {
      if (c == ',') c = ' ';
    }
    if (!parse_numeric_row(item, v) || v.size() != 2) {
      fail(ErrorKind::parameter, "parse_error", "coefficients must be written as re,im;re,im;...");
    }
    out.emplace_back(v[0], v[1]);
  }
  if (out.empty()) fail(ErrorKind::parameter, "parse_error", "empty coefficient list");
  return out;
}

}  // namespace soliton
