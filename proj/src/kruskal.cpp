#include "soliton/kruskal.hpp"

#include <algorithm>
#include <cmath>


#include "fft_util.hpp"
#include "soliton/errors.hpp"

namespace soliton {

namespace {

const cplx I(0.0, 1.0);

double wavenumber(std::size_t j, std::size_t n, double dx) {
  const double L = static_cast<double>(n) * dx;
  const auto jj = static_cast<long>(j);
  const long nn = static_cast<long>(n);
  const long m = jj <= nn / 2 ? jj : jj - nn;
  return 2.0 * M_PI * static_cast<double>(m) / L;
}

void check_order(int n) {
  if (n < 1 || n > kMaxKruskalOrder) {
    fail(ErrorKind::parameter, "kruskal_order", "Kruskal order must lie in 1..8");
  }
}

cplx discrete_term(const std::vector<cplx>& poles, int n) {
  cplx s = 0.0;
  for (const auto& k : poles) s += std::pow(std::conj(k), n) - std::pow(k, n);
  return I * std::pow(2.0, n - 2) / static_cast<double>(n) * s;
}

// -(1/4π) ∫ f(k) (-2k)^{n-1} dk with f = log(1 - |b|²), trapezoid on the table grid.
cplx continuous_term(const std::vector<double>& k, const std::vector<double>& f, int n) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < k.size(); ++j) {
    const double g0 = f[j] * std::pow(-2.0 * k[j], n - 1);
    const double g1 = f[j + 1] * std::pow(-2.0 * k[j + 1], n - 1);
    s += 0.5 * (k[j + 1] - k[j]) * (g0 + g1);
  }
  return -s / (4.0 * M_PI);
}

}  // namespace

std::vector<std::vector<cplx>> q_sequence(const GridPotential& U, int n) {
  check_order(n);
  const std::size_t m = U.size();
  if (m < 16) fail(ErrorKind::parameter, "grid_too_small", "Kruskal integrals need at least 16 nodes");
  const double dx = U.grid.dx;
  const double mid = 0.5 * (U.grid.x0 + U.grid.xmax());
  const double half = 0.5 * (U.grid.xmax() - U.grid.x0);

  std::vector<cplx> u(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = (U.x(i) - mid) / half;
    u[i] = U.values[i] * std::exp(-36.0 * std::pow(s, 24));
  }

  detail::FFT fft(m);
  const std::vector<cplx> Uhat = fft.forward(u);
  double peak = 0.0;
  for (const auto& v : Uhat) peak = std::max(peak, std::abs(v));
  // Resolved band: beyond it |Û| is below rounding level.
  double band = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(Uhat[j]) > 1e-15 * peak) band = std::max(band, std::abs(wavenumber(j, m, dx)));
  }
  const double cutoff = 1.5 * band;

  auto derivative = [&](const std::vector<cplx>& f) {
    std::vector<cplx> F = fft.forward(f);
    for (std::size_t j = 0; j < m; ++j) {
      const double k = wavenumber(j, m, dx);
      F[j] = std::abs(k) <= cutoff && !(m % 2 == 0 && j == m / 2) ? I * k * F[j] : 0.0;
    }
    return fft.inverse(F);
  };

  std::vector<std::vector<cplx>> q;
  q.push_back(u);
  for (int j = 1; j < n; ++j) {
    std::vector<cplx> next = derivative(q[j - 1]);
    for (auto& v : next) v *= -I;
    for (std::size_t i = 0; i < m; ++i) {
      cplx conv = 0.0;
      for (int a = 1; a <= j - 1; ++a) conv += q[a - 1][i] * q[j - a - 1][i];
      next[i] -= 4.0 * u[i] * conv;
    }
    q.push_back(std::move(next));
  }
  return q;
}

cplx kruskal_integral(const GridPotential& U, int n) {
  const auto q = q_sequence(U, n);
  std::vector<cplx> f(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) f[i] = U.values[i] * q[n - 1][i];
  return trapezoid(f, U.grid.dx);
}

cplx trace_rhs(const SpectralData& data, int n) {
  check_order(n);
  cplx out = discrete_term(data.poles, n);
  if (data.reflection && data.reflection->k.size() >= 2) {
    const auto& t = *data.reflection;
    std::vector<double> f(t.k.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = -std::log1p(std::norm(t.R[j]));
    out += continuous_term(t.k, f, n);
  }
  return out;
}

cplx trace_rhs(const ScatteringReport& rep, int n) {
  check_order(n);
  std::vector<cplx> poles;
  for (const auto& s : rep.discrete) poles.push_back(s.kappa);
  cplx out = discrete_term(poles, n);
  if (rep.k.size() >= 2) {
    std::vector<double> f(rep.k.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double b2 = std::norm(rep.b[j]);
      if (!(b2 < 1.0)) fail(ErrorKind::validation, "invalid_scattering", "|b(k)| >= 1 on the k grid");
      f[j] = std::log1p(-b2);
    }
    out += continuous_term(rep.k, f, n);
  }
  return out;
}

KruskalReport kruskal_report(const GridPotential& U, const SpectralData& data, int n_max) {
  check_order(n_max);
  KruskalReport r;
  r.n_max = n_max;
  const auto q = q_sequence(U, n_max);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<cplx> f(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) f[i] = U.values[i] * q[n - 1][i];
    const cplx In = trapezoid(f, U.grid.dx);
    const cplx Tn = trace_rhs(data, n);
    r.I.push_back(In);
    r.I_trace.push_back(Tn);
    r.residual.push_back(std::abs(In - Tn));
    r.imaginary_flag.push_back(n % 2 == 1 && std::abs(In.imag()) >= 1e-10);
  }
  return r;
}

}  // namespace soliton
