#include "soliton/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "soliton/errors.hpp"
#include "soliton/simd/kernels.hpp"

namespace soliton {

namespace {

const cplx I(0.0, 1.0);

struct Mat2 {
  cplx a, b, c, d;  // [[a, b], [c, d]]

  Spinor2 apply(const Spinor2& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }
  // Inverse of a unimodular matrix.
  Spinor2 apply_inverse(const Spinor2& v) const { return {d * v[0] - b * v[1], -c * v[0] + a * v[1]}; }
};

// exp of the fourth-order Magnus exponent over [x, x+h] for the unscaled system
// with coefficient matrix [[-ik, 2U], [-2U, ik]], built from U at both ends
// (u0, u1) and the Simpson average ubar = (u0 + 4 u_mid + u1)/6.
Mat2 magnus_step(cplx k, double h, double u0, double ubar, double u1) {
  const cplx alpha = -I * k * h;
  const cplx corr = I * k * (h * h / 3.0) * (u0 - u1);
  const cplx beta = 2.0 * h * ubar - corr;
  const cplx gamma = -2.0 * h * ubar - corr;
  const cplx s2 = alpha * alpha + beta * gamma;
  cplx ch, shc;  // cosh(s), sinh(s)/s
  if (std::abs(s2) < 1e-6) {
    ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0 + s2 * s2 * s2 / 720.0;
    shc = 1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0;
  } else {
    const cplx s = std::sqrt(s2);
    ch = std::cosh(s);
    shc = std::sinh(s) / s;
  }
  return {ch + shc * alpha, shc * beta, shc * gamma, ch - shc * alpha};
}

// Step propagators for one (U, k): the main chain visits even nodes (Simpson
// pairs) plus the last node when the interval count is odd; odd interior nodes
// are filled by a half step from the preceding even node.
struct Propagators {
  std::vector<std::size_t> chain;   // node indices, ascending
  std::vector<Mat2> chain_step;     // chain_step[j]: chain[j] -> chain[j+1]
  std::vector<Mat2> fill_step;      // fill_step[i]: node i -> i+1 (i even, i+1 not on chain)
  double dx = 0.0;
};

Mat2 half_step(const GridPotential& U, cplx k, std::size_t i) {
  const auto& u = U.values;
  const std::size_t n = u.size();
  double umid;
  if (i + 2 < n) {
    umid = (3.0 * u[i] + 6.0 * u[i + 1] - u[i + 2]) / 8.0;
  } else if (i >= 1) {
    umid = (-u[i - 1] + 6.0 * u[i] + 3.0 * u[i + 1]) / 8.0;
  } else {
    umid = 0.5 * (u[i] + u[i + 1]);
  }
  return magnus_step(k, U.grid.dx, u[i], (u[i] + 4.0 * umid + u[i + 1]) / 6.0, u[i + 1]);
}

Propagators build_propagators(const GridPotential& U, cplx k, bool with_fill) {
  const auto& u = U.values;
  const std::size_t n = u.size();
  if (n < 3) fail(ErrorKind::parameter, "grid_too_small", "potential grid needs at least 3 nodes");
  Propagators P;
  P.dx = U.grid.dx;
  const double h = 2.0 * U.grid.dx;
  std::size_t i = 0;
  P.chain.push_back(0);
  for (; i + 2 < n; i += 2) {
    P.chain_step.push_back(magnus_step(k, h, u[i], (u[i] + 4.0 * u[i + 1] + u[i + 2]) / 6.0, u[i + 2]));
    P.chain.push_back(i + 2);
  }
  if (i + 1 < n) {  // odd number of intervals: one trailing half step
    P.chain_step.push_back(half_step(U, k, i));
    P.chain.push_back(i + 1);
  }
  if (with_fill) {
    P.fill_step.resize(n);
    for (std::size_t j = 0; j + 1 < P.chain.size(); ++j) {
      if (P.chain[j + 1] == P.chain[j] + 2) P.fill_step[P.chain[j]] = half_step(U, k, P.chain[j]);
    }
  }
  return P;
}

bool is_plus(JostKind kind) { return kind == JostKind::plus_col1 || kind == JostKind::plus_col2; }
bool is_col1(JostKind kind) { return kind == JostKind::plus_col1 || kind == JostKind::minus_col1; }

void check_half_plane(cplx k, JostKind kind) {
  const double tol = 1e-14 * std::max(1.0, std::abs(k));
  const bool upper_ok = kind == JostKind::plus_col1 || kind == JostKind::minus_col2;
  if (upper_ok && k.imag() < -tol) {
    fail(ErrorKind::parameter, "half_plane",
         std::string(jost_kind_name(kind)) + " is analytic only for Im k >= 0");
  }
  if (!upper_ok && k.imag() > tol) {
    fail(ErrorKind::parameter, "half_plane",
         std::string(jost_kind_name(kind)) + " is analytic only for Im k <= 0");
  }
}

// Scaled solution v = e^{-i s k x} φ with s = +1 for col1 kinds, -1 for col2.
JostField integrate(const GridPotential& U, const Propagators& P, cplx k, JostKind kind) {
  const std::size_t n = U.size();
  const double s = is_col1(kind) ? 1.0 : -1.0;
  std::vector<Spinor2> v(n);
  const Spinor2 start = is_col1(kind) ? Spinor2{0.0, 1.0} : Spinor2{1.0, 0.0};
  const std::size_t m = P.chain.size();
  if (is_plus(kind)) {
    v[P.chain[m - 1]] = start;
    for (std::size_t j = m - 1; j-- > 0;) {
      const double h = U.x(P.chain[j + 1]) - U.x(P.chain[j]);
      const cplx f = std::exp(I * s * k * h);
      Spinor2 w = P.chain_step[j].apply_inverse(v[P.chain[j + 1]]);
      v[P.chain[j]] = {f * w[0], f * w[1]};
    }
  } else {
    v[P.chain[0]] = start;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const double h = U.x(P.chain[j + 1]) - U.x(P.chain[j]);
      const cplx f = std::exp(-I * s * k * h);
      Spinor2 w = P.chain_step[j].apply(v[P.chain[j]]);
      v[P.chain[j + 1]] = {f * w[0], f * w[1]};
    }
  }
  const cplx fhalf = std::exp(-I * s * k * P.dx);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const std::size_t c = P.chain[j];
    if (P.chain[j + 1] != c + 2) continue;
    Spinor2 w = P.fill_step[c].apply(v[c]);
    v[c + 1] = {fhalf * w[0], fhalf * w[1]};
  }
  JostField f{kind, k, U.grid, std::vector<Spinor2>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx e = std::exp(I * s * k * U.x(i));
    f.samples[i] = {e * v[i][0], e * v[i][1]};
  }
  return f;
}

void require_finite(const JostField& f) {
  for (const auto& s : f.samples) {
    if (!std::isfinite(std::abs(s[0])) || !std::isfinite(std::abs(s[1]))) {
      fail(ErrorKind::numerical, "integrator_overflow", "Jost integration produced non-finite values");
    }
  }
}

}  // namespace

const char* jost_kind_name(JostKind kind) {
  switch (kind) {
    case JostKind::plus_col1: return "plus_col1";
    case JostKind::plus_col2: return "plus_col2";
    case JostKind::minus_col1: return "minus_col1";
    case JostKind::minus_col2: return "minus_col2";
  }
  return "?";
}

JostField jost_solve(const GridPotential& U, cplx k, JostKind kind) {
  check_half_plane(k, kind);
  Propagators P = build_propagators(U, k, true);
  JostField f = integrate(U, P, k, kind);
  require_finite(f);
  return f;
}

double ode_residual(const GridPotential& U, const JostField& f) {
  const std::size_t n = f.samples.size();
  if (!f.grid.same_as(U.grid)) fail(ErrorKind::parameter, "grid_mismatch", "field and potential grids differ");
  std::vector<cplx> p1(n), p2(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p1[i] = f.samples[i][0];
    p2[i] = f.samples[i][1];
    scale = std::max({scale, std::abs(p1[i]), std::abs(p2[i])});
  }
  double worst = 0.0;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const double u = U.values[i];
    cplx r1 = derivative_at(p1, i, f.grid.dx) - (-I * f.k * p1[i] + 2.0 * u * p2[i]);
    cplx r2 = derivative_at(p2, i, f.grid.dx) - (I * f.k * p2[i] - 2.0 * u * p1[i]);
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return scale > 0.0 ? worst / scale : worst;
}

WronskianSamples wronskian(const JostField& f, const JostField& g) {
  if (!f.grid.same_as(g.grid) || f.samples.size() != g.samples.size()) {
    fail(ErrorKind::parameter, "grid_mismatch", "Wronskian of fields on different grids");
  }
  const std::size_t n = f.samples.size();
  std::vector<cplx> f1(n), f2(n), g1(n), g2(n);
  for (std::size_t i = 0; i < n; ++i) {
    f1[i] = f.samples[i][0];
    f2[i] = f.samples[i][1];
    g1[i] = g.samples[i][0];
    g2[i] = g.samples[i][1];
  }
  WronskianSamples w;
  w.values.resize(n);
  simd::wronskian(f1.data(), f2.data(), g1.data(), g2.data(), w.values.data(), n);
  cplx sum = 0.0;
  for (const auto& v : w.values) sum += v;
  w.mean = n ? sum / static_cast<double>(n) : cplx(0.0);
  double ss = 0.0;
  for (const auto& v : w.values) {
    const double d = std::abs(v - w.mean);
    w.max_deviation = std::max(w.max_deviation, d);
    ss += d * d;
  }
  w.std_dev = n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
  return w;
}

double ScatteringReport::max_unitarity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(std::norm(a[i]) + std::norm(b[i]) - 1.0));
  }
  return worst;
}

SpectralData ScatteringReport::spectral_data() const {
  SpectralData d;
  for (const auto& s : discrete) {
    d.poles.push_back(s.kappa);
    d.normings.push_back(s.lambda);
  }
  if (!k.empty()) d.reflection = ReflectionTable{k, R};
  return d;
}

ScatteringReport scattering_coefficients(const GridPotential& U, const std::vector<double>& k_grid,
                                         const ScatteringOptions& opt) {
  ScatteringReport rep;
  for (double k : k_grid) {
    if (k == 0.0) fail(ErrorKind::parameter, "k_zero", "scattering grid contains k = 0");
    Propagators P = build_propagators(U, k, true);
    JostField p1 = integrate(U, P, k, JostKind::plus_col1);
    JostField p2 = integrate(U, P, k, JostKind::plus_col2);
    JostField m2 = integrate(U, P, k, JostKind::minus_col2);
    WronskianSamples wa = wronskian(p1, m2);
    WronskianSamples wb = wronskian(p2, m2);
    for (const auto* w : {&wa, &wb}) {
      if (!(w->max_deviation <= opt.wronskian_tol * std::max(1.0, std::abs(w->mean)))) {
        std::ostringstream os;
        os << "Wronskian not constant at k = " << k << " (deviation " << w->max_deviation << ")";
        fail(ErrorKind::numerical, "wronskian_drift", os.str());
      }
    }
    const cplx a = -wa.mean;
    const cplx b = wb.mean;
    rep.k.push_back(k);
    rep.a.push_back(a);
    rep.b.push_back(b);
    rep.T.push_back(1.0 / a);
    rep.R.push_back(b / a);
  }
  return rep;
}

cplx transmission_inverse(const GridPotential& U, cplx k) {
  check_half_plane(k, JostKind::minus_col2);
  Propagators P = build_propagators(U, k, false);
  Spinor2 v{1.0, 0.0};
  for (std::size_t j = 0; j + 1 < P.chain.size(); ++j) {
    const double h = U.x(P.chain[j + 1]) - U.x(P.chain[j]);
    const cplx f = std::exp(I * k * h);
    Spinor2 w = P.chain_step[j].apply(v);
    v = {f * w[0], f * w[1]};
  }
  // At the right end φ⁺₁ is the free wave, so -W(φ⁺₁, φ⁻₂) reduces to the
  // first component of e^{ikx} φ⁻₂.
  return v[0];
}

std::vector<double> symmetric_k_grid(double kmax, std::size_t n) {
  if (n < 2 || !(kmax > 0.0)) fail(ErrorKind::parameter, "k_grid", "k grid needs n >= 2 and kmax > 0");
  std::vector<double> k(n);
  const double dk = 2.0 * kmax / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) k[j] = -kmax + (static_cast<double>(j) + 0.5) * dk;
  // Exact mirror symmetry regardless of rounding.
  for (std::size_t j = 0; j < n / 2; ++j) k[n - 1 - j] = -k[j];
  return k;
}

// ---------------------------------------------------------------------------
// Discrete spectrum

namespace {

struct AFunction {
  const GridPotential& U;
  int evaluations = 0;
  cplx operator()(cplx k) {
    ++evaluations;
    return transmission_inverse(U, k);
  }
};

double phase_step(cplx from, cplx to) { return std::arg(to / from); }

double edge_winding(AFunction& a, cplx k0, cplx k1, cplx a0, cplx a1, int depth) {
  const double d = phase_step(a0, a1);
  if ((std::abs(d) < 0.3 && depth > 0) || depth > 30) return d;
  const cplx km = 0.5 * (k0 + k1);
  const cplx am = a(km);
  if (std::abs(am) < 1e-12) fail(ErrorKind::numerical, "zero_on_contour", "a(k) vanishes on the search box boundary");
  return edge_winding(a, k0, km, a0, am, depth + 1) + edge_winding(a, km, k1, am, a1, depth + 1);
}

GridPotential decimate(const GridPotential& U, std::size_t factor) {
  if (U.size() < 64 * factor) return U;
  const std::size_t m = (U.size() - 1) / factor + 1;
  GridPotential out{Grid1D{U.grid.x0, U.grid.dx * static_cast<double>(factor), m}, std::vector<double>(m)};
  for (std::size_t i = 0; i < m; ++i) out.values[i] = U.values[i * factor];
  return out;
}

bool inside(const SearchBox& box, cplx k) {
  return k.real() >= box.re_min && k.real() <= box.re_max && k.imag() >= box.im_min && k.imag() <= box.im_max;
}

std::optional<cplx> newton(AFunction& a, cplx k, const SearchBox& box, const SpectrumOptions& opt) {
  for (int it = 0; it < 80; ++it) {
    const cplx ak = a(k);
    const cplx dak = (a(k + opt.fd_step) - a(k - opt.fd_step)) / (2.0 * opt.fd_step);
    if (std::abs(dak) < 1e-300) return std::nullopt;
    cplx step = ak / dak;
    if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
    k -= step;
    if (k.imag() <= 0.0) k = {k.real(), 0.5 * box.im_min};
    if (std::abs(step) < opt.root_tol) return inside(box, k) ? std::optional<cplx>(k) : std::nullopt;
  }
  return std::nullopt;
}

void add_root(std::vector<cplx>& roots, cplx k) {
  for (const auto& r : roots) {
    if (std::abs(r - k) < 1e-7) return;
  }
  roots.push_back(k);
}


int box_count(AFunction& a, const SearchBox& box, double seg) {
  const cplx corners[4] = {{box.re_min, box.im_min}, {box.re_max, box.im_min},
                           {box.re_max, box.im_max}, {box.re_min, box.im_max}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx k0 = corners[e], k1 = corners[(e + 1) % 4];
    const int nseg = std::max(4, static_cast<int>(std::ceil(std::abs(k1 - k0) / seg)));
    cplx prev_k = k0, prev_a = a(k0);
    for (int s = 1; s <= nseg; ++s) {
      const cplx kk = k0 + (k1 - k0) * (static_cast<double>(s) / nseg);
      const cplx ak = a(kk);
      if (std::abs(ak) < 1e-12) fail(ErrorKind::numerical, "zero_on_contour", "a(k) vanishes on the search box boundary");
      total += edge_winding(a, prev_k, kk, prev_a, ak, 0);
      prev_k = kk;
      prev_a = ak;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

int roots_inside(const std::vector<cplx>& roots, const SearchBox& box) {
  int c = 0;
  for (const auto& r : roots) c += inside(box, r) ? 1 : 0;
  return c;
}

// Recursive quadrisection driven by the argument principle: a box whose zero
// count exceeds the roots already found is split until Newton from its centre
// converges. Split lines are offset from the midpoint so they avoid the
// imaginary axis, where roots often sit.
void bisect_for_roots(AFunction& a, const SearchBox& box, int count, std::vector<cplx>& roots,
                      const SpectrumOptions& opt, int depth) {
  if (count <= roots_inside(roots, box)) return;
  const double w = box.re_max - box.re_min, h = box.im_max - box.im_min;
  if (count == 1 || std::max(w, h) < 0.05) {
    const cplx centre(box.re_min + 0.5 * w, box.im_min + 0.5 * h);
    if (auto r = newton(a, centre, box, opt)) add_root(roots, *r);
    if (count <= roots_inside(roots, box)) return;
  }
  if (depth > 14) return;
  const double rm = box.re_min + 0.5123 * w, im = box.im_min + 0.4871 * h;
  const SearchBox parts[4] = {{box.re_min, rm, box.im_min, im}, {rm, box.re_max, box.im_min, im},
                              {box.re_min, rm, im, box.im_max}, {rm, box.re_max, im, box.im_max}};
  const double seg = std::max(0.01, std::min(0.25, 0.25 * std::max(w, h)));
  for (const auto& part : parts) {
    const int c = box_count(a, part, seg);
    if (c > 0) bisect_for_roots(a, part, c, roots, opt, depth + 1);
  }
}

}  // namespace

int argument_principle_count(const GridPotential& U, const SearchBox& box) {
  if (!(box.re_max > box.re_min) || !(box.im_max > box.im_min) || !(box.im_min > 0.0)) {
    fail(ErrorKind::parameter, "search_box", "search box must be a nondegenerate rectangle in Im k > 0");
  }
  AFunction a{U};
  return box_count(a, box, 0.25);
}

SpectrumResult discrete_spectrum(const GridPotential& U, const SearchBox& box, const SpectrumOptions& opt) {
  U.require_decay();
  SpectrumResult res;
  if (!(box.re_max > box.re_min) || !(box.im_max > box.im_min) || !(box.im_min > 0.0)) {
    fail(ErrorKind::parameter, "search_box", "search box must be a nondegenerate rectangle in Im k > 0");
  }
  // Counting and seeding run on a decimated copy of the potential; roots are
  // then polished on the full grid.
  const GridPotential Uc = decimate(U, 4);
  AFunction ac{Uc};
  AFunction a{U};
  res.argument_count = box_count(ac, box, opt.contour_step);
  std::vector<cplx> seeds;
  SpectrumOptions seed_opt = opt;
  seed_opt.root_tol = std::max(opt.root_tol, 1e-8);

  auto add_mirrors = [&](AFunction& f, std::vector<cplx>& set, const SpectrumOptions& o) {
    const auto current = set;
    for (const auto& r : current) {
      if (std::abs(r.real()) > opt.sym_tol) {
        if (auto m = newton(f, -std::conj(r), box, o)) add_root(set, *m);
      }
    }
  };

  if (res.argument_count > 0 && box.re_min <= 0.0 && box.re_max >= 0.0) {
    double prev_eta = box.im_min;
    double prev = ac(cplx(0.0, prev_eta)).real();
    for (double eta = box.im_min + opt.axis_step; eta <= box.im_max + 1e-12; eta += opt.axis_step) {
      const double cur = ac(cplx(0.0, eta)).real();
      if ((prev < 0.0) != (cur < 0.0)) {
        if (auto r = newton(ac, cplx(0.0, 0.5 * (prev_eta + eta)), box, seed_opt)) add_root(seeds, *r);
      }
      prev = cur;
      prev_eta = eta;
    }
  }
  if (static_cast<int>(seeds.size()) < res.argument_count) {
    bisect_for_roots(ac, box, res.argument_count, seeds, seed_opt, 0);
    add_mirrors(ac, seeds, seed_opt);
  }

  std::vector<cplx> roots;
  for (const auto& s : seeds) {
    if (auto r = newton(a, s, box, opt)) add_root(roots, *r);
  }
  add_mirrors(a, roots, opt);

  if (static_cast<int>(roots.size()) != res.argument_count) {
    std::ostringstream os;
    os << "argument principle counts " << res.argument_count << " zeros of a(k) but " << roots.size()
       << " roots converged";
    fail(ErrorKind::numerical, "incomplete_spectrum", os.str());
  }
  std::sort(roots.begin(), roots.end(), [](cplx l, cplx r) {
    if (std::abs(l.imag() - r.imag()) > 1e-9) return l.imag() < r.imag();
    return l.real() < r.real();
  });

  for (const cplx kappa : roots) {
    const cplx da = (a(kappa + opt.fd_step) - a(kappa - opt.fd_step)) / (2.0 * opt.fd_step);
    if (std::abs(da) < opt.derivative_floor) {
      fail(ErrorKind::numerical, "degenerate_pole", "|a'(kappa)| below the derivative floor");
    }
    Propagators P = build_propagators(U, kappa, true);
    JostField fp = integrate(U, P, kappa, JostKind::plus_col1);
    JostField fm = integrate(U, P, kappa, JostKind::minus_col2);
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < fp.samples.size(); ++i) {
      const double np = std::hypot(std::abs(fp.samples[i][0]), std::abs(fp.samples[i][1]));
      const double nm = std::hypot(std::abs(fm.samples[i][0]), std::abs(fm.samples[i][1]));
      if (np * nm > best_val && std::isfinite(np * nm)) {
        best_val = np * nm;
        best = i;
      }
    }
    const Spinor2& p = fp.samples[best];
    const Spinor2& m = fm.samples[best];
    const cplx mu = (std::conj(p[0]) * m[0] + std::conj(p[1]) * m[1]) / (std::norm(p[0]) + std::norm(p[1]));
    const cplx gamma = 1.0 / da;
    res.states.push_back({kappa, gamma, mu, I * gamma * mu});
  }

  for (const auto& s : res.states) {
    if (std::abs(s.kappa.real()) <= opt.sym_tol) continue;
    bool found = false;
    for (const auto& t : res.states) found = found || std::abs(t.kappa + std::conj(s.kappa)) <= opt.sym_tol;
    if (!found) fail(ErrorKind::numerical, "incomplete_spectrum", "discrete spectrum not closed under kappa -> -conj(kappa)");
  }
  return res;
}

// ---------------------------------------------------------------------------
// JSON report

namespace {

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx from_cjson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::parameter, "parse_error", "complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json carray(const std::vector<cplx>& v) {
  auto out = nlohmann::json::array();
  for (const auto& z : v) out.push_back(cjson(z));
  return out;
}

std::vector<cplx> from_carray(const nlohmann::json& j) {
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(from_cjson(e));
  return out;
}

}  // namespace

std::string scattering_report_json(const ScatteringReport& rep) {
  nlohmann::json j;
  j["k"] = rep.k;
  j["a"] = carray(rep.a);
  j["b"] = carray(rep.b);
  j["T"] = carray(rep.T);
  j["R"] = carray(rep.R);
  auto d = nlohmann::json::array();
  for (const auto& s : rep.discrete) {
    d.push_back({{"kappa", cjson(s.kappa)}, {"gamma", cjson(s.gamma)}, {"mu", cjson(s.mu)}, {"lambda", cjson(s.lambda)}});
  }
  j["discrete"] = d;
  return j.dump(1) + "\n";
}

ScatteringReport scattering_report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parameter, "parse_error", std::string("scattering report is not valid JSON: ") + e.what());
  }
  ScatteringReport rep;
  try {
    rep.k = j.at("k").get<std::vector<double>>();
    rep.a = from_carray(j.at("a"));
    rep.b = from_carray(j.at("b"));
    rep.T = from_carray(j.at("T"));
    rep.R = from_carray(j.at("R"));
    for (const auto& s : j.at("discrete")) {
      rep.discrete.push_back({from_cjson(s.at("kappa")), from_cjson(s.at("gamma")), from_cjson(s.at("mu")),
                              from_cjson(s.at("lambda"))});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parameter, "parse_error", std::string("scattering report missing fields: ") + e.what());
  }
  const auto n = rep.k.size();
  if (rep.a.size() != n || rep.b.size() != n || rep.T.size() != n || rep.R.size() != n) {
    fail(ErrorKind::parameter, "structural", "scattering report arrays differ in length");
  }
  return rep;
}

}  // namespace soliton
