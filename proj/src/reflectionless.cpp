#include "soliton/reflectionless.hpp"

#include <cmath>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

const cplx I(0.0, 1.0);

// The Cauchy-like matrices lose roughly one digit per extra pole; extended
// precision keeps the Dirac-sphere data exact to 1e-8 up to N = 9.
using real_x = long double;
using cplx_x = std::complex<real_x>;
using MatX = Eigen::Matrix<cplx_x, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<cplx_x, Eigen::Dynamic, 1>;
using RowX = Eigen::Matrix<cplx_x, 1, Eigen::Dynamic>;
using VecR = Eigen::Matrix<real_x, Eigen::Dynamic, 1>;
const cplx_x IX(0.0L, 1.0L);

cplx_x widen(cplx z) { return {z.real(), z.imag()}; }

void require_synthesizable(const SpectralData& data) {
  if (!data.reflectionless()) {
    fail(ErrorKind::parameter, "not_reflectionless", "closed-form synthesis needs reflectionless data");
  }
  if (data.size() > kMaxSolitons) {
    fail(ErrorKind::parameter, "too_many_poles", "closed-form synthesis supports at most 16 poles");
  }
  const ValidationReport rep = validate(data);
  if (!rep.ok()) fail(ErrorKind::validation, rep.violations.front().rule, rep.summary());
}

// Row-equilibrated LU of G± = E ± iCΛ at one x.
struct Synthesis {
  VecX lambda, e;  // diagonal of Λ and E
  MatX C;
  Eigen::PartialPivLU<MatX> plus, minus;
  VecR row_plus, row_minus;
  double log_abs_det = 0.0;  // log |det(1 + iM)|

  Synthesis(const SpectralData& d, double x) {
    const auto n = static_cast<Eigen::Index>(d.size());
    lambda.resize(n);
    e.resize(n);
    C.resize(n, n);
    real_x im_sum = 0.0L;
    const real_x xx = x;
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx_x kj = widen(d.poles[j]);
      lambda(j) = widen(d.normings[j]);
      e(j) = std::exp(-2.0L * IX * kj * xx);
      im_sum += kj.imag();
      for (Eigen::Index k = 0; k < n; ++k) C(j, k) = 1.0L / (IX * (kj + widen(d.poles[k])));
    }
    MatX CL = C * lambda.asDiagonal();
    MatX gp = MatX(e.asDiagonal()) + IX * CL;
    MatX gm = MatX(e.asDiagonal()) - IX * CL;
    row_plus = gp.cwiseAbs().rowwise().maxCoeff();
    row_minus = gm.cwiseAbs().rowwise().maxCoeff();
    gp = row_plus.cwiseInverse().asDiagonal() * gp;
    gm = row_minus.cwiseInverse().asDiagonal() * gm;
    plus.compute(gp);
    minus.compute(gm);
    real_x lad = -2.0L * im_sum * xx;
    for (Eigen::Index j = 0; j < n; ++j) {
      lad += std::log(row_plus(j)) + std::log(std::abs(plus.matrixLU()(j, j)));
    }
    log_abs_det = static_cast<double>(lad);
  }

  VecX solve_plus(const VecX& rhs) const { return plus.solve(row_plus.cwiseInverse().asDiagonal() * rhs); }
  // Row vector v with v G₋ = rowᵀ.
  RowX solve_minus_left(const VecX& row) const {
    // G₋ = S Ĝ with S the row scales; v S Ĝ = r  <=>  Ĝᵀ (S v)ᵀ = r.
    VecX t = minus.transpose().solve(row);
    return (row_minus.cwiseInverse().asDiagonal() * t).transpose();
  }
};

cplx narrow(cplx_x z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

void check_det(const Synthesis& s, double x, double det_floor) {
  if (!(s.log_abs_det >= std::log(det_floor))) {
    std::ostringstream os;
    os << "det(1 + iM(x)) vanishes at x = " << x << " (|det| = " << std::exp(s.log_abs_det) << ")";
    fail(ErrorKind::numerical, "singular_synthesis", os.str());
  }
}

}  // namespace

Eigen::MatrixXcd kernel_matrix(const SpectralData& data, double x) {
  require_synthesizable(data);
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const cplx s = data.poles[j] + data.poles[k];
      M(j, k) = data.normings[k] / (I * s) * std::exp(I * s * x);
    }
  }
  return M;
}

double potential_at(const SpectralData& data, double x, double det_floor) {
  if (data.size() == 0) return 0.0;
  Synthesis s(data, x);
  check_det(s, x, det_floor);
  const VecX ones = VecX::Ones(static_cast<Eigen::Index>(data.size()));
  return static_cast<double>((s.lambda.transpose() * s.solve_plus(ones)).value().real());
}

GridPotential potential_from_data(const SpectralData& data, const Grid1D& grid, double det_floor) {
  require_synthesizable(data);
  return sample_potential(grid, [&](double x) { return potential_at(data, x, det_floor); });
}

double potential_imaginary_part(const SpectralData& data, const Grid1D& grid) {
  require_synthesizable(data);
  if (data.size() == 0) return 0.0;
  const VecX ones = VecX::Ones(static_cast<Eigen::Index>(data.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    Synthesis s(data, grid.x(i));
    const RowX beta = s.solve_minus_left(s.lambda);
    const cplx u = narrow((beta * s.e.asDiagonal() * s.solve_plus(ones)).value());
    worst = std::max(worst, std::abs(u.imag()));
  }
  return worst;
}

JostField jost_from_data(const SpectralData& data, cplx k, const Grid1D& grid, double pole_floor) {
  require_synthesizable(data);
  const auto n = static_cast<Eigen::Index>(data.size());
  VecX w(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx s = data.poles[j] + k;
    if (std::abs(s) < pole_floor) {
      fail(ErrorKind::numerical, "near_pole", "k is within the pole floor of -kappa_j");
    }
    w(j) = IX / widen(s);
  }
  JostField f{JostKind::plus_col1, k, grid, std::vector<Spinor2>(grid.n)};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const cplx ek = std::exp(I * k * x);
    if (n == 0) {
      f.samples[i] = {0.0, ek};
      continue;
    }
    Synthesis s(data, x);
    check_det(s, x, kDetFloor);
    const RowX beta = s.solve_minus_left(s.lambda);
    const VecX g = s.solve_plus(w);
    const cplx p1 = -narrow((beta * s.e.asDiagonal() * g).value());
    const cplx p2 = 1.0 + narrow((beta * s.C * s.lambda.asDiagonal() * g).value());
    f.samples[i] = {ek * p1, ek * p2};
  }
  return f;
}

SpectralData dirac_sphere_data(int N) {
  if (N < 1 || N > static_cast<int>(kMaxSolitons)) {
    fail(ErrorKind::parameter, "dirac_order", "Dirac sphere order must lie in 1..16");
  }
  SpectralData d;
  for (int j = 1; j <= N; ++j) {
    d.poles.emplace_back(0.0, (2.0 * j - 1.0) / 2.0);
    const double lam = std::exp(std::lgamma(N + j) - std::lgamma(N - j + 1) - 2.0 * std::lgamma(j));
    d.normings.emplace_back(std::round(lam), 0.0);
  }
  const Grid1D g = default_potential_grid();
  double residual = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    residual = std::max(residual, std::abs(potential_at(d, x) - N / (2.0 * std::cosh(x))));
  }
  if (!(residual < 1e-8)) {
    std::ostringstream os;
    os << "Dirac sphere data for N = " << N << " reproduce N/(2 cosh x) only to " << residual;
    fail(ErrorKind::numerical, "calibration", os.str());
  }
  return d;
}

}  // namespace soliton
