#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "soliton/kruskal.hpp"
#include "soliton/mesh_io.hpp"
#include "soliton/reflectionless.hpp"
#include "soliton/spinor.hpp"
#include "soliton/surface.hpp"
#include "test_util.hpp"

using namespace soliton;

namespace {

struct Fixture {
  SpectralData data;
  GridPotential U;
  SpinorField psi;
};

Fixture make_fixture(const SpectralData& data, const std::vector<cplx>& coeffs,
                     const CylinderGrid& grid = CylinderGrid::default_grid()) {
  auto U = potential_from_data(data, grid.x);
  auto psi = build_spinor(data, U, coeffs, grid.ny);
  return {data, std::move(U), std::move(psi)};
}

const Fixture& unit_sphere() {
  static const Fixture f = make_fixture(dirac_sphere_data(1), {1.0, 0.0});
  return f;
}

const ImmersedSurface& unit_sphere_surface() {
  static const ImmersedSurface s = immerse(unit_sphere().psi);
  return s;
}

double max_node_distance(const ImmersedSurface& a, const ImmersedSurface& b) {
  double worst = 0.0;
  for (std::size_t p = 0; p < a.points.size(); ++p) {
    worst = std::max(worst, std::hypot(a.points[p][0] - b.points[p][0], a.points[p][1] - b.points[p][1],
                                       a.points[p][2] - b.points[p][2]));
  }
  return worst;
}

// Linearized least-squares fit F ≈ P/Q with P, Q spanned by Z^a Z̄^b (a, b <= deg),
// Q monic in the constant term; returns max |F - P/Q| / max |F|.
double rational_fit_residual(const std::vector<cplx>& Z, const std::vector<cplx>& F, int deg) {
  std::vector<std::pair<int, int>> mons;
  for (int a = 0; a <= deg; ++a) {
    for (int b = 0; b <= deg; ++b) mons.emplace_back(a, b);
  }
  const std::size_t m = mons.size(), n = Z.size();
  const auto mono = [&](cplx z, std::size_t c) { return std::pow(z, mons[c].first) * std::pow(std::conj(z), mons[c].second); };
  Eigen::MatrixXcd A(n, 2 * m - 1);
  Eigen::VectorXcd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::pow(1.0 + std::norm(Z[i]), -0.5 * deg);
    for (std::size_t c = 0; c < m; ++c) A(i, c) = w * mono(Z[i], c);
    for (std::size_t c = 1; c < m; ++c) A(i, m + c - 1) = -w * F[i] * mono(Z[i], c);
    rhs(i) = w * F[i];
  }
  const Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(rhs);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx num = 0.0, den = 1.0;
    for (std::size_t c = 0; c < m; ++c) num += sol(c) * mono(Z[i], c);
    for (std::size_t c = 1; c < m; ++c) den += sol(m + c - 1) * mono(Z[i], c);
    worst = std::max(worst, std::abs(num / den - F[i]));
    scale = std::max(scale, std::abs(F[i]));
  }
  return worst / scale;
}

std::vector<cplx> unit_coefficients(int L, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> a(2 * static_cast<std::size_t>(L));
  for (auto& v : a) v = cplx(nd(rng), nd(rng));
  return a;
}

}  // namespace

// ---- spinor fields ----

TEST(BuildSpinor, RevolutionFieldIsJostTimesHalfFrequency) {
  const auto& f = unit_sphere();
  const auto& g = f.psi.grid;
  const auto phi = jost_from_data(f.data, cplx(0.0, 0.5), g.x);
  double err = 0.0;
  for (std::size_t i = 0; i < g.x.n; i += 7) {
    for (std::size_t j = 0; j < g.ny; j += 5) {
      const cplx e = std::exp(cplx(0.0, 0.5 * g.y(j)));
      err = std::max({err, std::abs(f.psi.psi1[g.index(i, j)] - phi.samples[i][0] * e),
                      std::abs(f.psi.psi2[g.index(i, j)] - phi.samples[i][1] * e)});
    }
  }
  EXPECT_LT(err, 1e-10);
}

TEST(BuildSpinor, SecondCoefficientIsStarTransform) {
  const auto& f = unit_sphere();
  const auto other = build_spinor(f.data, f.U, {0.0, 1.0}, f.psi.grid.ny);
  const auto star = star_transform(f.psi);
  double err = 0.0;
  for (std::size_t p = 0; p < other.psi1.size(); ++p) {
    err = std::max({err, std::abs(other.psi1[p] - star.psi1[p]), std::abs(other.psi2[p] - star.psi2[p])});
  }
  EXPECT_LT(err, 1e-15);
}

TEST(BuildSpinor, MixedDiracTwoFieldSolvesDirac) {
  const auto f = make_fixture(dirac_sphere_data(2), {1.0, 1.0, 0.0, 0.0});
  EXPECT_LT(dirac_residual(f.psi), 1e-6);
  EXPECT_LT(antiperiodicity_defect(f.psi), 1e-12);
}

TEST(BuildSpinor, Errors) {
  const SpectralData even{{{0.0, 1.0}}, {1.0}, std::nullopt};
  const auto U = potential_from_data(even, CylinderGrid::default_grid().x);
  test::expect_error([&] { build_spinor(even, U, {1.0, 0.0}); }, "not_a_level");
  const auto& f = unit_sphere();
  test::expect_error([&] { build_spinor(f.data, f.U, {0.0, 0.0}); }, "zero_coefficients");
  test::expect_error([&] { build_spinor(f.data, f.U, {1.0}); }, "coefficient_count");
}

TEST(BuildSpinor, IntegratedProfilesMatchClosedForm) {
  // The same field through the Jost integrator: an all-zero reflection table
  // disables the closed form.
  auto data = dirac_sphere_data(2);
  const auto grid = Grid1D::span(-20.0, 20.0, 1024);
  const auto U = potential_from_data(data, grid);
  const std::vector<cplx> a{1.0, 0.5, 0.0, 0.2};
  const auto closed = build_spinor(data, U, a, 32);
  data.reflection = ReflectionTable{{-1.0, 1.0}, {0.0, 0.0}};
  const auto integrated = build_spinor(data, U, a, 32);
  double err = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < closed.psi1.size(); ++p) {
    err = std::max({err, std::abs(integrated.psi1[p] - closed.psi1[p]), std::abs(integrated.psi2[p] - closed.psi2[p])});
    scale = std::max(scale, std::abs(closed.psi1[p]));
  }
  EXPECT_LT(err, 1e-6 * scale);
}

TEST(StarTransform, InvolutionUpToSign) {
  const auto f = make_fixture(dirac_sphere_data(2), {1.0, cplx(0.2, 0.3), 0.5, 0.0});
  const auto twice = star_transform(star_transform(f.psi));
  const auto once = star_transform(f.psi);
  for (std::size_t p = 0; p < f.psi.psi1.size(); ++p) {
    ASSERT_EQ(twice.psi1[p], -f.psi.psi1[p]);
    ASSERT_EQ(twice.psi2[p], -f.psi.psi2[p]);
    ASSERT_EQ(std::norm(once.psi1[p]) + std::norm(once.psi2[p]), std::norm(f.psi.psi1[p]) + std::norm(f.psi.psi2[p]));
  }
  EXPECT_LT(dirac_residual(f.psi), 1e-6);
  EXPECT_LT(dirac_residual(once), 1e-6);
}

TEST(KernelDimension, Examples) {
  EXPECT_EQ(kernel_dimension(dirac_sphere_data(3)), 3);
  EXPECT_EQ(kernel_dimension({{{0.0, 1.0}}, {1.0}, std::nullopt}), 0);
  EXPECT_EQ(kernel_dimension({{{0.0, 0.5}, {-0.4, 0.7}, {0.4, 0.7}}, {1.0, cplx(1.0, 0.3), cplx(1.0, -0.3)}, std::nullopt}), 1);
}

TEST(IsRevolution, Examples) {
  EXPECT_TRUE(is_revolution({1.0, 0.0, 0.0, 0.0}, 2));
  EXPECT_TRUE(is_revolution({1.0, 0.0, 1.0, 0.0}, 2));
  EXPECT_FALSE(is_revolution({1.0, 1.0, 0.0, 0.0}, 2));
  EXPECT_TRUE(is_revolution({0.0, 1.0, 0.0, cplx(0.3, -2.0)}, 2));
  test::expect_error([] { is_revolution({1.0, 0.0, 0.0}, 2); }, "coefficient_count");
}

// ---- immersion ----

TEST(Immerse, UnitSphereIsRound) {
  const auto& s = unit_sphere_surface();
  const auto fit = fit_sphere(s.points);
  EXPECT_LT(fit.residual, 1e-5);
  EXPECT_NEAR(fit.radius, 0.5, 1e-6);
  const auto& g = s.grid;
  const auto p0 = s.points[g.index(s.base_i, s.base_j)];
  EXPECT_EQ(p0[0], 0.0);
  EXPECT_EQ(p0[1], 0.0);
  EXPECT_EQ(p0[2], 0.0);
}

TEST(Immerse, HomothetyScalesBySquare) {
  const auto& s = unit_sphere_surface();
  const double r = 1.7;
  const auto scaled = immerse(rotate_frame(unit_sphere().psi, r, 0.0));
  double worst = 0.0;
  for (std::size_t p = 0; p < s.points.size(); ++p) {
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::abs(scaled.points[p][c] - r * r * s.points[p][c]));
    }
  }
  EXPECT_LT(worst, 1e-10 * r * r * 0.5);
}

TEST(Immerse, BasepointOutsideGridRejected) {
  test::expect_error([] { immerse(unit_sphere().psi, 25.0, 0.0); }, "basepoint");
}

TEST(Closure, UnitSphere) {
  const auto c = closure_check(unit_sphere_surface());
  EXPECT_LT(c.period_norm, 1e-6);
  EXPECT_LT(c.diameter_minus, 1e-5);
  EXPECT_LT(c.diameter_plus, 1e-5);
  EXPECT_NEAR(c.decay_minus, 1.0, 1e-3);
  EXPECT_NEAR(c.decay_plus, 1.0, 1e-3);
}

TEST(Closure, RandomKernelCombinations) {
  std::mt19937 rng(9);
  for (int N = 1; N <= 3; ++N) {
    const auto f = make_fixture(dirac_sphere_data(N), unit_coefficients(N, rng));
    const auto c = closure_check(immerse(f.psi));
    EXPECT_LT(c.period_norm, 1e-6) << "N = " << N;
    EXPECT_LT(c.diameter_minus, 1e-5) << "N = " << N;
    EXPECT_LT(c.diameter_plus, 1e-5) << "N = " << N;
  }
}

TEST(Closure, NonLevelPoleBreaksSpinStructure) {
  const SpectralData d{{{0.0, 1.0}}, {1.0}, std::nullopt};
  const auto grid = CylinderGrid::default_grid();
  const auto U = potential_from_data(d, grid.x);
  SpinorOptions opt;
  opt.require_levels = false;
  const auto psi = build_spinor(d, U, {1.0, 0.3}, grid.ny, opt);
  EXPECT_GT(antiperiodicity_defect(psi), 1e-3);
}

TEST(Geometry, UnitSphereIdentities) {
  const auto id = identity_defects(unit_sphere_surface());
  EXPECT_LT(id.conformal, 1e-5);
  EXPECT_LT(id.metric, 1e-5);
  EXPECT_LT(id.mean_curvature, 1e-5);
  EXPECT_NEAR(id.gauss_bonnet, 4.0 * M_PI, 1e-3);
}

TEST(Geometry, CurvatureOfRoundSphere) {
  const auto& s = unit_sphere_surface();
  // The round sphere of radius 1/2 has |H| = 2 everywhere.
  for (std::size_t i = 400; i + 400 < s.grid.x.n; i += 25) {
    const auto p = s.grid.index(i, 17);
    EXPECT_NEAR(std::abs(s.H[p]), 2.0, 1e-9);
    EXPECT_NEAR(std::abs(s.H_geom[p]), 2.0, 1e-5);
    EXPECT_NEAR(s.K[p], 4.0, 5e-3);  // second-order stencil
  }
}

TEST(Geometry, MixedFieldIdentities) {
  std::mt19937 rng(2);
  for (int N = 2; N <= 3; ++N) {
    const auto f = make_fixture(dirac_sphere_data(N), unit_coefficients(N, rng), CylinderGrid{Grid1D::span(-20.0, 20.0, 2048), 256});
    const auto id = identity_defects(immerse(f.psi));
    EXPECT_LT(id.conformal, 1e-5) << "N = " << N;
    EXPECT_LT(id.metric, 1e-5) << "N = " << N;
    EXPECT_LT(id.mean_curvature, 1e-5) << "N = " << N;
    EXPECT_NEAR(id.gauss_bonnet, 4.0 * M_PI, 1e-3) << "N = " << N;
  }
}

TEST(Geometry, RevolutionFieldsAreRotational) {
  EXPECT_LT(revolution_defect(unit_sphere_surface()), 1e-6);
  const auto f = make_fixture(dirac_sphere_data(2), {0.0, 1.0, 0.0, 0.0});
  EXPECT_LT(revolution_defect(immerse(f.psi)), 1e-6);
  const auto g = make_fixture(dirac_sphere_data(2), {1.0, 1.0, 0.0, 0.0});
  EXPECT_GT(revolution_defect(immerse(g.psi)), 1e-3);
}

// ---- Willmore ----

TEST(Willmore, DiracSpheres) {
  for (int N = 1; N <= 3; ++N) {
    std::vector<cplx> a(2 * static_cast<std::size_t>(N), 0.0);
    a[0] = 1.0;
    const auto f = make_fixture(dirac_sphere_data(N), a);
    const double target = 4.0 * M_PI * N * N;
    EXPECT_NEAR(willmore_mesh(immerse(f.psi)) / target, 1.0, 1e-4) << "N = " << N;
    EXPECT_NEAR(willmore_potential(f.U) / target, 1.0, 1e-5) << "N = " << N;
  }
}

TEST(Willmore, ZeroPotential) {
  EXPECT_EQ(willmore_potential(sample_potential(default_potential_grid(), [](double) { return 0.0; })), 0.0);
}

TEST(Willmore, KruskalBridge) {
  const auto& f = unit_sphere();
  const double via_kruskal = 8.0 * M_PI * kruskal_integral(f.U, 1).real();
  EXPECT_NEAR(willmore_mesh(unit_sphere_surface()) / via_kruskal, 1.0, 1e-5);
}

TEST(Willmore, BoundOnRandomLevelData) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> lam(0.5, 2.0);
  const auto grid = Grid1D::span(-30.0, 30.0, 4096);
  for (int trial = 0; trial < 20; ++trial) {
    SpectralData d;
    for (int n = 0; n < 4; ++n) {
      if (std::bernoulli_distribution(0.5)(rng)) {
        d.poles.push_back(HalfIntegerLevel{n}.kappa());
        d.normings.push_back(lam(rng));
      }
    }
    if (d.poles.empty()) d.poles.push_back(HalfIntegerLevel{0}.kappa()), d.normings.push_back(1.0);
    const int L = kernel_dimension(d);
    EXPECT_GE(willmore_potential(potential_from_data(d, grid)), 4.0 * M_PI * L * L - 1e-6) << "trial " << trial;
  }
}

TEST(Willmore, MeshAgreesOnRandomLevelData) {
  std::mt19937 rng(32);
  const auto grid = CylinderGrid{Grid1D::span(-20.0, 20.0, 1024), 128};
  for (const SpectralData& d : {SpectralData{{{0.0, 0.5}, {0.0, 2.5}}, {0.7, 1.9}, std::nullopt},
                                SpectralData{{{0.0, 1.5}}, {1.3}, std::nullopt}}) {
    const int L = kernel_dimension(d);
    const auto f = make_fixture(d, unit_coefficients(L, rng), grid);
    EXPECT_NEAR(willmore_mesh(immerse(f.psi)) / willmore_potential(f.U), 1.0, 1e-4);
  }
}

// ---- rotations ----

TEST(RotateFrame, IdentityAndZero) {
  const auto& f = unit_sphere();
  const auto same = rotate_frame(f.psi, 1.0, 0.0);
  EXPECT_EQ(same.psi1, f.psi.psi1);
  EXPECT_EQ(same.psi2, f.psi.psi2);
  test::expect_error([&] { rotate_frame(f.psi, 0.0, 0.0); }, "zero_rotation");
}

TEST(RotateFrame, PhaseRotatesAboutThirdAxis) {
  const double theta = 0.37;
  const auto R = rho_matrix(std::polar(1.0, theta), 0.0);
  Eigen::Matrix3d expected;
  expected << std::cos(2 * theta), std::sin(2 * theta), 0, -std::sin(2 * theta), std::cos(2 * theta), 0, 0, 0, 1;
  EXPECT_LT((R - expected).norm(), 1e-15);
}

TEST(RotateFrame, RhoIsARotation) {
  std::mt19937 rng(12);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const cplx l(nd(rng), nd(rng)), m(nd(rng), nd(rng));
    const auto R = rho_rotation(l, m);
    EXPECT_LT((R.transpose() * R - Eigen::Matrix3d::Identity()).norm(), 1e-12);
    EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
    const double n = std::sqrt(std::norm(l) + std::norm(m));
    EXPECT_LT((R - rho_matrix(l / n, m / n)).norm(), 1e-12);
  }
}

TEST(RotateFrame, EquivarianceOfImmersion) {
  std::mt19937 rng(13);
  std::normal_distribution<double> nd;
  const auto f = make_fixture(dirac_sphere_data(2), {1.0, cplx(0.3, 0.1), 0.0, cplx(0.2, -0.5)});
  const auto base = immerse(f.psi);
  for (int trial = 0; trial < 20; ++trial) {
    cplx l(nd(rng), nd(rng)), m(nd(rng), nd(rng));
    const double n = std::sqrt(std::norm(l) + std::norm(m));
    l /= n;
    m /= n;
    const auto R = rho_rotation(l, m);
    auto expected = base;
    for (auto& p : expected.points) {
      const Eigen::Vector3d v = R * Eigen::Vector3d(p[0], p[1], p[2]);
      p = {v[0], v[1], v[2]};
    }
    EXPECT_LT(max_node_distance(immerse(rotate_frame(f.psi, l, m)), expected), 1e-5);
  }
}

// ---- plane representation ----

TEST(PlaneRepresentation, UnitSphereDecay) {
  const auto d = plane_decay(unit_sphere().psi);
  EXPECT_GT(d.c_plus, 1e-3);
  EXPECT_LT(d.spread, 1e-6);
}

TEST(PlaneRepresentation, SingleValued) {
  EXPECT_LT(plane_single_valuedness(unit_sphere().psi), 1e-10);
  const auto f = make_fixture(dirac_sphere_data(2), {1.0, 1.0, 0.0, 0.0});
  EXPECT_LT(plane_single_valuedness(f.psi), 1e-10);
}

TEST(PlaneRepresentation, DiracTwoIsRational) {
  const auto f = make_fixture(dirac_sphere_data(2), {1.0, 1.0, 0.0, 0.0}, CylinderGrid{Grid1D::span(-3.0, 3.0, 61), 32});
  const auto P = to_plane(f.psi);
  EXPECT_LT(rational_fit_residual(P.Z, P.Psi1, 2), 1e-6);
  EXPECT_LT(rational_fit_residual(P.Z, P.Psi2, 2), 1e-6);
}

// ---- branch points ----

TEST(BranchPoints, UnitSphereHasNone) {
  const auto b = detect_branch_points(unit_sphere_surface());
  EXPECT_TRUE(b.nodes.empty());
  EXPECT_FALSE(b.branch_minus);
  EXPECT_FALSE(b.branch_plus);
}

TEST(BranchPoints, ConstructedZero) {
  auto psi = unit_sphere().psi;
  const auto& g = psi.grid;
  const double x0 = g.x.x(600);
  for (std::size_t i = 0; i < g.x.n; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      psi.psi1[g.index(i, j)] *= g.x.x(i) - x0;
      psi.psi2[g.index(i, j)] *= g.x.x(i) - x0;
    }
  }
  const auto b = detect_branch_points(immerse(psi));
  ASSERT_FALSE(b.nodes.empty());
  for (const auto& [i, j] : b.nodes) EXPECT_EQ(i, 600u);
}

TEST(BranchPoints, ThreeHalvesLevelBranchesAtInfinity) {
  const SpectralData d{{{0.0, 1.5}}, {3.0}, std::nullopt};
  const auto f = make_fixture(d, {1.0, 0.0});
  const auto b = detect_branch_points(immerse(f.psi));
  EXPECT_NEAR(b.decay_minus, 3.0, 0.05);
  EXPECT_NEAR(b.decay_plus, 3.0, 0.05);
  EXPECT_TRUE(b.branch_minus);
  EXPECT_TRUE(b.branch_plus);
}

// ---- inverse direction ----

TEST(SpinorFromImmersion, UnitSphereRoundTrip) {
  const auto& s = unit_sphere_surface();
  const auto& f = unit_sphere();
  const auto rec = spinor_from_immersion(s);
  double psi_err = 0.0, u_err = 0.0;
  for (std::size_t p = 0; p < s.points.size(); ++p) {
    psi_err = std::max({psi_err, std::abs(std::abs(rec.field.psi1[p]) - std::abs(f.psi.psi1[p])),
                        std::abs(std::abs(rec.field.psi2[p]) - std::abs(f.psi.psi2[p]))});
    if (!rec.flagged[p]) u_err = std::max(u_err, std::abs(rec.potential[p] - f.U.values[p / s.grid.ny]));
  }
  EXPECT_LT(psi_err, 1e-4);
  EXPECT_LT(u_err, 1e-4);
}

TEST(SpinorFromImmersion, FlatInputRejected) {
  auto s = unit_sphere_surface();
  for (auto& p : s.points) p = {1.0, 2.0, 3.0};
  test::expect_error([&] { spinor_from_immersion(s); }, "not_immersed");
}

// ---- export ----

TEST(MeshExport, ObjStructure) {
  const auto f = make_fixture(dirac_sphere_data(1), {1.0, 0.0}, CylinderGrid{Grid1D::span(-20.0, 20.0, 64), 16});
  const auto s = immerse(f.psi);
  std::ostringstream capped, open;
  write_obj(capped, s);
  ObjOptions no_caps;
  no_caps.cap_ends = false;
  write_obj(open, s, no_caps);
  const auto count = [](const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
    return n;
  };
  EXPECT_EQ(count(open.str(), "v "), 64 * 16);
  EXPECT_EQ(count(open.str(), "f "), 63 * 16);
  EXPECT_EQ(count(capped.str(), "v "), 64 * 16 + 2);
  EXPECT_EQ(count(capped.str(), "f "), 63 * 16 + 2 * 16);
  // Seam: the last quad of the first row wraps to column 0.
  EXPECT_NE(open.str().find("f 16 32 17 1\n"), std::string::npos);
}

TEST(MeshExport, ReportIsDeterministicJson) {
  const auto f = make_fixture(dirac_sphere_data(1), {1.0, 0.0}, CylinderGrid{Grid1D::span(-20.0, 20.0, 256), 32});
  const auto s = immerse(f.psi);
  const auto a = geometry_report_json(geometry_report(s, f.U, 1, true));
  const auto b = geometry_report_json(geometry_report(immerse(f.psi), f.U, 1, true));
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["kernel_dimension"], 1);
  EXPECT_TRUE(j["is_revolution"].get<bool>());
  EXPECT_NEAR(j["willmore"]["potential"].get<double>(), 4.0 * M_PI, 1e-6);
  EXPECT_EQ(j["branch_points"]["count"], 0);
}
