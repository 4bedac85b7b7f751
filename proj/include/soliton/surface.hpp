#pragma once

#include <array>
#include <utility>
#include <vector>

#include "soliton/grid.hpp"
#include "soliton/spinor.hpp"

namespace soliton {

using Vec3 = std::array<double, 3>;

struct ImmersedSurface {
  CylinderGrid grid;
  std::vector<Vec3> points;
  std::vector<Vec3> Xx, Xy;      // coordinate derivatives from the spinor
  std::vector<double> D;         // |ψ1|² + |ψ2|²
  std::vector<double> H;         // 2U/D
  std::vector<double> H_geom;    // ⟨ΔX, n⟩/(2D²) from second derivatives of X
  std::vector<double> K;         // -(1/D²) Δ log D; zero on the two end rows
  std::vector<double> potential; // U(x_i)
  std::vector<Vec3> periods;     // ∮ dX over each y circle
  std::size_t base_i = 0, base_j = 0;
};

// Integrates the Weierstrass 1-form: along x on the basepoint column with a
// fourth-order cumulative rule, then along each y circle spectrally. X is zero
// at the grid node nearest the basepoint.
ImmersedSurface immerse(const SpinorField& psi, double x0 = 0.0, double y0 = 0.0);

struct ClosureDiagnostics {
  double period_norm = 0.0;                      // max over circles of |∮ dX|
  double diameter_minus = 0.0, diameter_plus = 0.0;  // images of the end circles
  double decay_minus = 0.0, decay_plus = 0.0;    // fitted e^{-c|x|} exponents of mean_y D
};

ClosureDiagnostics closure_check(const ImmersedSurface& s, double fit_window = 6.0);

// Σ H_geom² D² dx dy (trapezoid in x, periodic in y).
double willmore_mesh(const ImmersedSurface& s);
// 8π ∫ U² dx.
double willmore_potential(const GridPotential& U);

struct IdentityDefects {
  double conformal = 0.0;       // max |⟨X_x, X_y⟩|, ||X_x|² - |X_y|²| over D²
  double metric = 0.0;          // max ||X_x|² - D²| / D²
  double mean_curvature = 0.0;  // max |H_geom D - 2U|
  double gauss_bonnet = 0.0;    // Σ K D² dx dy
};

// First fundamental form from finite differences of the integrated points.
// Checked on nodes with D >= region_floor · max D, away from the two
// collapsing ends where the positions carry no relative precision.
IdentityDefects identity_defects(const ImmersedSurface& s, double region_floor = 1e-4);

struct BranchReport {
  std::vector<std::pair<std::size_t, std::size_t>> nodes;  // (i, j) with small envelope-normalized D
  double decay_minus = 0.0, decay_plus = 0.0;
  bool branch_minus = false, branch_plus = false;  // decay faster than e^{-|x|}
};

// A node is flagged when D e^{|x|} < d_floor · max(D e^{|x|}); an end is
// flagged when its fitted decay exponent exceeds 1 + exponent_tol.
BranchReport detect_branch_points(const ImmersedSurface& s, double d_floor = 1e-8, double exponent_tol = 0.25);

struct SphereFit {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.0;
  double residual = 0.0;  // max | |X - c| - r | / r
};
SphereFit fit_sphere(const std::vector<Vec3>& points);

// Axis through the circle centroids (principal direction); returns the largest
// spread over a circle of the distance to that axis.
double revolution_defect(const ImmersedSurface& s);

struct SpinorRecovery {
  SpinorField field;              // ψ up to sign, continuous along the grid
  std::vector<double> potential;  // U = H D / 2 per node
  std::vector<bool> flagged;      // ∂X³ ≈ 0
};

// ψ1 = sqrt(-∂Φ), ψ2 = sqrt(∂̄Φ), Φ = X² + iX¹, from the points only.
// Throws validation "not_immersed" for a degenerate (constant) surface.
SpinorRecovery spinor_from_immersion(const ImmersedSurface& s);

}  // namespace soliton
