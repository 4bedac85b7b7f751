#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "soliton/grid.hpp"
#include "soliton/spectral_data.hpp"

namespace soliton {

// x grid times y in [0, 2π) with ny uniform nodes; node (i, j) is stored at i*ny + j.
struct CylinderGrid {
  Grid1D x;
  std::size_t ny = 256;

  double dy() const;
  double y(std::size_t j) const { return static_cast<double>(j) * dy(); }
  std::size_t size() const { return x.n * ny; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * ny + j; }

  // [-20, 20] with 1024 x nodes, 256 y nodes.
  static CylinderGrid default_grid();
};

// One kernel basis element ψ_j = φ⁺₁(x, κ_j) e^{κ_j y} with its coefficients
// in ψ = Σ coeff ψ_j + star_coeff ψ*_j.
struct LevelTerm {
  cplx kappa;
  std::vector<std::array<cplx, 2>> profile;  // φ⁺₁(x_i, κ_j)
  cplx coeff, star_coeff;
};

struct SpinorField {
  CylinderGrid grid;
  std::vector<cplx> psi1, psi2;
  std::vector<double> potential;  // U(x_i)
  std::vector<LevelTerm> levels;

  // Evaluates the level expansion at x node i and arbitrary y.
  std::array<cplx, 2> at(std::size_t i, double y) const;
  // Coefficient vector a ∈ C^{2L}: (coeff_1..coeff_L, star_coeff_1..star_coeff_L).
  std::vector<cplx> coefficients() const;
};

// Poles of the form i(2n+1)/2 (within tol), in data order.
std::vector<std::size_t> level_indices(const SpectralData& data, double tol = 1e-9);

// L = number of half-odd-integer levels = dim_H Ker D.
int kernel_dimension(const SpectralData& data);

struct SpinorOptions {
  // Off only for diagnostics: uses every pole, level or not.
  bool require_levels = true;
};

// ψ = Σ a_j ψ_j + a_{L+j} ψ*_j over the levels of the data. Basis profiles come
// from the closed form for reflectionless data, otherwise from Jost
// integration of U (φ⁺₁ right of the bound state's peak, φ⁻₂/μ left of it).
// Throws validation "not_a_level" for a non-level pole, parameter "zero_coefficients"
// for a = 0 and "coefficient_count" for a length other than 2L.
SpinorField build_spinor(const SpectralData& data, const GridPotential& U, const std::vector<cplx>& coeffs,
                         std::size_t ny = 256, const SpinorOptions& opt = {});

// ψ* = (conj ψ2, -conj ψ1); level coefficients (a, b) -> (-conj b, conj a).
SpinorField star_transform(const SpinorField& psi);

// λψ + μψ*; level coefficients (a, b) -> (λa - μ conj b, λb + μ conj a).
// Throws parameter "zero_rotation" when λ = μ = 0.
SpinorField rotate_frame(const SpinorField& psi, cplx lambda, cplx mu);

// max |∂ψ2 + Uψ1|, |-∂̄ψ1 + Uψ2| over interior x nodes, relative to max |ψ|.
// ∂y spectral (after removing the e^{iy/2} twist), ∂x sixth-order differences.
double dirac_residual(const SpinorField& psi);

// Largest y-frequency content of ψ e^{-iy/2} off the integers, relative to the
// total: zero for antiperiodic fields.
double antiperiodicity_defect(const SpinorField& psi);

// The real 3×3 block of the rotation/homothety action: ∂X_{λ,μ} = ρ ∂X_{1,0}
// for Ψ = λψ + μψ*.
Eigen::Matrix3d rho_matrix(cplx lambda, cplx mu);
// ρ for (λ, μ) normalized to |λ|² + |μ|² = 1, orthonormalized by Gram-Schmidt.
Eigen::Matrix3d rho_rotation(cplx lambda, cplx mu);

// True iff the support of coeffs lies in one pair {j, j+L}. Throws parameter
// "coefficient_count" if coeffs.size() != 2L.
bool is_revolution(const std::vector<cplx>& coeffs, int L);

// Plane representation Ψ1 = e^{-(x+iy)/2} ψ1, Ψ2 = e^{-(x-iy)/2} ψ2 at Z = e^{x+iy}.
struct PlaneField {
  CylinderGrid grid;
  std::vector<cplx> Z, Psi1, Psi2;
};
PlaneField to_plane(const SpinorField& psi);

// max |Ψ(y=0) - Ψ(y=2π)| over x (level expansion evaluated at both ends).
double plane_single_valuedness(const SpinorField& psi);

// e^{x} D averaged over y on the last rows toward +inf: estimates C+ of
// |Ψ|² |Z|² -> C+; spread is the relative variation across those rows.
struct PlaneDecay {
  double c_plus = 0.0;
  double spread = 0.0;
};
PlaneDecay plane_decay(const SpinorField& psi, double window = 3.0);

// Parses "re,im;re,im;...".
std::vector<cplx> parse_coefficients(const std::string& text);

}  // namespace soliton
