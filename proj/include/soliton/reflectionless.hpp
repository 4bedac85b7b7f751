#pragma once

#include <Eigen/Dense>

#include "soliton/grid.hpp"
#include "soliton/scattering.hpp"
#include "soliton/spectral_data.hpp"

namespace soliton {

constexpr double kDetFloor = 1e-13;
constexpr double kPoleFloor = 1e-8;
constexpr std::size_t kMaxSolitons = 16;

// M_jk(x) = λ_k / (i(κ_j + κ_k)) · e^{i(κ_j + κ_k) x}.
Eigen::MatrixXcd kernel_matrix(const SpectralData& data, double x);

// U(x) = d/dx Im log det(1 + iM(x)), evaluated without differentiation as
// Re(1ᵀ Λ G⁻¹ 1) with G = diag(e^{-2iκ_j x}) + i C Λ, C_jk = 1/(i(κ_j + κ_k)).
// Throws numerical "singular_synthesis" where |det(1 + iM)| < det_floor.
GridPotential potential_from_data(const SpectralData& data, const Grid1D& grid, double det_floor = kDetFloor);
double potential_at(const SpectralData& data, double x, double det_floor = kDetFloor);

// Max over the grid of |Im| of the potential computed by the independent
// kernel route U = 1ᵀ Λ G₋⁻¹ E G₊⁻¹ 1; zero up to rounding when the data obey
// the reality conditions.
double potential_imaginary_part(const SpectralData& data, const Grid1D& grid);

// φ⁺₁(x, k) in closed form. Throws numerical "near_pole" if |κ_j + k| < pole_floor.
JostField jost_from_data(const SpectralData& data, cplx k, const Grid1D& grid, double pole_floor = kPoleFloor);

// Poles i(2j-1)/2, j = 1..N, with norming constants (N+j-1)! / ((N-j)! ((j-1)!)²)
// reproducing N/(2 cosh x). The synthesized potential is checked against the
// closed form on the default grid; a residual above 1e-8 throws numerical
// "calibration" with the achieved residual in the message.
SpectralData dirac_sphere_data(int N);

}  // namespace soliton
