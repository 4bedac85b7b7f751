#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "soliton/grid.hpp"
#include "soliton/spectral_data.hpp"

namespace soliton {

// Ω(z) = r(z) - Σ λ_j e^{iκ_j z}, with r(z) = (1/2π) ∫ R(k) e^{ikz} dk.
// The discrete part is evaluated exactly; the reflection part is sampled on
// a z grid and interpolated with a quintic B-spline (zero beyond the grid's
// right end, where it has decayed).
class MarchenkoKernel {
 public:
  MarchenkoKernel() = default;

  double omega(double z) const;
  double discrete_part(double z) const;
  double reflection_part(double z) const;

  const Grid1D& z_grid() const { return z_grid_; }
  std::vector<double> omega_samples() const;
  bool has_reflection() const { return !r_.empty(); }
  // Largest |Im Ω| seen while building (discarded afterwards).
  double imaginary_residual() const { return imag_residual_; }

  const std::vector<cplx>& poles() const { return poles_; }
  const std::vector<cplx>& normings() const { return normings_; }

  // Kernel of the mirrored data (potential U(-x)), built alongside.
  const MarchenkoKernel* mirror() const { return mirror_.get(); }

 private:
  friend struct KernelBuilder;
  std::vector<cplx> poles_, normings_;
  Grid1D z_grid_;
  std::vector<double> r_;
  std::shared_ptr<const std::function<double(double)>> spline_;
  double imag_residual_ = 0.0;
  std::shared_ptr<const MarchenkoKernel> mirror_;
};

// Spectral data of the mirrored potential U(-x): same poles, norming constants
// -γ_j²/λ_j with γ_j = 1/a'(κ_j), reflection conj(b)/a. a(k) is rebuilt from
// the data by the dispersion relation, which needs a uniform reflection table.
SpectralData mirror_data(const SpectralData& data);

// a(k) rebuilt from spectral data: Blaschke product over the poles times
// exp((1/2πi) ∫ log(1 - |b(s)|²)/(s - k) ds). Off the real axis only.
cplx transmission_inverse_from_data(const SpectralData& data, cplx k);

// Builds the kernel and the mirrored kernel on the same z grid.
// Throws parameter "reflection_resolution" when the k spacing of the
// reflection table aliases within the z range (π/dk < max |z|), and
// validation "kernel_not_real" when |Im Ω| exceeds 1e-10.
MarchenkoKernel build_kernel(const SpectralData& data, const Grid1D& z_grid);

// z grid covering every argument Ω (or its mirror) is evaluated at when
// recovering on [xmin, xmax] with the given truncation span.
Grid1D kernel_grid_for(double xmin, double xmax, double span = 40.0, double dz = 1.0 / 128.0);

struct MarchenkoOptions {
  double span = 40.0;         // ∫_x^∞ truncated at x + span
  double panel_width = 2.5;   // composite 16-point Gauss-Legendre panels
  double cond_max = 1e6;
};

// Nyström solution of the Marchenko system at one x on Gauss nodes y_j in
// [x, x + span]. B1, B2 at any y >= x follow from the Nyström interpolant.
struct MarchenkoRow {
  double x = 0.0;
  std::vector<double> nodes, weights;
  std::vector<double> b1, b2;  // nodal values
  double condition = 1.0;      // 1-norm condition estimate of the linear system
  double residual = 0.0;       // max abs residual of the discrete equations

  double B1(const MarchenkoKernel& K, double y) const;
  double B2(const MarchenkoKernel& K, double y) const;
};

// Throws numerical "ill_posed" if the condition estimate exceeds cond_max and
// parameter "z_range" if 2x lies left of the kernel grid.
MarchenkoRow solve_marchenko(const MarchenkoKernel& K, double x, const MarchenkoOptions& opt = {});

struct RecoveryStats {
  double max_condition = 0.0;
  double max_residual = 0.0;
};

// U(x_i) = -B1(x_i, x_i). Nodes with x < 0 are solved on the mirrored kernel
// at -x: the right-sided equations grow ill-conditioned like e^{-2 Im κ x}
// as x -> -inf, the mirrored ones stay near the identity there.
GridPotential recover_potential(const MarchenkoKernel& K, const Grid1D& grid, const MarchenkoOptions& opt = {},
                                RecoveryStats* stats = nullptr);

// B1, B2 on the triangle y = x_i + m h, m = 0..m_count-1, with h = grid.dx.
struct GoursatPair {
  Grid1D grid;
  std::size_t m_count = 0;
  std::vector<double> B1, B2;  // index i * m_count + m

  double b1(std::size_t i, std::size_t m) const { return B1[i * m_count + m]; }
  double b2(std::size_t i, std::size_t m) const { return B2[i * m_count + m]; }
};

GoursatPair goursat_pair(const MarchenkoKernel& K, const Grid1D& grid, std::size_t m_count,
                         const MarchenkoOptions& opt = {});

struct GoursatResiduals {
  double r18 = 0.0;  // ∂B1/∂y - ∂B1/∂x + 2U B2
  double r20 = 0.0;  // ∂B2/∂x + ∂B2/∂y + 2U B1
  double r21 = 0.0;  // d B2(x,x)/dx - 2U²
};

// Central differences on the triangle; U must live on the pair's x grid.
// Throws parameter "grid_too_coarse" with fewer than 5 nodes in either direction.
GoursatResiduals goursat_residual(const GoursatPair& pair, const GridPotential& U);

// |∫ 2U² dx - (B2(xmax, xmax) - B2(x0, x0))| over U's grid. For x < 0 the
// mirrored kernel supplies the B2 values.
double energy_identity_defect(const MarchenkoKernel& K, const GridPotential& U, const MarchenkoOptions& opt = {});

}  // namespace soliton
