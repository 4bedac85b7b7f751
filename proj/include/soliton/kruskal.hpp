#pragma once

#include <vector>

#include "soliton/grid.hpp"
#include "soliton/scattering.hpp"
#include "soliton/spectral_data.hpp"

namespace soliton {

constexpr int kMaxKruskalOrder = 8;

// q_1 = U, q_{j+1} = -i q_j' - 4U Σ_{m=1}^{j-1} q_m q_{j-m}, differentiated
// spectrally. U is first multiplied by a smooth window that vanishes to
// machine precision at both grid ends, so the periodic extension is smooth;
// modes above the resolved band of U are dropped after each derivative.
// Throws parameter "kruskal_order" for n < 1 or n > 8.
std::vector<std::vector<cplx>> q_sequence(const GridPotential& U, int n);

// I_n = ∫ U q_n dx (trapezoid).
cplx kruskal_integral(const GridPotential& U, int n);

// Right-hand side of the trace formula,
//   -(1/4π) ∫ log(1 - |b|²) (-2k)^{n-1} dk + (i 2^{n-2}/n) Σ (conj(κ_j)^n - κ_j^n).
// For spectral data |b|² = |R|²/(1 + |R|²). Throws validation
// "invalid_scattering" if |b| >= 1 at a grid point.
cplx trace_rhs(const SpectralData& data, int n);
cplx trace_rhs(const ScatteringReport& report, int n);

struct KruskalReport {
  int n_max = 0;
  std::vector<cplx> I, I_trace;
  std::vector<double> residual;       // |I_n - I_trace_n|
  std::vector<bool> imaginary_flag;   // odd n with |Im I_n| >= 1e-10
};

KruskalReport kruskal_report(const GridPotential& U, const SpectralData& data, int n_max);

}  // namespace soliton
