#pragma once

#include <array>
#include <string>
#include <vector>

#include "soliton/grid.hpp"
#include "soliton/spectral_data.hpp"

namespace soliton {

// Jost solutions of φ1' = -ik φ1 + 2U φ2, φ2' = ik φ2 - 2U φ1.
//   plus_col1  -> (0, e^{ikx})   as x -> +inf     minus_col1 -> (0, e^{ikx})   as x -> -inf
//   plus_col2  -> (e^{-ikx}, 0)  as x -> +inf     minus_col2 -> (e^{-ikx}, 0)  as x -> -inf
enum class JostKind { plus_col1, plus_col2, minus_col1, minus_col2 };

const char* jost_kind_name(JostKind kind);

using Spinor2 = std::array<cplx, 2>;

struct JostField {
  JostKind kind = JostKind::plus_col1;
  cplx k;
  Grid1D grid;
  std::vector<Spinor2> samples;
};

// Integrates from the truncation boundary (right end for plus kinds, left end
// for minus kinds) with free-wave data. plus_col1 and minus_col2 accept
// Im k >= 0 (analytic continuation), plus_col2 and minus_col1 accept Im k <= 0.
JostField jost_solve(const GridPotential& U, cplx k, JostKind kind);

// Max over interior nodes of |φ' - F(φ)| (sixth-order differences), divided by max |φ|.
double ode_residual(const GridPotential& U, const JostField& f);

struct WronskianSamples {
  std::vector<cplx> values;
  cplx mean;
  double max_deviation = 0.0;  // max |W - mean|
  double std_dev = 0.0;        // RMS of |W - mean|
};

// W = f1 g2 - f2 g1 per node.
WronskianSamples wronskian(const JostField& f, const JostField& g);

struct BoundState {
  cplx kappa;
  cplx gamma;   // residue of T = 1/a at kappa
  cplx mu;      // φ⁻₂ = mu φ⁺₁ at kappa
  cplx lambda;  // i gamma mu
};

struct ScatteringReport {
  std::vector<double> k;
  std::vector<cplx> a, b, T, R;
  std::vector<BoundState> discrete;

  double max_unitarity_defect() const;
  // Spectral data carried by the report (reflection table = R on the k grid).
  SpectralData spectral_data() const;
};

struct ScatteringOptions {
  double wronskian_tol = 1e-8;  // relative constancy guard
};

// a = -W(φ⁺₁, φ⁻₂) (so a = 1 for U = 0), b = W(φ⁺₂, φ⁻₂), T = 1/a, R = b/a.
ScatteringReport scattering_coefficients(const GridPotential& U, const std::vector<double>& k_grid,
                                         const ScatteringOptions& opt = {});

// a(k) for Im k >= 0 without storing fields.
cplx transmission_inverse(const GridPotential& U, cplx k);

struct SearchBox {
  double re_min = -10.0, re_max = 10.0;
  double im_min = 0.05, im_max = 10.5;
};

struct SpectrumOptions {
  double root_tol = 1e-10;
  double fd_step = 1e-6;
  double derivative_floor = 1e-8;
  double sym_tol = 1e-6;
  double axis_step = 0.05;   // imaginary-axis scan spacing
  double contour_step = 0.25;  // initial boundary sampling for zero counts
};

struct SpectrumResult {
  std::vector<BoundState> states;
  int argument_count = 0;  // zeros of a inside the box by the argument principle
};

SpectrumResult discrete_spectrum(const GridPotential& U, const SearchBox& box = {},
                                 const SpectrumOptions& opt = {});

// Number of zeros of a(k) inside the box (winding number of a along the boundary).
int argument_principle_count(const GridPotential& U, const SearchBox& box);

// k_j = (j + 1/2) dk - kmax for j = 0..n-1: symmetric about 0, never hits k = 0.
std::vector<double> symmetric_k_grid(double kmax, std::size_t n);

std::string scattering_report_json(const ScatteringReport& rep);
ScatteringReport scattering_report_from_json(const std::string& text);

}  // namespace soliton
