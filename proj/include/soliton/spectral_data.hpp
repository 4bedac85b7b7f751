#pragma once

#include <optional>
#include <string>
#include <vector>

#include "soliton/grid.hpp"

namespace soliton {

// Sampled reflection coefficient R(k) on real nonzero k, ascending.
struct ReflectionTable {
  std::vector<double> k;
  std::vector<cplx> R;
};

// Inverse-scattering input: poles κ_j (Im κ_j > 0), norming constants λ_j,
// and an optional sampled reflection coefficient (absent = reflectionless).
struct SpectralData {
  std::vector<cplx> poles;
  std::vector<cplx> normings;
  std::optional<ReflectionTable> reflection;

  std::size_t size() const { return poles.size(); }
  bool reflectionless() const { return !reflection.has_value(); }
};

// Pole κ = i(2n+1)/2.
struct HalfIntegerLevel {
  int n = 0;
  cplx kappa() const { return {0.0, (2.0 * n + 1.0) / 2.0}; }
  // Level index if kappa is i(2n+1)/2 within tol, otherwise nullopt.
  static std::optional<HalfIntegerLevel> match(cplx kappa, double tol = 1e-9);
};

struct Violation {
  std::string rule;  // "upper_half_plane", "distinct_poles", "nonzero_norming", "R1_pairing", "R1_real_norming", "R2_conjugate_symmetry"
  int index = -1;    // offending pole or table row
  double residual = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

constexpr double kEpsRealExact = 1e-12;
constexpr double kEpsRealNumerical = 1e-8;
constexpr double kPoleDistinctTol = 1e-10;

// Checks every SpectralData invariant. Mismatched list lengths throw a
// parameter error with code "structural" instead of producing a report.
ValidationReport validate(const SpectralData& data, double eps_real = kEpsRealExact);

// mKdV flow of order m: λ_j -> λ_j exp(i 2^{2m-1} κ_j t), R(k) -> R(k) exp(i 2^{2m-1} k t).
SpectralData mkdv_deform(const SpectralData& data, int m, double t);

// Projects numerically obtained data onto R1: imaginary-axis norming constants
// made real, symmetric pairs averaged to exact conjugates. Pairs are matched
// within pair_tol.
SpectralData enforce_reality(const SpectralData& data, double pair_tol = 1e-6);

// Text format "solitonspec v1"; see README. Reflection tables are written next
// to the spec file as <stem>.reflection.csv and referenced relatively.
SpectralData load_spectral_data(const std::string& path);
void save_spectral_data(const SpectralData& data, const std::string& path);

ReflectionTable read_reflection_table(const std::string& path);
void write_reflection_table(const ReflectionTable& table, const std::string& path);

}  // namespace soliton
