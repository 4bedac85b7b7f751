#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace soliton {

using cplx = std::complex<double>;

// Uniform 1-D grid x_i = x0 + i*dx, i = 0..n-1.
struct Grid1D {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t n = 0;

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double xmax() const { return x(n - 1); }

  // n nodes spanning [xmin, xmax] inclusive. Requires n >= 2 and xmax > xmin.
  static Grid1D span(double xmin, double xmax, std::size_t n);
  // Nodes xmin, xmin+dx, ... up to xmax (xmax must be a whole number of steps).
  static Grid1D with_step(double xmin, double xmax, double dx);

  bool same_as(const Grid1D& other, double tol = 1e-12) const;
};

// Default truncation used by scattering and synthesis: [-20, 20], dx = 1/256.
Grid1D default_potential_grid();

// Real potential U sampled on a uniform grid.
struct GridPotential {
  Grid1D grid;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return grid.x(i); }

  // Largest of |U(x0)|, |U(xmax)|.
  double boundary_magnitude() const;
  // Throws validation error "potential_not_decaying" if boundary_magnitude() >= decay_tol.
  void require_decay(double decay_tol = 1e-8) const;
};

template <class F>
GridPotential sample_potential(const Grid1D& grid, F&& f) {
  GridPotential U{grid, std::vector<double>(grid.n)};
  for (std::size_t i = 0; i < grid.n; ++i) U.values[i] = f(grid.x(i));
  return U;
}

// Potential tables: two delimiter-separated columns x, U (comma or whitespace).
// Lines starting with '#' and a non-numeric header line are skipped.
GridPotential read_potential_table(const std::string& path);
void write_potential_table(const GridPotential& U, const std::string& path);

// Numeric row parser shared by the table readers. Returns false for blank or
// comment lines; throws parameter error "parse_error" on malformed numbers.
bool parse_numeric_row(const std::string& line, std::vector<double>& out);

// Full-precision decimal text for a double (round-trips exactly).
std::string format_double(double v);

// Trapezoid rule over uniformly spaced samples.
double trapezoid(const std::vector<double>& f, double dx);
cplx trapezoid(const std::vector<cplx>& f, double dx);

// Sixth-order central first derivative at interior node i (3 <= i < n-3),
// lower-order one-sided stencils near the ends.
template <class T>
T derivative_at(const std::vector<T>& f, std::size_t i, double dx);

}  // namespace soliton
