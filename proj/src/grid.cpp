#include "soliton/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

Grid1D Grid1D::span(double xmin, double xmax, std::size_t n) {
  if (n < 2) fail(ErrorKind::parameter, "grid_too_small", "grid needs at least 2 nodes");
  if (!(xmax > xmin)) fail(ErrorKind::parameter, "grid_bounds", "grid requires xmax > xmin");
  return Grid1D{xmin, (xmax - xmin) / static_cast<double>(n - 1), n};
}

Grid1D Grid1D::with_step(double xmin, double xmax, double dx) {
  if (!(dx > 0.0)) fail(ErrorKind::parameter, "grid_step", "grid step must be positive");
  double steps = (xmax - xmin) / dx;
  auto n = static_cast<std::size_t>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps)) {
    fail(ErrorKind::parameter, "grid_step", "interval is not a whole number of steps");
  }
  return span(xmin, xmax, n + 1);
}

bool Grid1D::same_as(const Grid1D& other, double tol) const {
  return n == other.n && std::abs(x0 - other.x0) <= tol * std::max(1.0, std::abs(x0)) &&
         std::abs(dx - other.dx) <= tol * dx;
}

Grid1D default_potential_grid() { return Grid1D::with_step(-20.0, 20.0, 1.0 / 256.0); }

double GridPotential::boundary_magnitude() const {
  if (values.empty()) return 0.0;
  return std::max(std::abs(values.front()), std::abs(values.back()));
}

void GridPotential::require_decay(double decay_tol) const {
  double m = boundary_magnitude();
  if (!(m < decay_tol)) {
    std::ostringstream os;
    os << "potential does not decay at the truncation boundary: |U| = " << m
       << " >= decay_tol = " << decay_tol;
    fail(ErrorKind::validation, "potential_not_decaying", os.str());
  }
}

bool parse_numeric_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::string s = line;
  for (char& c : s) {
    if (c == ',' || c == ';' || c == '\t') c = ' ';
  }
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    if (out.empty() && tok[0] == '#') return false;
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      fail(ErrorKind::parameter, "parse_error", "not a number: '" + tok + "'");
    }
    out.push_back(v);
  }
  return !out.empty();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridPotential read_potential_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "io_error", "cannot open potential table: " + path);
  std::vector<double> xs, us, row;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    try {
      if (!parse_numeric_row(line, row)) continue;
    } catch (const Error&) {
      if (xs.empty()) continue;  // header line
      fail(ErrorKind::parameter, "parse_error",
           path + ":" + std::to_string(lineno) + ": malformed row");
    }
    if (row.size() < 2) {
      fail(ErrorKind::parameter, "parse_error",
           path + ":" + std::to_string(lineno) + ": expected columns x, U");
    }
    xs.push_back(row[0]);
    us.push_back(row[1]);
  }
  if (xs.size() < 2) fail(ErrorKind::parameter, "parse_error", path + ": fewer than 2 rows");
  Grid1D g = Grid1D::span(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - g.x(i)) > 1e-6 * g.dx) {
      fail(ErrorKind::parameter, "nonuniform_grid",
           path + ":" + std::to_string(i + 1) + ": x column is not uniformly spaced");
    }
  }
  return GridPotential{g, us};
}

void write_potential_table(const GridPotential& U, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "io_error", "cannot write potential table: " + path);
  out << "x,U\n";
  for (std::size_t i = 0; i < U.size(); ++i) {
    out << format_double(U.x(i)) << ',' << format_double(U.values[i]) << '\n';
  }
  if (!out) fail(ErrorKind::io, "io_error", "write failed: " + path);
}

double trapezoid(const std::vector<double>& f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

cplx trapezoid(const std::vector<cplx>& f, double dx) {
  if (f.size() < 2) return 0.0;
  cplx s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

template <class T>
T derivative_at(const std::vector<T>& f, std::size_t i, double dx) {
  const std::size_t n = f.size();
  if (i >= 3 && i + 3 < n) {
    return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] +
            f[i + 3]) /
           (60.0 * dx);
  }
  if (i >= 1 && i + 1 < n) return (f[i + 1] - f[i - 1]) / (2.0 * dx);
  if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
}

template double derivative_at<double>(const std::vector<double>&, std::size_t, double);
template cplx derivative_at<cplx>(const std::vector<cplx>&, std::size_t, double);

}  // namespace soliton
