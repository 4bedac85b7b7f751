#include "soliton/spectral_data.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

double scale_of(cplx z) { return std::max(1.0, std::abs(z)); }

bool on_imaginary_axis(cplx kappa, double eps) { return std::abs(kappa.real()) <= eps * scale_of(kappa); }

std::string where(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::optional<HalfIntegerLevel> HalfIntegerLevel::match(cplx kappa, double tol) {
  if (std::abs(kappa.real()) > tol) return std::nullopt;
  double twice = 2.0 * kappa.imag();
  double odd = std::round(twice);
  if (odd < 1.0 || std::abs(twice - odd) > 2.0 * tol) return std::nullopt;
  auto o = static_cast<long>(odd);
  if (o % 2 == 0) return std::nullopt;
  return HalfIntegerLevel{static_cast<int>((o - 1) / 2)};
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.rule;
    if (v.index >= 0) os << " [" << v.index << "]";
    os << ": " << v.message << " (residual " << v.residual << ")\n";
  }
  return os.str();
}

ValidationReport validate(const SpectralData& data, double eps_real) {
  if (data.poles.size() != data.normings.size()) {
    fail(ErrorKind::parameter, "structural",
         "poles and norming constants differ in length (" + std::to_string(data.poles.size()) +
             " vs " + std::to_string(data.normings.size()) + ")");
  }
  if (data.reflection && data.reflection->k.size() != data.reflection->R.size()) {
    fail(ErrorKind::parameter, "structural", "reflection table columns differ in length");
  }

  ValidationReport rep;
  auto add = [&](std::string rule, int idx, double res, std::string msg) {
    rep.violations.push_back({std::move(rule), idx, res, std::move(msg)});
  };

  const auto n = static_cast<int>(data.poles.size());
  for (int j = 0; j < n; ++j) {
    const cplx kj = data.poles[j];
    if (!(kj.imag() > 0.0)) {
      add("upper_half_plane", j, kj.imag(), "Im kappa must be positive");
    }
    if (data.normings[j] == cplx(0.0, 0.0)) {
      add("nonzero_norming", j, 0.0, "lambda = 0 deletes the bound state");
    }
    for (int l = j + 1; l < n; ++l) {
      double d = std::abs(kj - data.poles[l]);
      if (d <= kPoleDistinctTol) {
        add("distinct_poles", l, d, "pole coincides with pole " + std::to_string(j));
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    const cplx kj = data.poles[j];
    const cplx lj = data.normings[j];
    if (on_imaginary_axis(kj, eps_real)) {
      double res = std::abs(lj.imag());
      if (res > eps_real * scale_of(lj)) {
        add("R1_real_norming", j, res, "Re kappa = 0 requires lambda real");
      }
      continue;
    }
    int partner = -1;
    double best = INFINITY;
    for (int l = 0; l < n; ++l) {
      if (l == j) continue;
      double d = std::abs(data.poles[l] + std::conj(kj));
      if (d < best) {
        best = d;
        partner = l;
      }
    }
    if (partner < 0 || best > eps_real * scale_of(kj)) {
      add("R1_pairing", j, best, "pole has no mirror partner -conj(kappa)");
      continue;
    }
    double res = std::abs(lj - std::conj(data.normings[partner]));
    if (res > eps_real * scale_of(lj)) {
      add("R1_pairing", j, res,
          "lambda must equal conj(lambda) of mirror pole " + std::to_string(partner));
    }
  }

  if (data.reflection) {
    const auto& t = *data.reflection;
    const auto m = static_cast<int>(t.k.size());
    for (int i = 0; i < m; ++i) {
      if (t.k[i] == 0.0) add("reflection_grid", i, 0.0, "reflection sampled at k = 0");
      if (i > 0 && !(t.k[i] > t.k[i - 1])) {
        add("reflection_grid", i, t.k[i] - t.k[i - 1], "reflection k column not strictly ascending");
      }
    }
    for (int i = 0; i <= (m - 1) / 2; ++i) {
      int mirror = m - 1 - i;
      double kd = std::abs(t.k[i] + t.k[mirror]);
      if (kd > 1e-9 * std::max(1.0, std::abs(t.k[i]))) {
        add("R2_conjugate_symmetry", i, kd, "reflection grid is not symmetric about k = 0");
        break;
      }
      double res = std::abs(t.R[i] - std::conj(t.R[mirror]));
      if (res > eps_real * scale_of(t.R[i])) {
        add("R2_conjugate_symmetry", i, res, "R(k) must equal conj(R(-k))");
      }
    }
  }
  return rep;
}

SpectralData mkdv_deform(const SpectralData& data, int m, double t) {
  if (m < 1) fail(ErrorKind::parameter, "flow_order", "mKdV flow order m must be >= 1");
  if (m > 26) fail(ErrorKind::parameter, "flow_order", "mKdV flow order m too large");
  const double c = std::ldexp(1.0, 2 * m - 1);
  SpectralData out = data;
  const cplx I(0.0, 1.0);
  for (std::size_t j = 0; j < out.poles.size(); ++j) {
    out.normings[j] *= std::exp(I * c * out.poles[j] * t);
  }
  if (out.reflection) {
    auto& tab = *out.reflection;
    for (std::size_t i = 0; i < tab.k.size(); ++i) tab.R[i] *= std::exp(I * (c * tab.k[i] * t));
  }
  return out;
}

SpectralData enforce_reality(const SpectralData& data, double pair_tol) {
  SpectralData out = data;
  const auto n = out.poles.size();
  std::vector<bool> done(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (done[j]) continue;
    cplx kj = out.poles[j];
    if (std::abs(kj.real()) <= pair_tol) {
      out.poles[j] = {0.0, kj.imag()};
      out.normings[j] = {out.normings[j].real(), 0.0};
      done[j] = true;
      continue;
    }
    for (std::size_t l = j + 1; l < n; ++l) {
      if (done[l] || std::abs(out.poles[l] + std::conj(kj)) > pair_tol) continue;
      cplx k = 0.5 * (kj - std::conj(out.poles[l]));
      cplx lam = 0.5 * (out.normings[j] + std::conj(out.normings[l]));
      out.poles[j] = k;
      out.poles[l] = -std::conj(k);
      out.normings[j] = lam;
      out.normings[l] = std::conj(lam);
      done[j] = done[l] = true;
      break;
    }
  }
  if (out.reflection) {
    auto& t = *out.reflection;
    const std::size_t m = t.k.size();
    std::vector<cplx> R = t.R;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t mirror = m - 1 - i;
      if (std::abs(t.k[i] + t.k[mirror]) <= 1e-9 * std::max(1.0, std::abs(t.k[i]))) {
        R[i] = 0.5 * (t.R[i] + std::conj(t.R[mirror]));
      }
    }
    t.R = std::move(R);
  }
  return out;
}

ReflectionTable read_reflection_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "io_error", "cannot open reflection table: " + path);
  ReflectionTable t;
  std::vector<double> row;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    try {
      if (!parse_numeric_row(line, row)) continue;
    } catch (const Error&) {
      if (t.k.empty()) continue;  // header line
      fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "malformed row");
    }
    if (row.size() < 3) {
      fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "expected columns k, Re R, Im R");
    }
    t.k.push_back(row[0]);
    t.R.emplace_back(row[1], row[2]);
  }
  return t;
}

void write_reflection_table(const ReflectionTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "io_error", "cannot write reflection table: " + path);
  out << "k,ReR,ImR\n";
  for (std::size_t i = 0; i < table.k.size(); ++i) {
    out << format_double(table.k[i]) << ',' << format_double(table.R[i].real()) << ','
        << format_double(table.R[i].imag()) << '\n';
  }
  if (!out) fail(ErrorKind::io, "io_error", "write failed: " + path);
}

SpectralData load_spectral_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "io_error", "cannot open spectral data file: " + path);

  SpectralData data;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  bool reflection_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    std::string word;
    if (!(is >> word) || word[0] == '#') continue;
    if (!header) {
      std::string version;
      if (word != "solitonspec" || !(is >> version) || version != "v1") {
        fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "expected header 'solitonspec v1'");
      }
      header = true;
      continue;
    }
    if (reflection_seen) {
      fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "content after reflection line");
    }
    if (word == "pole") {
      double kr, ki, lr, li;
      std::string tag, extra;
      if (!(is >> kr >> ki >> tag >> lr >> li) || tag != "lambda" || (is >> extra)) {
        fail(ErrorKind::parameter, "parse_error",
             where(path, lineno) + "expected 'pole <Re k> <Im k> lambda <Re l> <Im l>'");
      }
      if (!(ki > 0.0)) {
        fail(ErrorKind::validation, "upper_half_plane",
             where(path, lineno) + "Im kappa must be positive (poles lie in the upper half-plane)");
      }
      data.poles.emplace_back(kr, ki);
      data.normings.emplace_back(lr, li);
    } else if (word == "reflection") {
      std::string mode;
      if (!(is >> mode)) fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "missing reflection mode");
      if (mode == "none") {
        std::string extra;
        if (is >> extra) fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "unexpected token after 'none'");
      } else if (mode == "table") {
        std::string rel;
        if (!(is >> rel)) fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "missing table path");
        std::filesystem::path p(rel);
        if (p.is_relative()) p = std::filesystem::path(path).parent_path() / p;
        data.reflection = read_reflection_table(p.string());
      } else {
        fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "reflection mode must be 'none' or 'table'");
      }
      reflection_seen = true;
    } else {
      fail(ErrorKind::parameter, "parse_error", where(path, lineno) + "unknown keyword '" + word + "'");
    }
  }
  if (!header) fail(ErrorKind::parameter, "parse_error", path + ": missing header 'solitonspec v1'");
  if (!reflection_seen) fail(ErrorKind::parameter, "parse_error", path + ": missing trailing reflection line");
  return data;
}

void save_spectral_data(const SpectralData& data, const std::string& path) {
  if (data.poles.size() != data.normings.size()) {
    fail(ErrorKind::parameter, "structural", "poles and norming constants differ in length");
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "io_error", "cannot write spectral data file: " + path);
  out << "solitonspec v1\n";
  for (std::size_t j = 0; j < data.poles.size(); ++j) {
    out << "pole " << format_double(data.poles[j].real()) << ' ' << format_double(data.poles[j].imag())
        << " lambda " << format_double(data.normings[j].real()) << ' '
        << format_double(data.normings[j].imag()) << '\n';
  }
  if (data.reflection) {
    std::filesystem::path p(path);
    std::string table_name = p.stem().string() + ".reflection.csv";
    write_reflection_table(*data.reflection, (p.parent_path() / table_name).string());
    out << "reflection table " << table_name << '\n';
  } else {
    out << "reflection none\n";
  }
  if (!out) fail(ErrorKind::io, "io_error", "write failed: " + path);
}

}  // namespace soliton
