#include "commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "soliton/errors.hpp"
#include "soliton/kruskal.hpp"
#include "soliton/marchenko.hpp"
#include "soliton/mesh_io.hpp"
#include "soliton/reflectionless.hpp"
#include "soliton/scattering.hpp"
#include "soliton/spectral_data.hpp"
#include "soliton/spinor.hpp"
#include "soliton/surface.hpp"

namespace solitonsphere {

using namespace soliton;
using ojson = nlohmann::ordered_json;

namespace {

struct Settings {
  std::string tol_profile = "default";
  double tol_scale() const { return tol_profile == "strict" ? 0.1 : 1.0; }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "io_error", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) fail(ErrorKind::io, "io_error", "cannot write " + path);
  f << text;
  if (!f) fail(ErrorKind::io, "io_error", "write failed: " + path);
}

std::string potential_text(const GridPotential& U) {
  std::ostringstream os;
  os << "x,U\n";
  for (std::size_t i = 0; i < U.size(); ++i) os << format_double(U.x(i)) << ',' << format_double(U.values[i]) << '\n';
  return os.str();
}

ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

// Reflectionless data by closed form, anything else through the Marchenko equations.
GridPotential synthesize(const SpectralData& data, const Grid1D& grid) {
  if (data.reflectionless()) return potential_from_data(data, grid);
  const auto K = build_kernel(data, kernel_grid_for(grid.x0, grid.xmax()));
  return recover_potential(K, grid);
}

ScatteringReport full_scattering(const GridPotential& U, double kmax, std::size_t nk, double tol_scale) {
  ScatteringOptions sopt;
  sopt.wronskian_tol *= tol_scale;
  SpectrumOptions popt;
  popt.root_tol *= tol_scale;
  auto rep = scattering_coefficients(U, symmetric_k_grid(kmax, nk), sopt);
  rep.discrete = discrete_spectrum(U, {}, popt).states;
  return rep;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral data, potentials and Weierstrass spheres of the 1-D Dirac operator", "solitonsphere"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings settings;
  app.add_option("--tol-profile", settings.tol_profile, "Tolerance profile (strict scales tolerances by 0.1)")
      ->check(CLI::IsMember({"strict", "default"}));

  std::function<int()> action;

  // validate
  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a spectral data file");
  validate_cmd->add_option("spec", validate_path, "Spectral data file")->required();
  validate_cmd->callback([&] {
    action = [&] {
      const auto data = load_spectral_data(validate_path);
      const auto report = validate(data, kEpsRealExact * settings.tol_scale());
      if (report.ok()) {
        out << "valid: " << data.size() << " poles, "
            << (data.reflectionless() ? "reflectionless" : "with reflection table") << '\n';
        return 0;
      }
      err << report.summary();
      return 1;
    };
  });

  // potential
  std::string potential_path, potential_out;
  double potential_xmax = 20.0;
  std::size_t potential_nx = 10241;
  auto* potential_cmd = app.add_subcommand("potential", "Synthesize U(x) from spectral data");
  potential_cmd->add_option("spec", potential_path, "Spectral data file")->required();
  potential_cmd->add_option("--xmax", potential_xmax, "Grid is [-xmax, xmax]")->capture_default_str();
  potential_cmd->add_option("--nx", potential_nx, "Number of grid nodes")->capture_default_str();
  potential_cmd->add_option("-o,--output", potential_out, "Output table (default stdout)");
  potential_cmd->callback([&] {
    action = [&] {
      const auto data = load_spectral_data(potential_path);
      const auto grid = Grid1D::span(-potential_xmax, potential_xmax, potential_nx);
      emit(potential_text(synthesize(data, grid)), potential_out, out);
      return 0;
    };
  });

  // scatter
  std::string scatter_path, scatter_out;
  double scatter_kmax = 8.0;
  std::size_t scatter_nk = 1024;
  auto* scatter_cmd = app.add_subcommand("scatter", "Forward scattering of a potential table");
  scatter_cmd->add_option("table", scatter_path, "Potential table (x, U)")->required();
  scatter_cmd->add_option("--kmax", scatter_kmax, "k grid covers (-kmax, kmax)")->capture_default_str();
  scatter_cmd->add_option("--nk", scatter_nk, "Number of k samples")->capture_default_str();
  scatter_cmd->add_option("-o,--output", scatter_out, "Output report (default stdout)");
  scatter_cmd->callback([&] {
    action = [&] {
      const auto U = read_potential_table(scatter_path);
      const auto rep = full_scattering(U, scatter_kmax, scatter_nk, settings.tol_scale());
      emit(scattering_report_json(rep), scatter_out, out);
      return 0;
    };
  });

  // invert
  std::string invert_path, invert_out;
  double invert_xmax = 20.0;
  std::size_t invert_nx = 321;
  auto* invert_cmd = app.add_subcommand("invert", "Recover U(x) from a scattering report");
  invert_cmd->add_option("report", invert_path, "Scattering report (JSON)")->required();
  invert_cmd->add_option("--xmax", invert_xmax, "Grid is [-xmax, xmax]")->capture_default_str();
  invert_cmd->add_option("--nx", invert_nx, "Number of grid nodes")->capture_default_str();
  invert_cmd->add_option("-o,--output", invert_out, "Output table (default stdout)");
  invert_cmd->callback([&] {
    action = [&] {
      const auto rep = scattering_report_from_json(read_text(invert_path));
      const auto data = enforce_reality(rep.spectral_data());
      const auto report = validate(data, kEpsRealNumerical * settings.tol_scale());
      if (!report.ok()) fail(ErrorKind::validation, "invalid_scattering", report.summary());
      const auto grid = Grid1D::span(-invert_xmax, invert_xmax, invert_nx);
      const auto K = build_kernel(data, kernel_grid_for(grid.x0, grid.xmax()));
      emit(potential_text(recover_potential(K, grid)), invert_out, out);
      return 0;
    };
  });

  // kruskal
  std::string kruskal_path, kruskal_spec, kruskal_out;
  int kruskal_nmax = 4;
  auto* kruskal_cmd = app.add_subcommand("kruskal", "Kruskal integrals and trace-formula comparison");
  kruskal_cmd->add_option("table", kruskal_path, "Potential table (x, U)")->required();
  kruskal_cmd->add_option("--spec", kruskal_spec, "Spectral data (default: from forward scattering)");
  kruskal_cmd->add_option("--nmax", kruskal_nmax, "Highest order")->capture_default_str();
  kruskal_cmd->add_option("-o,--output", kruskal_out, "Output report (default stdout)");
  kruskal_cmd->callback([&] {
    action = [&] {
      const auto U = read_potential_table(kruskal_path);
      std::vector<cplx> rhs;
      std::vector<cplx> lhs;
      for (int n = 1; n <= kruskal_nmax; ++n) lhs.push_back(kruskal_integral(U, n));
      if (!kruskal_spec.empty()) {
        const auto data = load_spectral_data(kruskal_spec);
        for (int n = 1; n <= kruskal_nmax; ++n) rhs.push_back(trace_rhs(data, n));
      } else {
        const auto rep = full_scattering(U, 16.0, 1024, settings.tol_scale());
        for (int n = 1; n <= kruskal_nmax; ++n) rhs.push_back(trace_rhs(rep, n));
      }
      ojson j;
      j["n_max"] = kruskal_nmax;
      auto rows = ojson::array();
      for (int n = 1; n <= kruskal_nmax; ++n) {
        const auto k = static_cast<std::size_t>(n - 1);
        rows.push_back({{"n", n},
                        {"integral", complex_json(lhs[k])},
                        {"trace", complex_json(rhs[k])},
                        {"residual", std::abs(lhs[k] - rhs[k])}});
      }
      j["orders"] = rows;
      emit(j.dump(1) + "\n", kruskal_out, out);
      return 0;
    };
  });

  // flow
  std::string flow_path, flow_out;
  int flow_m = 1;
  double flow_t = 0.0;
  auto* flow_cmd = app.add_subcommand("flow", "Deform spectral data along an mKdV flow");
  flow_cmd->add_option("spec", flow_path, "Spectral data file")->required();
  flow_cmd->add_option("--m", flow_m, "Flow order")->capture_default_str();
  flow_cmd->add_option("--t", flow_t, "Flow time")->capture_default_str();
  flow_cmd->add_option("-o,--output", flow_out, "Output spectral data file")->required();
  flow_cmd->callback([&] {
    action = [&] {
      save_spectral_data(mkdv_deform(load_spectral_data(flow_path), flow_m, flow_t), flow_out);
      return 0;
    };
  });

  // surface
  std::string surface_path, surface_coeffs, surface_mesh, surface_report;
  double surface_xmax = 20.0;
  std::size_t surface_nx = 1024, surface_ny = 256;
  bool surface_no_caps = false;
  auto* surface_cmd = app.add_subcommand("surface", "Build the immersed sphere of a kernel spinor");
  surface_cmd->add_option("spec", surface_path, "Spectral data file")->required();
  surface_cmd->add_option("--coeffs", surface_coeffs, "Kernel coefficients \"re,im;re,im;...\" (length 2L)")
      ->required();
  surface_cmd->add_option("--xmax", surface_xmax, "Cylinder is [-xmax, xmax] x [0, 2pi)")->capture_default_str();
  surface_cmd->add_option("--nx", surface_nx, "x nodes")->capture_default_str();
  surface_cmd->add_option("--ny", surface_ny, "y nodes")->capture_default_str();
  surface_cmd->add_option("-o,--output", surface_mesh, "OBJ mesh output");
  surface_cmd->add_option("--report", surface_report, "Geometry report (default stdout)");
  surface_cmd->add_flag("--no-caps", surface_no_caps, "Do not weld collapsed end circles");
  surface_cmd->callback([&] {
    action = [&] {
      const auto data = load_spectral_data(surface_path);
      const auto coeffs = parse_coefficients(surface_coeffs);
      const int L = kernel_dimension(data);
      const bool revolution = is_revolution(coeffs, L);
      const auto grid = Grid1D::span(-surface_xmax, surface_xmax, surface_nx);
      const auto U = synthesize(data, grid);
      const auto psi = build_spinor(data, U, coeffs, surface_ny);
      const auto s = immerse(psi);
      if (!surface_mesh.empty()) {
        ObjOptions opt;
        opt.cap_ends = !surface_no_caps;
        opt.weld_tol *= settings.tol_scale();
        save_obj(surface_mesh, s, opt);
      }
      emit(geometry_report_json(geometry_report(s, U, L, revolution)), surface_report, out);
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    return action ? action() : 1;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace solitonsphere
