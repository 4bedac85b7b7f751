#include "soliton/mesh_io.hpp"

#include <fstream>
#include <ostream>

#include "json.hpp"
#include "soliton/errors.hpp"

namespace soliton {

namespace {

void put_vertex(std::ostream& out, const Vec3& p) {
  out << "v " << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
}

Vec3 circle_centroid(const ImmersedSurface& s, std::size_t i) {
  Vec3 c{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < s.grid.ny; ++j) {
    for (int k = 0; k < 3; ++k) c[k] += s.points[s.grid.index(i, j)][k];
  }
  for (auto& v : c) v /= static_cast<double>(s.grid.ny);
  return c;
}

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

}  // namespace

void write_obj(std::ostream& out, const ImmersedSurface& s, const ObjOptions& opt) {
  const auto& g = s.grid;
  const std::size_t nx = g.x.n, ny = g.ny;
  out << "# cylinder grid " << nx << " x " << ny << '\n';
  for (const auto& p : s.points) put_vertex(out, p);

  const auto vid = [&](std::size_t i, std::size_t j) { return g.index(i, j % ny) + 1; };
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      out << "f " << vid(i, j) << ' ' << vid(i + 1, j) << ' ' << vid(i + 1, j + 1) << ' ' << vid(i, j + 1) << '\n';
    }
  }
  if (!opt.cap_ends) return;

  const auto diag = closure_check(s);
  std::size_t next = g.size() + 1;
  if (diag.diameter_minus < opt.weld_tol) {
    put_vertex(out, circle_centroid(s, 0));
    for (std::size_t j = 0; j < ny; ++j) out << "f " << next << ' ' << vid(0, j) << ' ' << vid(0, j + 1) << '\n';
    ++next;
  }
  if (diag.diameter_plus < opt.weld_tol) {
    put_vertex(out, circle_centroid(s, nx - 1));
    for (std::size_t j = 0; j < ny; ++j) out << "f " << next << ' ' << vid(nx - 1, j + 1) << ' ' << vid(nx - 1, j) << '\n';
  }
}

void save_obj(const std::string& path, const ImmersedSurface& s, const ObjOptions& opt) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "write_failed", "cannot open " + path + " for writing");
  write_obj(out, s, opt);
  if (!out) fail(ErrorKind::io, "write_failed", "error writing " + path);
}

GeometryReport geometry_report(const ImmersedSurface& s, const GridPotential& U, int kernel_dimension,
                               bool revolution) {
  GeometryReport r;
  r.kernel_dimension = kernel_dimension;
  r.revolution = revolution;
  r.willmore_mesh = willmore_mesh(s);
  r.willmore_potential = willmore_potential(U);
  r.closure = closure_check(s);
  r.identities = identity_defects(s);
  r.sphere = fit_sphere(s.points);
  r.branches = detect_branch_points(s);
  return r;
}

std::string geometry_report_json(const GeometryReport& r, std::size_t max_nodes) {
  nlohmann::ordered_json j;
  j["kernel_dimension"] = r.kernel_dimension;
  j["is_revolution"] = r.revolution;
  j["willmore"] = {{"mesh", r.willmore_mesh}, {"potential", r.willmore_potential}};
  j["closure"] = {{"period_norm", r.closure.period_norm},
                  {"diameter_minus", r.closure.diameter_minus},
                  {"diameter_plus", r.closure.diameter_plus},
                  {"decay_minus", r.closure.decay_minus},
                  {"decay_plus", r.closure.decay_plus}};
  j["identities"] = {{"conformal", r.identities.conformal},
                     {"metric", r.identities.metric},
                     {"mean_curvature", r.identities.mean_curvature},
                     {"gauss_bonnet", r.identities.gauss_bonnet}};
  j["sphere_fit"] = {{"center", vec_json(r.sphere.center)},
                     {"radius", r.sphere.radius},
                     {"residual", r.sphere.residual}};
  auto nodes = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.branches.nodes.size() && k < max_nodes; ++k) {
    nodes.push_back({r.branches.nodes[k].first, r.branches.nodes[k].second});
  }
  j["branch_points"] = {{"count", r.branches.nodes.size()},
                        {"nodes", nodes},
                        {"at_minus_infinity", r.branches.branch_minus},
                        {"at_plus_infinity", r.branches.branch_plus},
                        {"decay_minus", r.branches.decay_minus},
                        {"decay_plus", r.branches.decay_plus}};
  return j.dump(1) + "\n";
}

}  // namespace soliton
