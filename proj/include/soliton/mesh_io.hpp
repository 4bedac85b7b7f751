#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "soliton/surface.hpp"

namespace soliton {

struct ObjOptions {
  bool cap_ends = true;   // weld an end circle to its centroid when it has collapsed
  double weld_tol = 1e-5;
};

// Wavefront OBJ: one `v` per node in row-major (x-major) order, quads over the
// grid cells with the y seam closed, triangle fans to each welded end.
void write_obj(std::ostream& out, const ImmersedSurface& s, const ObjOptions& opt = {});
// Throws io "write_failed" if the file cannot be written.
void save_obj(const std::string& path, const ImmersedSurface& s, const ObjOptions& opt = {});

struct GeometryReport {
  int kernel_dimension = 0;
  bool revolution = false;
  double willmore_mesh = 0.0, willmore_potential = 0.0;
  ClosureDiagnostics closure;
  IdentityDefects identities;
  SphereFit sphere;
  BranchReport branches;
};

GeometryReport geometry_report(const ImmersedSurface& s, const GridPotential& U, int kernel_dimension,
                               bool revolution);

// Deterministic JSON text. At most max_nodes branch nodes are listed; the
// total count is always present.
std::string geometry_report_json(const GeometryReport& r, std::size_t max_nodes = 1000);

}  // namespace soliton
