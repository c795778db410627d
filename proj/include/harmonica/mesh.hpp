#pragma once

#include <string>

#include "harmonica/ends.hpp"

namespace harmonica {

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::pair<std::string, std::vector<double>>> fields;

  double total_area() const;
  void validate() const;  // finite coords, index ranges, unit normals
};

struct MeshGrid {
  // log-polar grid z = e^{rho + i theta} (default); cartesian box for
  // plane-domain families; radial disk grid for the unit disk.
  double rho0 = -2.5, rho1 = 2.5;
  int n_rho = 128, n_theta = 128;
  // cartesian fallback box
  double x0 = -3, x1 = 3, y0 = -3, y1 = 3;
};

// Samples the immersion over the grid: closed form when available, otherwise
// one quadrature sweep over a spanning tree of grid edges. Normals come from
// gauss_map; per-vertex fields: K, distortion, abs_mu, margin.
SurfaceMesh sample_mesh(const Family& fam, const MeshGrid& grid,
                        const QuadratureConfig& cfg);

void export_obj(const SurfaceMesh& mesh, const std::string& path);
void export_ply(const SurfaceMesh& mesh, const std::string& path);
void export_csv(const SurfaceMesh& mesh, const std::string& path);

// OBJ re-import (positions/normals only; round-trip checks).
SurfaceMesh import_obj(const std::string& path);

}  // namespace harmonica
