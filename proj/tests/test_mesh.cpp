#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "harmonica/mesh.hpp"

using namespace harmonica;

namespace {
const QuadratureConfig cfg;

SurfaceMesh quad_fixture() {
  SurfaceMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0.5}, {1, 1, 0.5}};
  mesh.normals = {{0, 0, 1}, {0, 0, 1}, {0.6, 0, 0.8}, {0.6, 0, 0.8}};
  mesh.faces = {{0, 1, 2}, {1, 3, 2}};
  return mesh;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::string tmp_file(const char* name) {
  return std::string("/tmp/harmonica_test_") + name;
}
}  // namespace

TEST_CASE("obj export is byte exact on the quad fixture") {
  const char* golden =
      "v 0 0 0\n"
      "v 1 0 0\n"
      "v 0 1 0.5\n"
      "v 1 1 0.5\n"
      "vn 0 0 1\n"
      "vn 0 0 1\n"
      "vn 0.6 0 0.8\n"
      "vn 0.6 0 0.8\n"
      "f 1//1 2//2 3//3\n"
      "f 2//2 4//4 3//3\n";
  std::string path = tmp_file("quad.obj");
  export_obj(quad_fixture(), path);
  CHECK(slurp(path) == golden);
}

TEST_CASE("obj round trip") {
  Family horn = make_family(FamilySpec::horn(0, 0), cfg);
  MeshGrid grid;
  grid.rho0 = -2;
  grid.rho1 = 2;
  grid.n_rho = 24;
  grid.n_theta = 24;
  SurfaceMesh mesh = sample_mesh(horn, grid, cfg);
  std::string path = tmp_file("horn.obj");
  export_obj(mesh, path);
  SurfaceMesh back = import_obj(path);
  REQUIRE(back.vertices.size() == mesh.vertices.size());
  REQUIRE(back.faces.size() == mesh.faces.size());
  double dev = 0;
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    dev = std::max(dev, (back.vertices[i] - mesh.vertices[i]).norm_inf());
  CHECK(dev < 1e-8);
}

TEST_CASE("csv column count is six plus the field count") {
  SurfaceMesh mesh = quad_fixture();
  mesh.fields = {{"K", {0, 0, 0, 0}}, {"margin", {2, 2, 2, 2}}};
  std::string path = tmp_file("quad.csv");
  export_csv(mesh, path);
  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  int cols = 1;
  for (char c : header)
    if (c == ',') ++cols;
  CHECK(cols == 6 + 2);
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("ply header and payload sizes") {
  SurfaceMesh mesh = quad_fixture();
  mesh.fields = {{"K", {0, 0, 0, 0}}};
  std::string path = tmp_file("quad.ply");
  export_ply(mesh, path);
  std::string bytes = slurp(path);
  auto head_end = bytes.find("end_header\n");
  REQUIRE(head_end != std::string::npos);
  std::string header = bytes.substr(0, head_end);
  CHECK(header.find("format binary_little_endian 1.0") != std::string::npos);
  CHECK(header.find("element vertex 4") != std::string::npos);
  CHECK(header.find("element face 2") != std::string::npos);
  CHECK(header.find("property float K") != std::string::npos);
  size_t payload = bytes.size() - head_end - 11;
  CHECK(payload == 4 * (6 + 1) * 4 + 2 * (1 + 12));
}

TEST_CASE("horn mesh third coordinate equals the log-polar exponent") {
  Family horn = make_family(FamilySpec::horn(0, 0), cfg);
  MeshGrid grid;
  grid.rho0 = -3;
  grid.rho1 = 3;
  grid.n_rho = 64;
  grid.n_theta = 64;
  SurfaceMesh mesh = sample_mesh(horn, grid, cfg);
  for (int i = 0; i < grid.n_rho; ++i) {
    double rho = grid.rho0 + (grid.rho1 - grid.rho0) * i / (grid.n_rho - 1);
    for (int j = 0; j < grid.n_theta; ++j)
      CHECK(mesh.vertices[i * grid.n_theta + j].z ==
            doctest::Approx(rho).epsilon(1e-12));
  }
}

TEST_CASE("mesh normals agree with the analytic gauss map") {
  Family horn = make_family(FamilySpec::horn(0, 0), cfg);
  MeshGrid grid;
  grid.rho0 = -2.5;
  grid.rho1 = 2.5;
  grid.n_rho = 48;
  grid.n_theta = 48;
  SurfaceMesh mesh = sample_mesh(horn, grid, cfg);
  std::string path = tmp_file("horn_n.obj");
  export_obj(mesh, path);
  SurfaceMesh back = import_obj(path);
  double dev = 0;
  for (int i = 0; i < grid.n_rho; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      Complex z = std::polar(
          std::exp(grid.rho0 + (grid.rho1 - grid.rho0) * i / (grid.n_rho - 1)),
          2 * kPi * j / grid.n_theta);
      Vec3 n = gauss_map(horn.wd(), SurfacePoint(z));
      dev = std::max(dev,
                     (back.normals[i * grid.n_theta + j] - n).norm_inf());
    }
  CHECK(dev < 1e-6);
}

TEST_CASE("rotational catenoid mesh has the rotational symmetry") {
  // r = 0, beta = 0 members are genuinely rotational; alpha must avoid the
  // excluded half-line Re >= 0 of the Omega condition
  Family cat = make_family(FamilySpec::catenoid({-2, 0}, {0, 0}), cfg);
  MeshGrid grid;
  grid.rho0 = -1.5;
  grid.rho1 = 1.5;
  grid.n_rho = 16;
  grid.n_theta = 32;
  SurfaceMesh mesh = sample_mesh(cat, grid, cfg);
  double dtheta = 2 * kPi / grid.n_theta;
  Mat3 rot = Mat3::rot_z(dtheta);
  double dev = 0;
  for (int i = 0; i < grid.n_rho; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      const Vec3& a = mesh.vertices[i * grid.n_theta + j];
      const Vec3& b =
          mesh.vertices[i * grid.n_theta + (j + 1) % grid.n_theta];
      dev = std::max(dev, (rot.apply(a) - b).norm_inf());
    }
  CHECK(dev < 1e-8);
}

TEST_CASE("flujo mesh symmetry plane") {
  Family fl = make_family(FamilySpec::flujo(4, 0), cfg);
  MeshGrid grid;
  grid.rho0 = -1.2;
  grid.rho1 = 1.2;
  grid.n_rho = 12;
  grid.n_theta = 16;  // multiple of 4: the grid hits the imaginary axis
  SurfaceMesh mesh = sample_mesh(fl, grid, cfg);
  int hits = 0;
  for (int i = 0; i < grid.n_rho; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      double theta = 2 * kPi * j / grid.n_theta;
      if (std::abs(std::cos(theta)) > 1e-12) continue;
      const Vec3& v = mesh.vertices[i * grid.n_theta + j];
      CHECK(std::abs(v.y) < 1e-8);
      CHECK(std::abs(v.z) < 1e-8);
      ++hits;
    }
  CHECK(hits == 2 * grid.n_rho);
}

TEST_CASE("mesh area stabilizes under refinement") {
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}), cfg);
  MeshGrid coarse;
  coarse.rho0 = -1.5;
  coarse.rho1 = 1.5;
  coarse.n_rho = 48;
  coarse.n_theta = 48;
  MeshGrid fine = coarse;
  fine.n_rho = 96;
  fine.n_theta = 96;
  double a0 = sample_mesh(cat, coarse, cfg).total_area();
  double a1 = sample_mesh(cat, fine, cfg).total_area();
  CHECK(std::abs(a1 - a0) / a1 < 0.01);
}

TEST_CASE("torus mesh builds a valid two-sheet cover") {
  Family torus = make_family(FamilySpec::torus(0.5), cfg);
  MeshGrid grid;
  grid.rho0 = std::log(0.5) - 1.5;
  grid.rho1 = std::log(2.0) + 1.5;
  grid.n_rho = 20;
  grid.n_theta = 24;
  SurfaceMesh mesh = sample_mesh(torus, grid, cfg);
  CHECK(mesh.vertices.size() == 2u * 20u * 24u);
  CHECK_NOTHROW(mesh.validate());
  // symmetry of the double cover: X(z, -w) values appear mirrored in x3
  double zmax = 0;
  for (const auto& v : mesh.vertices) zmax = std::max(zmax, std::abs(v.z));
  CHECK(zmax > 0.5);
}

TEST_CASE("mesh generation rejects degenerate grids") {
  Family bad = make_family(FamilySpec::rotational({-1, 0}), cfg, true);
  MeshGrid grid;
  grid.rho0 = -1;
  grid.rho1 = 1;  // contains |z| = 1 where the margin vanishes
  grid.n_rho = 21;
  grid.n_theta = 16;
  CHECK_THROWS_AS(sample_mesh(bad, grid, cfg), Error);
}

TEST_CASE("plane-domain meshes use the cartesian grid") {
  Family graph = make_family(
      FamilySpec::harmonic_graph({Complex{}, Complex{}, Complex{1, 0}}), cfg);
  MeshGrid grid;
  grid.n_rho = 9;
  grid.n_theta = 9;
  grid.x0 = -1;
  grid.x1 = 1;
  grid.y0 = -1;
  grid.y1 = 1;
  SurfaceMesh mesh = sample_mesh(graph, grid, cfg);
  CHECK(mesh.vertices.size() == 81u);
  // u = Re z^2 at the corner (1,1): x3 = 0
  const Vec3& corner = mesh.vertices.back();
  CHECK(corner.x == doctest::Approx(1.0));
  CHECK(corner.y == doctest::Approx(1.0));
  CHECK(corner.z == doctest::Approx(0.0).epsilon(1e-12));
}
