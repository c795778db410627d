#include "harmonica/mesh.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <queue>

namespace harmonica {

double SurfaceMesh::total_area() const {
  double area = 0;
  for (const auto& f : faces) {
    Vec3 e1 = vertices[f[1]] - vertices[f[0]];
    Vec3 e2 = vertices[f[2]] - vertices[f[0]];
    area += 0.5 * e1.cross(e2).norm();
  }
  return area;
}

void SurfaceMesh::validate() const {
  int n = static_cast<int>(vertices.size());
  if (normals.size() != vertices.size())
    fail(Errc::IoError, "normal count mismatch");
  for (const auto& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
      fail(Errc::IoError, "non-finite vertex");
  for (const auto& nv : normals)
    if (std::abs(nv.norm() - 1.0) > 1e-6)
      fail(Errc::IoError, "normal not unit length");
  for (const auto& f : faces)
    for (int idx : f)
      if (idx < 0 || idx >= n) fail(Errc::IoError, "face index out of range");
  for (const auto& [name, vals] : fields)
    if (vals.size() != vertices.size())
      fail(Errc::IoError, "field '" + name + "' length mismatch");
}

namespace {

struct GridPoint {
  SurfacePoint P;
  int band = 0;  // torus: 0 below log a, 1 middle, 2 above log(1/a)
};

struct Lattice {
  std::vector<GridPoint> pts;   // n_patches * n_rho * n_theta
  int n_rho = 0, n_theta = 0, n_patches = 1;
  bool wrap_theta = false;
  bool torus = false;

  int idx(int patch, int i, int j) const {
    return (patch * n_rho + i) * n_theta + j;
  }
};

Lattice build_lattice(const Family& fam, const MeshGrid& grid) {
  Lattice lat;
  lat.n_rho = grid.n_rho;
  lat.n_theta = grid.n_theta;
  const Domain& dom = fam.wd().domain;
  using Kind = FamilySpec::Kind;
  switch (fam.spec.kind) {
    case Kind::Plane:
    case Kind::HarmonicGraph:
    case Kind::HelicoidY1: {
      lat.pts.resize(lat.n_rho * lat.n_theta);
      for (int i = 0; i < lat.n_rho; ++i)
        for (int j = 0; j < lat.n_theta; ++j)
          lat.pts[lat.idx(0, i, j)].P = SurfacePoint(
              Complex{grid.x0 + (grid.x1 - grid.x0) * i / (lat.n_rho - 1),
                      grid.y0 + (grid.y1 - grid.y0) * j / (lat.n_theta - 1)});
      break;
    }
    case Kind::HelicoidY2: {
      lat.pts.resize(lat.n_rho * lat.n_theta);
      lat.wrap_theta = true;
      for (int i = 0; i < lat.n_rho; ++i)
        for (int j = 0; j < lat.n_theta; ++j) {
          double r = 0.05 + 0.90 * i / (lat.n_rho - 1);
          lat.pts[lat.idx(0, i, j)].P =
              SurfacePoint(std::polar(r, 2 * kPi * j / lat.n_theta));
        }
      break;
    }
    case Kind::Torus: {
      lat.n_patches = 2;
      lat.torus = true;
      lat.wrap_theta = true;
      lat.pts.resize(2 * lat.n_rho * lat.n_theta);
      double la = std::log(dom.curve.a), lb = -la;
      for (int s = 0; s < 2; ++s)
        for (int i = 0; i < lat.n_rho; ++i) {
          double rho =
              grid.rho0 + (grid.rho1 - grid.rho0) * i / (lat.n_rho - 1);
          int band = rho < la ? 0 : (rho > lb ? 2 : 1);
          for (int j = 0; j < lat.n_theta; ++j) {
            double th = 2 * kPi * (j + 0.5) / lat.n_theta;
            Complex z = std::polar(std::exp(rho), th);
            Complex w = dom.curve.w_ref(z);
            auto& gp = lat.pts[lat.idx(s, i, j)];
            gp.P = SurfacePoint(z, s == 0 ? w : -w);
            gp.band = band;
          }
        }
      break;
    }
    default: {  // punctured plane, log-polar around 0
      lat.pts.resize(lat.n_rho * lat.n_theta);
      lat.wrap_theta = true;
      for (int i = 0; i < lat.n_rho; ++i)
        for (int j = 0; j < lat.n_theta; ++j) {
          double rho =
              grid.rho0 + (grid.rho1 - grid.rho0) * i / (lat.n_rho - 1);
          Complex z = std::polar(std::exp(rho), 2 * kPi * j / lat.n_theta);
          if (fam.spec.kind == Kind::Flujo) {
            // nudge vertices off the punctures
            if (std::abs(z - 1.0) < 0.02) z += Complex{0, 0.03};
            if (std::abs(z + 1.0) < 0.02) z += Complex{0, 0.03};
          }
          lat.pts[lat.idx(0, i, j)].P = SurfacePoint(z);
        }
      break;
    }
  }
  return lat;
}

Vec3 edge_delta(const Immersion& imm, const SurfacePoint& a,
                const SurfacePoint& b, const QuadratureConfig& cfg) {
  PathSpec seg;
  seg.pts = {a, b};
  Vec3 d{};
  for (int j = 0; j < 3; ++j) {
    auto r = integrate_contour(
        [&](const SurfacePoint& Q) { return imm.wd.phi(Q)[j]; }, seg,
        imm.wd.domain, cfg);
    (&d.x)[j] = r.value.real();
  }
  return d;
}

}  // namespace

SurfaceMesh sample_mesh(const Family& fam, const MeshGrid& grid,
                        const QuadratureConfig& cfg) {
  Lattice lat = build_lattice(fam, grid);
  const Immersion& imm = fam.immersion;
  const WeierstrassData& wd = fam.wd();
  int n = static_cast<int>(lat.pts.size());

  // immersion gate on the grid
  for (int v = 0; v < n; ++v) {
    const SurfacePoint& P = lat.pts[v].P;
    CTriple phi = wd.phi(P);
    double k = klotz_of(phi);
    if (k - std::abs(hopf_coefficient(phi)) <= 1e-9 * k)
      fail(Errc::DegeneratePoint,
           "grid vertex " + std::to_string(v) + " at z = " +
               format_complex(P.z) + " is degenerate");
  }

  SurfaceMesh mesh;
  mesh.vertices.resize(n);
  mesh.normals.resize(n);

  if (imm.has_closed_form()) {
    parallel_for(n, [&](int v) {
      mesh.vertices[v] = imm.closed_form(lat.pts[v].P);
    });
  } else {
    // one integration sweep over a spanning tree of grid edges
    std::vector<char> seen(n, 0);
    std::queue<int> queue;
    auto root_of_patch = [&](int patch) { return lat.idx(patch, 0, 0); };
    for (int patch = 0; patch < lat.n_patches; ++patch) {
      int root = root_of_patch(patch);
      mesh.vertices[root] = evaluate_immersion_direct(imm, lat.pts[root].P, cfg);
      seen[root] = 1;
      queue.push(root);
    }
    auto visit = [&](int from, int to) {
      if (to < 0 || to >= n || seen[to]) return;
      mesh.vertices[to] =
          mesh.vertices[from] +
          edge_delta(imm, lat.pts[from].P, lat.pts[to].P, cfg);
      seen[to] = 1;
      queue.push(to);
    };
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop();
      int patch = v / (lat.n_rho * lat.n_theta);
      int rem = v % (lat.n_rho * lat.n_theta);
      int i = rem / lat.n_theta, j = rem % lat.n_theta;
      if (i + 1 < lat.n_rho) visit(v, lat.idx(patch, i + 1, j));
      if (i > 0) visit(v, lat.idx(patch, i - 1, j));
      if (j + 1 < lat.n_theta) visit(v, lat.idx(patch, i, j + 1));
      if (j > 0) visit(v, lat.idx(patch, i, j - 1));
    }
  }

  std::vector<double> field_k(n), field_dist(n), field_mu(n), field_margin(n);
  parallel_for(n, [&](int v) {
    const SurfacePoint& P = lat.pts[v].P;
    mesh.normals[v] = gauss_map(wd, P);
    field_dist[v] = distortion(wd, P);
    field_mu[v] = beltrami_magnitude(wd, P);
    field_margin[v] = immersion_margin(wd, P);
    field_k[v] = wd.has_derivative() ? curvature(wd, P).K : 0.0;
  });
  mesh.fields = {{"K", field_k},
                 {"distortion", field_dist},
                 {"abs_mu", field_mu},
                 {"margin", field_margin}};

  // faces: quads split into triangles; theta seam wraps for polar grids
  auto emit_quad = [&](int a, int b, int c, int d) {
    mesh.faces.push_back({a, b, c});
    mesh.faces.push_back({b, d, c});
  };
  for (int patch = 0; patch < lat.n_patches; ++patch)
    for (int i = 0; i + 1 < lat.n_rho; ++i)
      for (int j = 0; j < lat.n_theta; ++j) {
        bool seam = j + 1 == lat.n_theta;
        if (seam && !lat.wrap_theta) continue;
        int jn = seam ? 0 : j + 1;
        // on the torus the theta seam crosses the branch cuts in the outer
        // bands, where the surface continues onto the other sheet
        int seam_patch = patch;
        if (seam && lat.torus && lat.pts[lat.idx(patch, i, j)].band != 1)
          seam_patch = 1 - patch;
        emit_quad(lat.idx(patch, i, j), lat.idx(patch, i + 1, j),
                  lat.idx(seam ? seam_patch : patch, i, jn),
                  lat.idx(seam ? seam_patch : patch, i + 1, jn));
      }
  mesh.validate();
  return mesh;
}

// ==== exporters =============================================================

namespace {

std::string num9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void export_obj(const SurfaceMesh& mesh, const std::string& path) {
  std::string out;
  out.reserve(mesh.vertices.size() * 48);
  for (const auto& v : mesh.vertices)
    out += "v " + num9(v.x) + " " + num9(v.y) + " " + num9(v.z) + "\n";
  for (const auto& nv : mesh.normals)
    out += "vn " + num9(nv.x) + " " + num9(nv.y) + " " + num9(nv.z) + "\n";
  for (const auto& f : mesh.faces) {
    std::string a = std::to_string(f[0] + 1), b = std::to_string(f[1] + 1),
                c = std::to_string(f[2] + 1);
    out += "f " + a + "//" + a + " " + b + "//" + b + " " + c + "//" + c + "\n";
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::IoError, "cannot open " + path);
  os << out;
  if (!os) fail(Errc::IoError, "write failed on " + path);
}

void export_ply(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::IoError, "cannot open " + path);
  os << "ply\nformat binary_little_endian 1.0\n";
  os << "element vertex " << mesh.vertices.size() << "\n";
  for (const char* p : {"x", "y", "z", "nx", "ny", "nz"})
    os << "property float " << p << "\n";
  for (const auto& [name, vals] : mesh.fields)
    os << "property float " << name << "\n";
  os << "element face " << mesh.faces.size() << "\n";
  os << "property list uchar int vertex_indices\nend_header\n";
  auto put_f = [&](double v) {
    float f = static_cast<float>(v);
    os.write(reinterpret_cast<const char*>(&f), 4);
  };
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    put_f(mesh.vertices[i].x);
    put_f(mesh.vertices[i].y);
    put_f(mesh.vertices[i].z);
    put_f(mesh.normals[i].x);
    put_f(mesh.normals[i].y);
    put_f(mesh.normals[i].z);
    for (const auto& [name, vals] : mesh.fields) put_f(vals[i]);
  }
  for (const auto& f : mesh.faces) {
    unsigned char cnt = 3;
    os.write(reinterpret_cast<const char*>(&cnt), 1);
    for (int idx : f) {
      int32_t v = idx;
      os.write(reinterpret_cast<const char*>(&v), 4);
    }
  }
  if (!os) fail(Errc::IoError, "write failed on " + path);
}

void export_csv(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::IoError, "cannot open " + path);
  os << "x,y,z,nx,ny,nz";
  for (const auto& [name, vals] : mesh.fields) os << "," << name;
  os << "\n";
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    os << num9(mesh.vertices[i].x) << "," << num9(mesh.vertices[i].y) << ","
       << num9(mesh.vertices[i].z) << "," << num9(mesh.normals[i].x) << ","
       << num9(mesh.normals[i].y) << "," << num9(mesh.normals[i].z);
    for (const auto& [name, vals] : mesh.fields) os << "," << num9(vals[i]);
    os << "\n";
  }
  if (!os) fail(Errc::IoError, "write failed on " + path);
}

SurfaceMesh import_obj(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::IoError, "cannot open " + path);
  SurfaceMesh mesh;
  std::string tok;
  while (is >> tok) {
    if (tok == "v") {
      Vec3 v;
      is >> v.x >> v.y >> v.z;
      mesh.vertices.push_back(v);
    } else if (tok == "vn") {
      Vec3 v;
      is >> v.x >> v.y >> v.z;
      mesh.normals.push_back(v);
    } else if (tok == "f") {
      std::array<int, 3> f{};
      for (int k = 0; k < 3; ++k) {
        std::string fv;
        is >> fv;
        f[k] = std::atoi(fv.c_str()) - 1;
      }
      mesh.faces.push_back(f);
    } else {
      std::string rest;
      std::getline(is, rest);
    }
  }
  return mesh;
}

}  // namespace harmonica
