#include "harmonica/domain.hpp"

#include <algorithm>
#include <cmath>

#include "harmonica/util.hpp"

namespace harmonica {

std::string EndId::label() const {
  switch (chart) {
    case Chart::AtPoint: return "z=" + format_complex(p);
    case Chart::AtInfinity: return "z=inf";
    case Chart::CurveZero: return "curve end over z=0";
    case Chart::CurveInfinity: return "curve end over z=inf";
  }
  return "?";
}

Domain Domain::punctured_plane(std::vector<Complex> punctures) {
  for (size_t i = 0; i < punctures.size(); ++i)
    for (size_t j = i + 1; j < punctures.size(); ++j)
      if (std::abs(punctures[i] - punctures[j]) < 1e-12)
        fail(Errc::InvalidParameters, "punctures must be pairwise distinct");
  Domain d;
  d.kind = Kind::PuncturedPlane;
  d.punctures = std::move(punctures);
  return d;
}

Domain Domain::annulus(double r_inner, double r_outer) {
  if (!(0 <= r_inner && r_inner < r_outer))
    fail(Errc::InvalidParameters, "need 0 <= r_inner < r_outer");
  Domain d;
  d.kind = Kind::Annulus;
  d.r_inner = r_inner;
  d.r_outer = r_outer;
  return d;
}

Domain Domain::unit_disk() {
  Domain d;
  d.kind = Kind::UnitDisk;
  return d;
}

Domain Domain::elliptic_curve(double a) {
  if (!(0 < a && a < 1))
    fail(Errc::InvalidParameters, "curve parameter a must lie in (0,1)");
  Domain d;
  d.kind = Kind::EllipticCurve;
  d.curve.a = a;
  return d;
}

double Domain::clearance(Complex z) const {
  switch (kind) {
    case Kind::PuncturedPlane: {
      double c = std::numeric_limits<double>::infinity();
      for (const auto& p : punctures) c = std::min(c, std::abs(z - p));
      return c;
    }
    case Kind::Annulus:
      return std::min(std::abs(z) - r_inner, r_outer - std::abs(z));
    case Kind::UnitDisk:
      return 1.0 - std::abs(z);
    case Kind::EllipticCurve:
      // distance to the z-projection of the removed ends (z = 0, infinity
      // handled by |z| alone) -- branch points are regular points
      return std::abs(z);
  }
  return 0;
}

bool Domain::contains(Complex z, double min_clearance) const {
  return clearance(z) >= min_clearance;
}

void Domain::check_point(const SurfacePoint& P) const {
  if (!std::isfinite(P.z.real()) || !std::isfinite(P.z.imag()))
    fail(Errc::PointOutsideDomain, "non-finite coordinate");
  if (!contains(P.z))
    fail(Errc::PointOutsideDomain, "z = " + format_complex(P.z));
  if (kind == Kind::EllipticCurve) {
    if (!P.w) fail(Errc::BranchMismatch, "curve point without branch value");
    Complex w = *P.w;
    Complex res = w * w - curve.f(P.z);
    if (std::abs(res) > 1e-10 * (1.0 + std::norm(w)))
      fail(Errc::BranchMismatch,
           "w^2 - f(z) = " + format_complex(res) + " at z = " +
               format_complex(P.z));
  }
}

Complex Domain::branch_near(Complex z, Complex w_hint) const {
  Complex w = curve.w_ref(z);
  return std::abs(w - w_hint) <= std::abs(-w - w_hint) ? w : -w;
}

namespace {

void extend_recursive(const Domain& dom, PathSpec& path, Complex z1,
                      int depth) {
  const SurfacePoint& from = path.pts.back();
  if (!dom.is_curve()) {
    path.pts.emplace_back(z1);
    return;
  }
  Complex w0 = *from.w;
  Complex w1 = dom.branch_near(z1, w0);
  double sep = std::abs(2.0 * w1);
  if (std::abs(w1 - w0) * 4.0 > sep && depth < 48) {
    Complex mid = 0.5 * (from.z + z1);
    extend_recursive(dom, path, mid, depth + 1);
    extend_recursive(dom, path, z1, depth + 1);
    return;
  }
  if (depth >= 48)
    fail(Errc::BranchMismatch,
         "branch continuation did not settle near z = " + format_complex(z1));
  path.pts.emplace_back(z1, w1);
}

}  // namespace

void extend_path(const Domain& dom, PathSpec& path, Complex z1) {
  if (path.pts.empty()) fail(Errc::OpenPath, "cannot extend empty path");
  extend_recursive(dom, path, z1, 0);
}

PathSpec make_path(const Domain& dom, const std::vector<Complex>& zs,
                   bool closed, std::optional<Complex> w0) {
  if (zs.empty()) fail(Errc::OpenPath, "empty vertex list");
  PathSpec path;
  SurfacePoint start(zs.front());
  if (dom.is_curve())
    start.w = w0 ? dom.branch_near(zs.front(), *w0) : dom.curve.w_ref(zs.front());
  path.pts.push_back(start);
  for (size_t i = 1; i < zs.size(); ++i) extend_path(dom, path, zs[i]);
  if (closed) {
    // continue around to the start and verify the branch returns
    if (dom.is_curve()) {
      PathSpec probe = path;
      extend_recursive(dom, probe, zs.front(), 0);
      Complex w_back = *probe.pts.back().w;
      if (std::abs(w_back - *start.w) >
          1e-8 * (1.0 + std::abs(*start.w)))
        fail(Errc::BranchMismatch,
             "closed path has branch monodromy; lift is not a loop");
    }
    path.closed = true;
  }
  return path;
}

PathSpec ellipse_path(const Domain& dom, Complex c, double rx, double ry,
                      int segments, std::optional<Complex> w0) {
  std::vector<Complex> zs;
  zs.reserve(segments);
  for (int k = 0; k < segments; ++k) {
    double t = 2.0 * kPi * k / segments;
    zs.push_back(c + Complex(rx * std::cos(t), ry * std::sin(t)));
  }
  return make_path(dom, zs, true, w0);
}

PathSpec circle_path(const Domain& dom, Complex c, double r, int segments,
                     std::optional<Complex> w0) {
  return ellipse_path(dom, c, r, r, segments, w0);
}

}  // namespace harmonica
