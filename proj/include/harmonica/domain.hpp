#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "harmonica/error.hpp"
#include "harmonica/types.hpp"

namespace harmonica {

// Chart of a puncture / end of the surface. Local coordinate conventions:
//   AtPoint          t = z - p
//   AtInfinity       t = 1/z
//   CurveZero        t = u = 1/w, end of the elliptic curve over z = 0
//   CurveInfinity    t = u = 1/w, end over z = infinity
struct EndId {
  enum class Chart { AtPoint, AtInfinity, CurveZero, CurveInfinity };
  Chart chart = Chart::AtPoint;
  Complex p{};

  static EndId at(Complex p) { return {Chart::AtPoint, p}; }
  static EndId at_infinity() { return {Chart::AtInfinity, {}}; }
  static EndId curve_zero() { return {Chart::CurveZero, {}}; }
  static EndId curve_infinity() { return {Chart::CurveInfinity, {}}; }

  bool operator==(const EndId& o) const {
    return chart == o.chart && p == o.p;
  }
  std::string label() const;
};

struct SurfacePoint {
  Complex z{};
  std::optional<Complex> w;  // elliptic curve branch value

  SurfacePoint() = default;
  explicit SurfacePoint(Complex z_) : z(z_) {}
  SurfacePoint(Complex z_, Complex w_) : z(z_), w(w_) {}
};

struct PathSpec {
  std::vector<SurfacePoint> pts;
  bool closed = false;
};

// Defining polynomial data of the curve w^2 = (z-a)(az-1)/z.
struct CurveEquation {
  double a = 0.5;

  Complex f(Complex z) const { return (z - a) * (a * z - 1.0) / z; }
  Complex f_prime(Complex z) const { return a - a / (z * z); }

  // Reference branch of sqrt(f), holomorphic off the cuts [0,a] and [1/a,oo).
  Complex w_ref(Complex z) const {
    return std::sqrt(Complex(a)) * std::sqrt(1.0 - a / z) * kI *
           std::sqrt(1.0 / a - z);
  }

  // The two z-values over a w-value: roots of a z^2 - (a^2+1+w^2) z + a = 0
  // with w = 1/u. Multiplying through by u^2 gives the discriminant
  // D(u^2) = (1-a^2)^2 u^4 + 2(a^2+1) u^2 + 1, which stays off the negative
  // real axis for |u| < 1/(1+a), so the principal root is single-valued
  // there. near_zero picks the root that tends to 0 as u -> 0.
  Complex disc_sqrt(Complex u) const {
    Complex v = u * u;
    double s = (1.0 - a * a);
    return std::sqrt(s * s * v * v + 2.0 * (a * a + 1.0) * v + 1.0);
  }
  Complex z_of_u(Complex u, bool near_zero) const {
    Complex v = u * u;
    Complex e = (a * a + 1.0) * v + 1.0;
    Complex z_plus = (e + disc_sqrt(u)) / (2.0 * a * v);
    return near_zero ? 1.0 / z_plus : z_plus;  // product of roots = 1
  }
  Complex dz_du(Complex u, bool near_zero) const {
    Complex z = z_of_u(u, near_zero);
    Complex sign = near_zero ? 1.0 : -1.0;
    return sign * 2.0 * z / (u * disc_sqrt(u));
  }
};

struct Domain {
  enum class Kind { PuncturedPlane, Annulus, UnitDisk, EllipticCurve };
  Kind kind = Kind::PuncturedPlane;
  std::vector<Complex> punctures;  // PuncturedPlane
  double r_inner = 0.0;            // Annulus
  double r_outer = std::numeric_limits<double>::infinity();
  CurveEquation curve;             // EllipticCurve

  static Domain punctured_plane(std::vector<Complex> punctures = {});
  static Domain annulus(double r_inner, double r_outer);
  static Domain unit_disk();
  static Domain elliptic_curve(double a);

  bool is_curve() const { return kind == Kind::EllipticCurve; }

  // Distance from z to the nearest puncture / boundary feature.
  double clearance(Complex z) const;
  bool contains(Complex z, double min_clearance = 1e-12) const;

  // Raises PointOutsideDomain / BranchMismatch when P is not a valid point.
  void check_point(const SurfacePoint& P) const;

  // Branch values over z (elliptic curve): {w_ref, -w_ref}.
  Complex branch_near(Complex z, Complex w_hint) const;
};

// Appends the straight z-segment from the last vertex of `path` to z1,
// continuing the branch by nearest-root selection; subdivides whenever the
// branch moves by more than half the root separation.
void extend_path(const Domain& dom, PathSpec& path, Complex z1);

// Polyline through the given z-vertices. w0 fixes the starting branch on the
// elliptic curve (default: reference branch).
PathSpec make_path(const Domain& dom, const std::vector<Complex>& zs,
                   bool closed, std::optional<Complex> w0 = std::nullopt);

// Closed ellipse contour centered at c with semi-axes (rx, ry).
PathSpec ellipse_path(const Domain& dom, Complex c, double rx, double ry,
                      int segments, std::optional<Complex> w0 = std::nullopt);

PathSpec circle_path(const Domain& dom, Complex c, double r, int segments,
                     std::optional<Complex> w0 = std::nullopt);

}  // namespace harmonica
