#pragma once

#include <functional>
#include <map>

#include "harmonica/domain.hpp"
#include "harmonica/types.hpp"

namespace harmonica {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 1 << 16;
  double tail_radius_growth = 2.0;

  void validate() const;  // tolerances positive, max_subdivisions >= 16
};

struct IntegralResult {
  Complex value{};
  double error = 0.0;
};

struct RealIntegral {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (7-15) on [a,b].
RealIntegral integrate_real(const std::function<double(double)>& f, double a,
                            double b, const QuadratureConfig& cfg);
IntegralResult integrate_complex(const std::function<Complex(double)>& f,
                                 double a, double b,
                                 const QuadratureConfig& cfg);

// tanh-sinh rule; admits inverse-square-root singularities at flagged
// endpoints.
double integrate_improper(const std::function<double(double)>& f, double p,
                          double q, bool singular_p, bool singular_q,
                          const QuadratureConfig& cfg);

// Integral of f over the polyline path (dz along segments). On the elliptic
// curve the branch is continued from each segment's endpoints.
IntegralResult integrate_contour(
    const std::function<Complex(const SurfacePoint&)>& f, const PathSpec& path,
    const Domain& dom, const QuadratureConfig& cfg);

// (1/2 pi i) contour integral of f/(z-z0)^2 over |z-z0| = radius.
Complex cauchy_derivative(const std::function<Complex(Complex)>& f, Complex z0,
                          double radius, const QuadratureConfig& cfg);

// Laurent coefficients c_k of f around p for k in [k_min, k_max], extracted
// on the circle |z-p| = radius by the trapezoid rule (spectral accuracy),
// doubling the node count until stable.
std::map<int, Complex> laurent_coefficients(
    const std::function<Complex(Complex)>& f, Complex p, int k_min, int k_max,
    double radius, const QuadratureConfig& cfg);

// ---- surface quadrature ------------------------------------------------

// One log-polar annulus chart rho in [rho0, rho1] around `center`; the
// density is integrated as f(z) * |z-center|^2 d rho d theta with geometric
// slabs continued past open ends until the extrapolated tail drops below
// abs_tol. `sheet` selects the elliptic-curve branch (0: none, +1/-1).
struct LogPolarRegion {
  Complex center{};
  double rho0 = -1.0;
  double rho1 = 1.0;
  bool tail_in = true;   // extend rho -> -infinity
  bool tail_out = true;  // extend rho -> +infinity
  int sheet = 0;
  double weight = 1.0;   // constant multiplier (e.g. partition complement)
};

// Polar patch around a point with an integrable radial cusp (tanh-sinh in r).
struct CuspPatchRegion {
  Complex center{};
  double radius = 0.1;
  int sheet = 0;
};

struct SurfaceRegions {
  std::vector<LogPolarRegion> logpolar;
  std::vector<CuspPatchRegion> cusps;
  // smooth bump weights multiplying the density: 1 inside r_flat, 0 outside
  // r_cut; regions reference them through bump_complement / bump_index
  struct Bump {
    Complex center{};
    double r_flat = 0.0;
    double r_cut = 0.0;
  };
  std::vector<Bump> bumps;
};

// Integral of `density` (a scalar area density per du dv in the chart of
// each region) over the union of regions; bump weights make the regions an
// exact partition of the surface. Raises TailNotDecaying when an open end
// does not decay.
RealIntegral integrate_surface(
    const std::function<double(const SurfacePoint&)>& density,
    const Domain& dom, const SurfaceRegions& regions,
    const QuadratureConfig& cfg);

double bump_weight(const SurfaceRegions::Bump& b, Complex z);

// Brent-style bracketed root finding on [lo, hi].
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

}  // namespace harmonica
