#include <cmath>

#include "doctest.h"
#include "harmonica/catalog.hpp"
#include "harmonica/quadrature.hpp"

using namespace harmonica;

namespace {
const QuadratureConfig cfg;

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}
}  // namespace

TEST_CASE("contour residues on the unit circle") {
  Domain dom = Domain::punctured_plane({Complex{}});
  PathSpec circle = circle_path(dom, Complex{}, 1.0, 16);
  auto r1 = integrate_contour(
      [](const SurfacePoint& P) { return 1.0 / P.z; }, circle, dom, cfg);
  CHECK(std::abs(r1.value - 2.0 * kPi * kI) < 1e-10);
  auto r2 = integrate_contour(
      [](const SurfacePoint& P) { return 2.0 / P.z; }, circle, dom, cfg);
  CHECK(std::abs(r2.value - 4.0 * kPi * kI) < 1e-10);
}

TEST_CASE("contour result is parameterization invariant") {
  Domain dom = Domain::punctured_plane({Complex{}});
  auto f = [](const SurfacePoint& P) {
    return 1.0 / P.z + std::exp(P.z) / (P.z - 5.0);
  };
  auto coarse =
      integrate_contour(f, circle_path(dom, Complex{}, 1.0, 6), dom, cfg);
  auto fine =
      integrate_contour(f, circle_path(dom, Complex{}, 1.0, 128), dom, cfg);
  CHECK(std::abs(coarse.value - fine.value) <
        cfg.rel_tol * std::abs(fine.value) + 2 * cfg.abs_tol);
  CHECK(std::abs(coarse.value - 2.0 * kPi * kI) < 1e-9);
}

TEST_CASE("error estimates are honest under tolerance halving") {
  auto f = [](double t) { return std::sin(40.0 * t) * std::exp(-t); };
  QuadratureConfig loose = cfg;
  loose.abs_tol = 1e-6;
  loose.rel_tol = 1e-5;
  auto coarse = integrate_real(f, 0.0, 3.0, loose);
  QuadratureConfig tight = loose;
  tight.abs_tol /= 2;
  tight.rel_tol /= 2;
  auto fine = integrate_real(f, 0.0, 3.0, tight);
  CHECK(std::abs(coarse.value - fine.value) <= coarse.error + 1e-15);
}

TEST_CASE("tanh-sinh endpoint singularities") {
  // accuracy is bounded by the configured tolerances
  auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
  CHECK(std::abs(integrate_improper(inv_sqrt, 0.0, 1.0, true, false, cfg) -
                 2.0) < 2.0 * cfg.rel_tol + cfg.abs_tol);
  auto arcsine = [](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); };
  CHECK(std::abs(integrate_improper(arcsine, 0.0, 1.0, true, true, cfg) -
                 kPi) < kPi * cfg.rel_tol + cfg.abs_tol);
  QuadratureConfig tight = cfg;
  tight.abs_tol = 1e-13;
  tight.rel_tol = 1e-13;
  CHECK(integrate_improper(inv_sqrt, 0.0, 1.0, true, false, tight) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_improper(arcsine, 0.0, 1.0, true, true, tight) ==
        doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("curve cut integral regression fixture") {
  // int_0^{1/2} dz/|w| on w^2 = (z-1/2)(z/2-1)/z, |w| real on the cut;
  // expected value frozen from an independent high-precision evaluation
  double a = 0.5;
  auto f = [&](double z) {
    return 1.0 / std::sqrt((a - z) * (1.0 - a * z) / z);
  };
  QuadratureConfig tight = cfg;
  tight.abs_tol = 1e-13;
  tight.rel_tol = 1e-13;
  double v = integrate_improper(f, 0.0, a, true, true, tight);
  CHECK(v > 0);
  CHECK(v == doctest::Approx(0.87315258189267554).epsilon(1e-12));
}

TEST_CASE("cauchy derivative") {
  CHECK(std::abs(cauchy_derivative([](Complex z) { return z * z; },
                                   Complex{3, 0}, 0.5, cfg) -
                 6.0) < 1e-9);
  CHECK(std::abs(cauchy_derivative([](Complex z) { return 1.0 / z; },
                                   Complex{1, 0}, 0.4, cfg) -
                 (-1.0)) < 1e-9);
  CHECK(std::abs(cauchy_derivative([](Complex z) { return std::exp(z); },
                                   Complex{}, 0.5, cfg) -
                 1.0) < 1e-9);
}

TEST_CASE("laurent coefficients of simple poles") {
  auto c = laurent_coefficients([](Complex z) { return 1.0 / (z * z); },
                                Complex{}, -3, 2, 0.7, cfg);
  CHECK(std::abs(c[-2] - 1.0) < 1e-10);
  CHECK(std::abs(c[-1]) < 1e-10);
  CHECK(std::abs(c[0]) < 1e-10);
}

TEST_CASE("laurent matches an analytic series for |k| <= 6") {
  // e^z / z^3: c_k = 1/(k+3)! for k >= -3
  auto c = laurent_coefficients(
      [](Complex z) { return std::exp(z) / (z * z * z); }, Complex{}, -6, 6,
      0.8, cfg);
  for (int k = -6; k <= 6; ++k) {
    double expect = k >= -3 ? 1.0 / factorial(k + 3) : 0.0;
    CHECK(std::abs(c[k] - expect) < 1e-8);
  }
}

TEST_CASE("laurent of catalog data") {
  // catenoid phi_1 with r1 = 2 about 0
  auto c = laurent_coefficients(
      [](Complex z) { return 1.0 / (z * z) + 2.0 / z + Complex{0.5, 0}; },
      Complex{}, -3, 1, 0.5, cfg);
  CHECK(std::abs(c[-2] - 1.0) < 1e-10);
  CHECK(std::abs(c[-1] - 2.0) < 1e-10);
  // flujo phi_3 = 12/(z^2-1) about z = 1: residue 6
  auto d = laurent_coefficients(
      [](Complex z) { return 12.0 / (z * z - 1.0); }, Complex{1, 0}, -2, 1,
      0.5, cfg);
  CHECK(std::abs(d[-1] - 6.0) < 1e-10);
  CHECK(std::abs(d[-2]) < 1e-10);
}

TEST_CASE("surface quadrature on closed-form densities") {
  Domain dom = Domain::punctured_plane({Complex{}});
  SurfaceRegions regions;
  regions.logpolar = {{Complex{}, -1.0, 1.0, true, true, 0, 1.0}};
  // zero density
  auto zero = integrate_surface([](const SurfacePoint&) { return 0.0; }, dom,
                                regions, cfg);
  CHECK(zero.value == doctest::Approx(0.0));
  // gaussian: integral over the plane is pi
  auto gauss = integrate_surface(
      [](const SurfacePoint& P) { return std::exp(-std::norm(P.z)); }, dom,
      regions, cfg);
  CHECK(gauss.value == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("surface quadrature flags non-decaying tails") {
  Domain dom = Domain::punctured_plane({Complex{}});
  SurfaceRegions regions;
  regions.logpolar = {{Complex{}, -1.0, 1.0, true, true, 0, 1.0}};
  CHECK_THROWS_AS(
      integrate_surface([](const SurfacePoint&) { return 1.0; }, dom, regions,
                        cfg),
      Error);
  try {
    integrate_surface([](const SurfacePoint&) { return 1.0; }, dom, regions,
                      cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TailNotDecaying);
  }
}

TEST_CASE("torus gamma2 period has vanishing real part") {
  QuadratureConfig qcfg;
  TorusPeriodDiagnostics diag;
  torus_period_b(0.5, qcfg, &diag);
  CHECK(diag.gamma2_real_period < 1e-10);
}

TEST_CASE("bracketed root finding") {
  double r = find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1, 1, 1e-12),
                  Error);
}
