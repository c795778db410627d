#include <cmath>

#include "doctest.h"
#include "harmonica/catalog.hpp"
#include "oracles.hpp"

using namespace harmonica;

namespace {
const QuadratureConfig cfg;

Family plane() { return make_family(FamilySpec::plane(), cfg); }
}  // namespace

TEST_CASE("eval_phi on catalog data") {
  Family pl = plane();
  CTriple p = eval_phi(pl.wd(), SurfacePoint(Complex{5, 0}));
  CHECK(p[0] == Complex(1, 0));
  CHECK(p[1] == Complex(0, 1));
  CHECK(p[2] == Complex(0, 0));

  Family rot = make_family(FamilySpec::rotational({1, 0}), cfg);
  CTriple q = eval_phi(rot.wd(), SurfacePoint(Complex{1, 0}));
  CHECK(std::abs(q[0]) < 1e-15);
  CHECK(std::abs(q[1] - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(q[2] - Complex(1, 0)) < 1e-15);

  Family heli = make_family(FamilySpec::helicoid_y1(), cfg);
  CTriple h = eval_phi(heli.wd(), SurfacePoint(Complex{}));
  CHECK(std::abs(h[0] - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(h[1] - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(h[2] - Complex(0, 1)) < 1e-15);
}

TEST_CASE("hopf differential values") {
  CHECK(std::abs(hopf(plane().wd(), SurfacePoint(Complex{2, 1}))) < 1e-15);

  Family rot = make_family(FamilySpec::rotational({1, 0}), cfg);
  CHECK(std::abs(hopf(rot.wd(), SurfacePoint(Complex{1, 0})) - (-3.0)) <
        1e-14);

  Family heli = make_family(FamilySpec::helicoid_y1(), cfg);
  for (Complex z : {Complex{0.3, -1.2}, Complex{-2, 0.5}, Complex{}})
    CHECK(std::abs(hopf(heli.wd(), SurfacePoint(z)) - (-1.0)) < 1e-12);
}

TEST_CASE("hopf matches the symbolic rotational form") {
  Complex b{0.7, -0.4};
  Family rot = make_family(FamilySpec::rotational(b), cfg);
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Complex z = std::polar(std::exp(rng.uniform(-2, 2)),
                           rng.uniform(0, 2 * kPi));
    Complex h = hopf(rot.wd(), SurfacePoint(z));
    Complex symbolic = (1.0 - 4.0 * b) / (z * z);
    CHECK(std::abs(h - symbolic) <= 1e-10 * std::abs(symbolic));
  }
}

TEST_CASE("klotz density values") {
  CHECK(klotz_density(plane().wd(), SurfacePoint(Complex{1, 1})) ==
        doctest::Approx(2.0));
  Family horn = make_family(FamilySpec::rotational({0, 0}), cfg);
  CHECK(klotz_density(horn.wd(), SurfacePoint(Complex{1, 0})) ==
        doctest::Approx(3.0));
  Family heli = make_family(FamilySpec::helicoid_y1(), cfg);
  CHECK(klotz_density(heli.wd(), SurfacePoint(Complex{})) ==
        doctest::Approx(3.0));
}

TEST_CASE("immersion margin") {
  CHECK(immersion_margin(plane().wd(), SurfacePoint(Complex{0.2, 0.4})) ==
        doctest::Approx(2.0));
  // b on the negative real axis: margin vanishes at |z| = sqrt(|b|)
  Family bad = make_family(FamilySpec::rotational({-1, 0}), cfg, true);
  CHECK(immersion_margin(bad.wd(), SurfacePoint(Complex{1, 0})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // figure parameters: positive margin on a log-polar grid
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}), cfg);
  auto grid = cat.verify_grid(100, 100);
  auto check = verify_immersion(cat.wd(), grid);
  CHECK(check.pass);
  CHECK(check.min_margin > 0);
}

TEST_CASE("verify_immersion pass and fail witnesses") {
  Family minimal = make_family(FamilySpec::rotational({0.25, 0}), cfg);
  CHECK(verify_immersion(minimal.wd(), minimal.verify_grid(80, 80)).pass);

  Family bad = make_family(FamilySpec::rotational({-0.5, 0}), cfg, true);
  auto res = verify_immersion(bad.wd(), bad.verify_grid(200, 90));
  CHECK_FALSE(res.pass);
  // witness sits on |z|^2 = 1/2, the root of the margin quartic
  CHECK(std::norm(res.witness.z) == doctest::Approx(0.5).epsilon(0.05));

  Family bad_torus = make_torus_with_b(0.5, 5.0, cfg);
  auto tres = verify_immersion(bad_torus.wd(), bad_torus.verify_grid(90, 90));
  CHECK_FALSE(tres.pass);

  CHECK_THROWS_AS(verify_immersion(minimal.wd(), {}), Error);
}

TEST_CASE("real periods") {
  Family pl = plane();
  auto circle = circle_path(pl.wd().domain, Complex{}, 1.0, 32);
  auto periods = real_periods(pl.wd(), {circle}, cfg);
  CHECK(periods.size() == 1);
  CHECK(periods[0].norm_inf() < 1e-10);

  // wei-cat data with real log coefficients has purely imaginary periods
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}, 2, -1), cfg);
  auto cp = real_periods(cat.wd(), cat.generators, cfg);
  CHECK(cp[0].norm_inf() < 1e-10);

  // detuned torus parameter: the gamma1 period acquires a real part
  Family detuned = make_torus_with_b(0.5, torus_period_b(0.5, cfg) + 0.1, cfg);
  auto tp = real_periods(detuned.wd(), detuned.generators, cfg);
  CHECK(tp[0].norm_inf() > 1e-4);
}

TEST_CASE("open path rejected for periods") {
  Family pl = plane();
  PathSpec open;
  open.pts = {SurfacePoint(Complex{1, 0}), SurfacePoint(Complex{0, 1})};
  CHECK_THROWS_AS(real_periods(pl.wd(), {open}, cfg), Error);
}

TEST_CASE("evaluate_immersion by path integration") {
  Family pl = plane();
  PathSpec path;
  path.pts = {SurfacePoint(Complex{}), SurfacePoint(Complex{1, 1})};
  Vec3 x = evaluate_immersion(pl.immersion, SurfacePoint(Complex{1, 1}), path,
                              cfg);
  CHECK(x.x == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(x.y == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::abs(x.z) < 1e-12);

  CHECK_THROWS_AS(evaluate_immersion(pl.immersion,
                                     SurfacePoint(Complex{2, 0}), path, cfg),
                  Error);
}

TEST_CASE("closed form agrees with path integration") {
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}), cfg);
  const Immersion& imm = cat.immersion;
  Rng rng(5);
  for (int i = 0; i < 12; ++i) {
    double m = std::exp(rng.uniform(-1.2, 1.2));
    double t = rng.uniform(0, 2 * kPi);
    SurfacePoint P(std::polar(m, t));
    // integrate along an explicit polyline from the basepoint
    PathSpec path;
    path.pts.push_back(imm.basepoint);
    extend_path(imm.wd.domain, path, std::polar(1.0, t / 2));
    extend_path(imm.wd.domain, path, std::polar(m, t / 2));
    extend_path(imm.wd.domain, path, P.z);
    Vec3 xi = evaluate_immersion(imm, P, path, cfg);
    Vec3 xc = imm.closed_form(P);
    CHECK((xi - xc).norm_inf() < 1e-8);
  }
}

TEST_CASE("path independence for homotopic paths") {
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}), cfg);
  const Immersion& imm = cat.immersion;
  SurfacePoint target(Complex{-1.3, 0.8});
  PathSpec up, down;
  up.pts.push_back(imm.basepoint);
  extend_path(imm.wd.domain, up, Complex{1.0, 1.4});
  extend_path(imm.wd.domain, up, Complex{-1.3, 1.4});
  extend_path(imm.wd.domain, up, target.z);
  down.pts.push_back(imm.basepoint);
  extend_path(imm.wd.domain, down, Complex{2.2, -0.5});
  extend_path(imm.wd.domain, down, Complex{-2.5, 2.0});
  extend_path(imm.wd.domain, down, target.z);
  Vec3 a = evaluate_immersion(imm, target, up, cfg);
  Vec3 b = evaluate_immersion(imm, target, down, cfg);
  CHECK((a - b).norm_inf() < 1e-8);
}

TEST_CASE("branch continuation returns after null-homotopic loops") {
  Domain dom = Domain::elliptic_curve(0.5);
  // small loop enclosing no branch point
  PathSpec loop = circle_path(dom, Complex{-1, 0}, 0.3, 24);
  CHECK(loop.closed);
  // dumbbell around both 0 and a: trivial monodromy as well
  PathSpec dumbbell = ellipse_path(dom, Complex{0.25, 0}, 0.4, 0.12, 64);
  CHECK(dumbbell.closed);

  // direct continuation check around a full loop
  Complex start = Complex{-1, 0} + 0.3;
  PathSpec probe;
  probe.pts.push_back(SurfacePoint(start, dom.curve.w_ref(start)));
  Complex w0 = *probe.pts.front().w;
  for (int k = 1; k <= 48; ++k)
    extend_path(dom, probe,
                Complex{-1, 0} + std::polar(0.3, 2 * kPi * k / 48.0));
  CHECK(std::abs(*probe.pts.back().w - w0) < 1e-8 * (1 + std::abs(w0)));
}

TEST_CASE("curve points validate their branch") {
  Domain dom = Domain::elliptic_curve(0.5);
  Complex z{0.3, 0.4};
  Complex w = dom.curve.w_ref(z);
  CHECK_NOTHROW(dom.check_point(SurfacePoint(z, w)));
  CHECK_NOTHROW(dom.check_point(SurfacePoint(z, -w)));
  CHECK_THROWS_AS(dom.check_point(SurfacePoint(z, w + 0.1)), Error);
  CHECK_THROWS_AS(dom.check_point(SurfacePoint(z)), Error);
}

TEST_CASE("points outside the domain are rejected") {
  Family horn = make_family(FamilySpec::horn(0, 0), cfg);
  CHECK_THROWS_AS(eval_phi(horn.wd(), SurfacePoint(Complex{})), Error);
  Domain annulus = Domain::annulus(0.5, 2.0);
  CHECK(annulus.contains(Complex{1, 0}));
  CHECK_FALSE(annulus.contains(Complex{3, 0}));
  CHECK_FALSE(annulus.contains(Complex{0.1, 0}));
  Domain disk = Domain::unit_disk();
  CHECK(disk.contains(Complex{0.5, 0}));
  CHECK_FALSE(disk.contains(Complex{1.5, 0}));
}

TEST_CASE("margin positivity matches validity over random samples") {
  // valid and invalid members of each parametric family, scanned directly
  Rng rng(2024);
  QuadratureConfig q = cfg;
  for (int i = 0; i < 12; ++i) {
    Complex b = rng.box(-2, 2);
    Family fam = make_family(FamilySpec::rotational(b), q, true);
    bool valid = rotational_valid(b);
    double quartic_min = oracles::rotational_quartic_min(b);
    CHECK((quartic_min > 1e-12) == valid);
    auto res = verify_immersion(fam.wd(), fam.verify_grid(80, 60));
    if (valid)
      CHECK(res.min_margin >= 0);
    else
      CHECK(res.min_margin < 1e-3);
  }
}
