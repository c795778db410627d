#include <cmath>

#include "doctest.h"
#include "harmonica/report.hpp"

using namespace harmonica;

namespace {
const QuadratureConfig cfg;
}

TEST_CASE("gauss map values") {
  Family pl = make_family(FamilySpec::plane(), cfg);
  Vec3 n = gauss_map(pl.wd(), SurfacePoint(Complex{0.3, 0.1}));
  CHECK(n.x == doctest::Approx(0));
  CHECK(n.y == doctest::Approx(0));
  CHECK(n.z == doctest::Approx(-1));

  Family horn = make_family(FamilySpec::rotational({0, 0}), cfg);
  Vec3 h = gauss_map(horn.wd(), SurfacePoint(Complex{1, 0}));
  double s = 1.0 / std::sqrt(2.0);
  CHECK(h.x == doctest::Approx(s).epsilon(1e-12));
  CHECK(h.y == doctest::Approx(0).epsilon(1e-12));
  CHECK(h.z == doctest::Approx(-s).epsilon(1e-12));
}

TEST_CASE("rotational horn normals fill an open hemisphere") {
  Family horn = make_family(FamilySpec::rotational({0, 0}), cfg);
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    SurfacePoint P = horn.sample(rng);
    Vec3 n = gauss_map(horn.wd(), P);
    CHECK(n.z < 0.0);
    CHECK(n.z > -1.0);
  }
}

TEST_CASE("complex gauss map via stereographic projection") {
  Family pl = make_family(FamilySpec::plane(), cfg);
  bool inf = true;
  Complex g = complex_gauss(pl.wd(), SurfacePoint(Complex{1, 2}), &inf);
  CHECK_FALSE(inf);
  CHECK(std::abs(g) < 1e-14);

  Family horn = make_family(FamilySpec::rotational({0, 0}), cfg);
  Complex gh = complex_gauss(horn.wd(), SurfacePoint(Complex{1, 0}));
  CHECK(gh.real() == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(std::abs(gh.imag()) < 1e-14);
}

TEST_CASE("degenerate points are rejected") {
  Family bad = make_family(FamilySpec::rotational({-1, 0}), cfg, true);
  CHECK_THROWS_AS(gauss_map(bad.wd(), SurfacePoint(Complex{1, 0})), Error);
  CHECK_THROWS_AS(frame(bad.wd(), SurfacePoint(Complex{1, 0})), Error);
  CHECK_THROWS_AS(beltrami_magnitude(bad.wd(), SurfacePoint(Complex{1, 0})),
                  Error);
}

TEST_CASE("frame on minimal data is conformal") {
  Family minimal = make_family(FamilySpec::rotational({0.25, 0}), cfg);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    SurfacePoint P = minimal.sample(rng);
    GaussFrame fr = frame(minimal.wd(), P);
    CHECK(std::abs(fr.eta - fr.lambda) <= 1e-10 * std::abs(fr.lambda));
    CHECK(std::abs(fr.mu) < 1e-10);
    CHECK(fr.distortion == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("helicoid hopf ratio and distortion at the origin") {
  Family heli = make_family(FamilySpec::helicoid_y1(), cfg);
  SurfacePoint P{Complex{}};
  double k = klotz_density(heli.wd(), P);
  double h = std::abs(hopf(heli.wd(), P));
  CHECK(h / k == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(distortion(heli.wd(), P) ==
        doctest::Approx(3.0 / std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("beltrami magnitude on the horn increases toward the puncture") {
  Family horn = make_family(FamilySpec::rotational({0, 0}), cfg);
  double prev = 0;
  for (double e = 1; e <= 4; e += 1) {
    double mu =
        beltrami_magnitude(horn.wd(), SurfacePoint(std::polar(
                                          std::pow(10.0, -e), 0.7)));
    CHECK(mu > prev);
    prev = mu;
  }
  CHECK(prev > 0.999);
  CHECK(distortion(horn.wd(), SurfacePoint(Complex{1e-3, 0})) > 1e2);
}

TEST_CASE("catenoid stays uniformly quasiconformal") {
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}), cfg);
  Rng rng(17);
  double sup_mu = 0;
  for (int i = 0; i < 5000; ++i)
    sup_mu = std::max(sup_mu, beltrami_magnitude(cat.wd(), cat.sample(rng)));
  CHECK(sup_mu < 1.0 - 0.05);
}

TEST_CASE("qc indices per end") {
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}), cfg);
  auto zero_end = qc_indices(cat.wd(),
                             cat.end_shells(EndId::at(Complex{})).shells);
  CHECK(zero_end.i_upper < 0.05);  // asymptotically conformal
  CHECK(zero_end.chain_ok);
  // shell suprema decrease into the end
  CHECK(zero_end.shell_sup_ratio.back() < zero_end.shell_sup_ratio.front());

  Family horn = make_family(FamilySpec::rotational({0, 0}), cfg);
  auto horn_end = qc_indices(horn.wd(),
                             horn.end_shells(EndId::at(Complex{})).shells);
  CHECK(horn_end.i_upper >= 0.999);
  CHECK(horn_end.chain_ok);

  Family heli = make_family(FamilySpec::helicoid_y1(), cfg);
  auto heli_end = qc_indices(heli.wd(),
                             heli.end_shells(EndId::at_infinity()).shells);
  CHECK(heli_end.i_upper >= 0.999);

  CHECK_THROWS_AS(qc_indices(cat.wd(), {}), Error);
}

TEST_CASE("minimality holds exactly for b = 1/4") {
  Family minimal = make_family(FamilySpec::rotational({0.25, 0}), cfg);
  Family generic = make_family(FamilySpec::rotational({0.3, 0}), cfg);
  Rng rng(21);
  double sup_min = 0, sup_gen = 0;
  for (int i = 0; i < 500; ++i) {
    SurfacePoint P = minimal.sample(rng);
    sup_min = std::max(sup_min, std::abs(hopf(minimal.wd(), P)) /
                                    klotz_density(minimal.wd(), P));
    sup_gen = std::max(sup_gen, std::abs(hopf(generic.wd(), P)));
  }
  CHECK(sup_min < 1e-14);
  CHECK(sup_gen > 1e-3);
}

TEST_CASE("identity suite invariants per family") {
  std::vector<FamilySpec> specs = {
      FamilySpec::plane(),
      FamilySpec::harmonic_graph({Complex{}, Complex{}, Complex{1, 0}}),
      FamilySpec::helicoid_y1(),
      FamilySpec::helicoid_y2(),
      FamilySpec::rotational({0.3, 0.7}),
      FamilySpec::horn(1.5, -0.5),
      FamilySpec::catenoid({-3, 3}, {-1, -1}, 2, 0),
      FamilySpec::flujo(4, 0),
      FamilySpec::torus(0.5),
      FamilySpec::non_qc_example(),
      FamilySpec::remark_contra(),
  };
  for (const auto& spec : specs) {
    Family fam = make_family(spec, cfg);
    IdentityStats st = run_identity_suite(fam, 2000, 1);
    INFO(spec.name());
    CHECK(st.pass());
    CHECK(st.worst_orth < 1e-10);
    CHECK(st.worst_dist_rel < 1e-9);
    CHECK(st.worst_mu_rot < 1e-9);
    CHECK(st.worst_mu_vs_closed < 1e-9);
  }
}

TEST_CASE("full beltrami value matches the finite-difference definition") {
  // mu from the frame (closed-form magnitude, differentiated phase) against
  // both derivatives taken by finite differences
  Family cat = make_family(FamilySpec::catenoid({-3, 3}, {-1, -1}), cfg);
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    SurfacePoint P = cat.sample(rng);
    GaussFrame fr = frame(cat.wd(), P);
    auto g_at = [&](Complex dz) {
      Vec3 n = fr.rotation.apply(gauss_map(cat.wd(), SurfacePoint(P.z + dz)));
      return Complex(n.x, n.y) / (1.0 - n.z);
    };
    double h = 1e-6 * std::max(1.0, std::abs(P.z));
    Complex du = (g_at({h, 0}) - g_at({-h, 0})) / (2.0 * h);
    Complex dv = (g_at({0, h}) - g_at({0, -h})) / (2.0 * h);
    Complex mu_fd = (0.5 * (du + kI * dv)) / (0.5 * (du - kI * dv));
    CHECK(std::abs(mu_fd - fr.mu) < 1e-5 * (1.0 + std::abs(fr.mu)));
  }
}
