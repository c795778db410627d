#include "harmonica/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace harmonica {

// ==== FamilySpec ============================================================

std::string FamilySpec::name() const {
  switch (kind) {
    case Kind::Plane: return "plane";
    case Kind::HarmonicGraph: return "graph";
    case Kind::HelicoidY1: return "helicoid-y1";
    case Kind::HelicoidY2: return "helicoid-y2";
    case Kind::Rotational: return "rotational";
    case Kind::Horn: return "horn";
    case Kind::Catenoid: return "catenoid";
    case Kind::Flujo: return "flujo";
    case Kind::Torus: return "torus";
    case Kind::NonQCExampleY: return "nonqc-y";
    case Kind::RemarkContraExample: return "contra";
  }
  return "?";
}

FamilySpec FamilySpec::plane() { return {}; }
FamilySpec FamilySpec::harmonic_graph(std::vector<Complex> poly) {
  FamilySpec s;
  s.kind = Kind::HarmonicGraph;
  s.graph_poly = std::move(poly);
  return s;
}
FamilySpec FamilySpec::helicoid_y1() {
  FamilySpec s;
  s.kind = Kind::HelicoidY1;
  return s;
}
FamilySpec FamilySpec::helicoid_y2() {
  FamilySpec s;
  s.kind = Kind::HelicoidY2;
  return s;
}
FamilySpec FamilySpec::rotational(Complex b) {
  FamilySpec s;
  s.kind = Kind::Rotational;
  s.b = b;
  return s;
}
FamilySpec FamilySpec::horn(double r1, double r2) {
  FamilySpec s;
  s.kind = Kind::Horn;
  s.r1 = r1;
  s.r2 = r2;
  return s;
}
FamilySpec FamilySpec::catenoid(Complex alpha, Complex beta, double r1,
                                double r2) {
  FamilySpec s;
  s.kind = Kind::Catenoid;
  s.alpha = alpha;
  s.beta = beta;
  s.r1 = r1;
  s.r2 = r2;
  return s;
}
FamilySpec FamilySpec::flujo(double b, double c) {
  FamilySpec s;
  s.kind = Kind::Flujo;
  s.flujo_b = b;
  s.flujo_c = c;
  return s;
}
FamilySpec FamilySpec::torus(double a) {
  FamilySpec s;
  s.kind = Kind::Torus;
  s.a = a;
  return s;
}
FamilySpec FamilySpec::non_qc_example() {
  FamilySpec s;
  s.kind = Kind::NonQCExampleY;
  return s;
}
FamilySpec FamilySpec::remark_contra() {
  FamilySpec s;
  s.kind = Kind::RemarkContraExample;
  return s;
}

namespace {

Complex json_complex(const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) return parse_complex(v.get<std::string>());
  if (v.is_array() && v.size() == 2)
    return {v[0].get<double>(), v[1].get<double>()};
  fail(Errc::InvalidParameters, "bad complex value in spec json");
}

}  // namespace

FamilySpec family_from_json(const nlohmann::json& j) {
  if (!j.contains("family"))
    fail(Errc::InvalidParameters, "spec json needs a \"family\" key");
  std::string fam = j.at("family").get<std::string>();
  nlohmann::json params = j.value("params", nlohmann::json::object());
  auto cpx = [&](const char* key, Complex dflt = {}) {
    return params.contains(key) ? json_complex(params.at(key)) : dflt;
  };
  auto real = [&](const char* key, double dflt = 0.0) {
    return params.contains(key) ? params.at(key).get<double>() : dflt;
  };
  if (fam == "plane") return FamilySpec::plane();
  if (fam == "graph") {
    std::vector<Complex> poly;
    if (params.contains("poly"))
      for (const auto& c : params.at("poly")) poly.push_back(json_complex(c));
    if (poly.empty()) poly = {Complex{}, Complex{}, Complex{1, 0}};  // z^2
    return FamilySpec::harmonic_graph(poly);
  }
  if (fam == "helicoid-y1") return FamilySpec::helicoid_y1();
  if (fam == "helicoid-y2") return FamilySpec::helicoid_y2();
  if (fam == "rotational") return FamilySpec::rotational(cpx("b"));
  if (fam == "horn") return FamilySpec::horn(real("r1"), real("r2"));
  if (fam == "catenoid")
    return FamilySpec::catenoid(cpx("alpha"), cpx("beta"), real("r1"),
                                real("r2"));
  if (fam == "flujo") return FamilySpec::flujo(real("b", 4), real("c", 0));
  if (fam == "torus") return FamilySpec::torus(real("a", 0.5));
  if (fam == "nonqc-y") return FamilySpec::non_qc_example();
  if (fam == "contra") return FamilySpec::remark_contra();
  fail(Errc::InvalidParameters, "unknown family '" + fam + "'");
}

nlohmann::json family_to_json(const FamilySpec& spec) {
  nlohmann::json params = nlohmann::json::object();
  switch (spec.kind) {
    case FamilySpec::Kind::Rotational:
      params["b"] = format_complex(spec.b);
      break;
    case FamilySpec::Kind::Horn:
      params["r1"] = spec.r1;
      params["r2"] = spec.r2;
      break;
    case FamilySpec::Kind::Catenoid:
      params["alpha"] = format_complex(spec.alpha);
      params["beta"] = format_complex(spec.beta);
      params["r1"] = spec.r1;
      params["r2"] = spec.r2;
      break;
    case FamilySpec::Kind::Flujo:
      params["b"] = spec.flujo_b;
      params["c"] = spec.flujo_c;
      break;
    case FamilySpec::Kind::Torus:
      params["a"] = spec.a;
      break;
    case FamilySpec::Kind::HarmonicGraph: {
      auto arr = nlohmann::json::array();
      for (const auto& c : spec.graph_poly) arr.push_back(format_complex(c));
      params["poly"] = arr;
      break;
    }
    default:
      break;
  }
  return {{"family", spec.name()}, {"params", params}};
}

// ==== validity predicates ===================================================

bool rotational_valid(Complex b) {
  return !(b.imag() == 0.0 && b.real() < 0.0);
}

bool omega_member(Complex alpha, Complex beta) {
  if (std::abs(alpha) <= std::abs(beta)) return false;
  if (alpha.real() >= 0.0 && std::abs(alpha.imag()) <= std::abs(beta))
    return false;
  return true;
}

bool flujo_valid(double b, double c) { return b > 3.0 && c < 2.0; }

double catenoid_injectivity_margin(Complex alpha, Complex beta, double m) {
  return -alpha.real() + 1.0 / (m * m) +
         m * m / 4.0 * (std::norm(alpha) - std::norm(beta));
}

Vec3 catenoid_closed_form(Complex alpha, Complex beta, double r1, double r2,
                          double m, double t) {
  double ct = std::cos(t), st = std::sin(t);
  double x1 = ((-2.0 + (alpha + beta).real() * m * m) * ct +
               (beta - alpha).imag() * m * m * st + 2.0 * r1 * m * std::log(m)) /
              (2.0 * m);
  double x2 = ((-2.0 + (alpha - beta).real() * m * m) * st +
               (alpha + beta).imag() * m * m * ct + 2.0 * r2 * m * std::log(m)) /
              (2.0 * m);
  return {x1, x2, std::log(m)};
}

// ==== torus period problem ==================================================

namespace {

PathSpec torus_gamma1(const Domain& dom, double a, int segments = 192) {
  double c = 0.15 * a;
  return ellipse_path(dom, a / 2.0, a / 2.0 + c, c, segments);
}

PathSpec torus_gamma2(const Domain& dom, double a, int segments = 256) {
  double c = 0.15 * a;
  double mid = (a + 1.0 / a) / 2.0;
  return ellipse_path(dom, mid, (1.0 / a - a) / 2.0 + c, c, segments);
}

}  // namespace

double torus_period_b(double a, const QuadratureConfig& cfg,
                      TorusPeriodDiagnostics* diag) {
  if (!(0 < a && a < 1))
    fail(Errc::InvalidParameters, "torus parameter a must lie in (0,1)");
  Domain dom = Domain::elliptic_curve(a);
  PathSpec g1 = torus_gamma1(dom, a);

  // Phi_2(b) = (z^2+1)/(z^2 w) dz + b dz/(z w): the gamma1 period is affine
  // in b; solve Re period = 0 by bracketed root finding on [-2, 0].
  auto p0 = integrate_contour(
      [&](const SurfacePoint& P) {
        Complex z = P.z;
        return (z * z + 1.0) / (z * z * (*P.w));
      },
      g1, dom, cfg);
  auto p1 = integrate_contour(
      [&](const SurfacePoint& P) { return 1.0 / (P.z * (*P.w)); }, g1, dom,
      cfg);
  auto period_re = [&](double b) {
    return p0.value.real() + b * p1.value.real();
  };
  double b = find_root(period_re, -2.0, 0.0, 1e-15);

  if (diag) {
    diag->b = b;
    diag->gamma1_residual = std::abs(period_re(b));
    PathSpec g2 = torus_gamma2(dom, a);
    auto q = integrate_contour(
        [&](const SurfacePoint& P) {
          Complex z = P.z;
          return (z * z + b * z + 1.0) / (z * z * (*P.w));
        },
        g2, dom, cfg);
    diag->gamma2_real_period = std::abs(q.value.real());

    // candidate ratios from the cut integrals over [0,a]
    auto abs_w = [&](double z) {
      return std::sqrt((a - z) * (1.0 - a * z) / z);
    };
    double i1 = integrate_improper([&](double z) { return 1.0 / abs_w(z); },
                                   0.0, a, true, true, cfg);
    double i2 = integrate_improper(
        [&](double z) { return 1.0 / (z * abs_w(z)); }, 0.0, a, true, true,
        cfg);
    diag->ratio_candidate_a = -2.0 * i1 / i2;
    diag->ratio_candidate_b = -2.0 * i2 / i1;
    diag->matched_ratio =
        std::abs(diag->ratio_candidate_a - b) <
                std::abs(diag->ratio_candidate_b - b)
            ? diag->ratio_candidate_a
            : diag->ratio_candidate_b;
  }
  return b;
}

// ==== family assembly =======================================================

namespace {

using Kind = FamilySpec::Kind;

LaurentData exact_series(std::initializer_list<std::pair<int, CTriple>> cs) {
  LaurentData d;
  for (auto& [k, v] : cs) d.coeffs[k] = v;
  return d;
}

// numeric Laurent extraction for one end (local-coordinate pullbacks)
LaurentData extract_series(const WeierstrassData& wd, const EndId& end,
                           double radius, const QuadratureConfig& cfg) {
  LaurentData d;
  auto pull = [&](int j) {
    return [&wd, &end, j](Complex t) -> Complex {
      switch (end.chart) {
        case EndId::Chart::AtPoint:
          return wd.phi(SurfacePoint(end.p + t))[j];
        case EndId::Chart::AtInfinity: {
          Complex z = 1.0 / t;
          return -wd.phi(SurfacePoint(z))[j] / (t * t);
        }
        case EndId::Chart::CurveZero:
        case EndId::Chart::CurveInfinity: {
          bool near_zero = end.chart == EndId::Chart::CurveZero;
          const CurveEquation& cv = wd.domain.curve;
          Complex z = cv.z_of_u(t, near_zero);
          SurfacePoint P(z, 1.0 / t);
          return wd.phi(P)[j] * cv.dz_du(t, near_zero);
        }
      }
      return Complex{};
    };
  };
  QuadratureConfig tight = cfg;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-12;
  for (int j = 0; j < 3; ++j) {
    auto c = laurent_coefficients(pull(j), Complex{}, d.k_min, d.k_max, radius,
                                  tight);
    for (auto& [k, v] : c) {
      auto it = d.coeffs.find(k);
      if (it == d.coeffs.end()) d.coeffs[k] = CTriple{};
      d.coeffs[k][j] = v;
    }
  }
  return d;
}

// polynomial evaluation and derivatives for HarmonicGraph
Complex poly_eval(const std::vector<Complex>& c, Complex z, int deriv) {
  Complex acc{};
  for (int k = static_cast<int>(c.size()) - 1; k >= deriv; --k) {
    double fac = 1;
    for (int d = 0; d < deriv; ++d) fac *= k - d;
    acc = acc * z + fac * c[k];
  }
  return acc;
}

struct FlujoCoeffs {
  double b, c;
  Complex p(double t, Complex z) const {
    Complex z2 = z * z;
    return (6.0 + t) + (12.0 - 2.0 * t) * z2 + (t - 2.0) * z2 * z2;
  }
  Complex dp(double t, Complex z) const {
    Complex z2 = z * z;
    return 2.0 * (12.0 - 2.0 * t) * z + 4.0 * (t - 2.0) * z2 * z;
  }
};

}  // namespace

Family make_family(const FamilySpec& spec, const QuadratureConfig& cfg,
                   bool allow_invalid) {
  Family fam;
  fam.spec = spec;
  Immersion& imm = fam.immersion;
  WeierstrassData& wd = imm.wd;

  switch (spec.kind) {
    case Kind::Plane: {
      wd.domain = Domain::punctured_plane();
      wd.phi = [](const SurfacePoint&) { return CTriple{1.0, kI, 0.0}; };
      wd.phi_prime = [](const SurfacePoint&) { return CTriple{}; };
      wd.laurent[end_key(EndId::at_infinity())] =
          exact_series({{-2, {-1.0, -kI, 0.0}}});
      imm.basepoint = SurfacePoint(Complex{});
      imm.closed_form = [](const SurfacePoint& P) {
        return Vec3{P.z.real(), -P.z.imag(), 0.0};
      };
      fam.genus = 0;
      fam.ends = {EndId::at_infinity()};
      break;
    }

    case Kind::HarmonicGraph: {
      if (spec.graph_poly.empty())
        fail(Errc::InvalidParameters, "graph needs polynomial coefficients");
      auto poly = spec.graph_poly;
      wd.domain = Domain::punctured_plane();
      wd.phi = [poly](const SurfacePoint& P) {
        return CTriple{1.0, -kI, poly_eval(poly, P.z, 1)};
      };
      wd.phi_prime = [poly](const SurfacePoint& P) {
        return CTriple{0.0, 0.0, poly_eval(poly, P.z, 2)};
      };
      if (poly.size() <= 6) {
        LaurentData d;
        d.coeffs[-2] = {-1.0, kI, 0.0};
        for (int k = 1; k < static_cast<int>(poly.size()); ++k) {
          int e = -k - 1;
          if (d.coeffs.find(e) == d.coeffs.end()) d.coeffs[e] = CTriple{};
          d.coeffs[e][2] -= static_cast<double>(k) * poly[k];
        }
        wd.laurent[end_key(EndId::at_infinity())] = d;
      }
      imm.basepoint = SurfacePoint(Complex{});
      imm.closed_form = [poly](const SurfacePoint& P) {
        return Vec3{P.z.real(), P.z.imag(), poly_eval(poly, P.z, 0).real()};
      };
      fam.genus = 0;
      fam.ends = {EndId::at_infinity()};
      break;
    }

    case Kind::HelicoidY1: {
      wd.domain = Domain::punctured_plane();
      wd.phi = [](const SurfacePoint& P) {
        Complex e = std::exp(P.z);
        return CTriple{e, kI * e, kI};
      };
      wd.phi_prime = [](const SurfacePoint& P) {
        Complex e = std::exp(P.z);
        return CTriple{e, kI * e, 0.0};
      };
      imm.basepoint = SurfacePoint(Complex{});
      imm.closed_form = [](const SurfacePoint& P) {
        Complex e = std::exp(P.z);
        return Vec3{e.real(), -e.imag(), -P.z.imag()};
      };
      fam.genus = 0;
      fam.algebraic = false;  // essential singularity at infinity
      fam.ends = {EndId::at_infinity()};
      break;
    }

    case Kind::HelicoidY2: {
      // conformal half-helicoid on {Re z > 0}, realized on the unit disk
      // through the Moebius chart z = (1+w)/(1-w)
      wd.domain = Domain::unit_disk();
      auto chart = [](Complex w) { return (1.0 + w) / (1.0 - w); };
      auto chart_d = [](Complex w) {
        Complex d = 1.0 - w;
        return 2.0 / (d * d);
      };
      auto chart_dd = [](Complex w) {
        Complex d = 1.0 - w;
        return 4.0 / (d * d * d);
      };
      wd.phi = [=](const SurfacePoint& P) {
        Complex t = chart(P.z), td = chart_d(P.z);
        return CTriple{std::cosh(t) * td, kI * std::sinh(t) * td, kI * td};
      };
      wd.phi_prime = [=](const SurfacePoint& P) {
        Complex t = chart(P.z), td = chart_d(P.z), tdd = chart_dd(P.z);
        return CTriple{std::sinh(t) * td * td + std::cosh(t) * tdd,
                       kI * (std::cosh(t) * td * td + std::sinh(t) * tdd),
                       kI * tdd};
      };
      imm.basepoint = SurfacePoint(Complex{});
      imm.closed_form = [=](const SurfacePoint& P) {
        Complex t = chart(P.z);
        return Vec3{std::sinh(t).real(), -std::cosh(t).imag(), -t.imag()};
      };
      fam.genus = 0;
      fam.algebraic = false;
      break;
    }

    case Kind::Rotational: {
      Complex b = spec.b;
      if (!allow_invalid && !rotational_valid(b))
        fail(Errc::InvalidParameters,
             "rotational data is complete only for b outside (-inf,0)");
      wd.domain = Domain::punctured_plane({Complex{}});
      wd.phi = [b](const SurfacePoint& P) {
        Complex iz2 = 1.0 / (P.z * P.z);
        return CTriple{1.0 - b * iz2, kI * (1.0 + b * iz2), 1.0 / P.z};
      };
      wd.phi_prime = [b](const SurfacePoint& P) {
        Complex iz3 = 1.0 / (P.z * P.z * P.z);
        return CTriple{2.0 * b * iz3, -2.0 * kI * b * iz3,
                       -1.0 / (P.z * P.z)};
      };
      wd.laurent[end_key(EndId::at(Complex{}))] =
          exact_series({{-2, {-b, kI * b, 0.0}}, {-1, {0.0, 0.0, 1.0}},
                        {0, {1.0, kI, 0.0}}});
      wd.laurent[end_key(EndId::at_infinity())] =
          exact_series({{-2, {-1.0, -kI, 0.0}}, {-1, {0.0, 0.0, -1.0}},
                        {0, {b, -kI * b, 0.0}}});
      imm.basepoint = SurfacePoint(Complex{1.0, 0.0});
      imm.closed_form = [b](const SurfacePoint& P) {
        Complex f1 = P.z + b / P.z;
        Complex f2 = kI * (P.z - b / P.z);
        return Vec3{f1.real(), f2.real(), std::log(std::abs(P.z))};
      };
      fam.genus = 0;
      fam.ends = {EndId::at(Complex{}), EndId::at_infinity()};
      break;
    }

    case Kind::Horn: {
      double r1 = spec.r1, r2 = spec.r2;
      wd.domain = Domain::punctured_plane({Complex{}});
      wd.phi = [r1, r2](const SurfacePoint& P) {
        Complex iz = 1.0 / P.z;
        return CTriple{1.0 + r1 * iz, -kI + r2 * iz, iz};
      };
      wd.phi_prime = [r1, r2](const SurfacePoint& P) {
        Complex iz2 = -1.0 / (P.z * P.z);
        return CTriple{r1 * iz2, r2 * iz2, iz2};
      };
      wd.laurent[end_key(EndId::at(Complex{}))] =
          exact_series({{-1, {r1, r2, 1.0}}, {0, {1.0, -kI, 0.0}}});
      wd.laurent[end_key(EndId::at_infinity())] =
          exact_series({{-2, {-1.0, kI, 0.0}}, {-1, {-r1, -r2, -1.0}}});
      imm.basepoint = SurfacePoint(Complex{1.0, 0.0});
      imm.closed_form = [r1, r2](const SurfacePoint& P) {
        double lg = std::log(std::abs(P.z));
        return Vec3{r1 * lg + P.z.real(), r2 * lg + P.z.imag(), lg};
      };
      fam.genus = 0;
      fam.ends = {EndId::at(Complex{}), EndId::at_infinity()};
      break;
    }

    case Kind::Catenoid: {
      Complex alpha = spec.alpha, beta = spec.beta;
      if (std::abs(std::abs(alpha) - std::abs(beta)) < 1e-14)
        fail(Errc::InvalidParameters, "catenoid data requires |alpha| != |beta|");
      if (!allow_invalid && !omega_member(alpha, beta))
        fail(Errc::InvalidParameters, "(alpha,beta) outside Omega");
      double r1 = spec.r1, r2 = spec.r2;
      Complex A = (alpha + std::conj(beta)) / 2.0;
      Complex B = (alpha - std::conj(beta)) / (2.0 * kI);
      wd.domain = Domain::punctured_plane({Complex{}});
      wd.phi = [=](const SurfacePoint& P) {
        Complex iz = 1.0 / P.z, iz2 = iz * iz;
        return CTriple{iz2 + r1 * iz + A, kI * iz2 + r2 * iz + B, iz};
      };
      wd.phi_prime = [=](const SurfacePoint& P) {
        Complex iz2 = 1.0 / (P.z * P.z), iz3 = iz2 / P.z;
        return CTriple{-2.0 * iz3 - r1 * iz2, -2.0 * kI * iz3 - r2 * iz2,
                       -iz2};
      };
      wd.laurent[end_key(EndId::at(Complex{}))] =
          exact_series({{-2, {1.0, kI, 0.0}}, {-1, {r1, r2, 1.0}},
                        {0, {A, B, 0.0}}});
      wd.laurent[end_key(EndId::at_infinity())] =
          exact_series({{-2, {-A, -B, 0.0}}, {-1, {-r1, -r2, -1.0}},
                        {0, {-1.0, -kI, 0.0}}});
      imm.basepoint = SurfacePoint(Complex{1.0, 0.0});
      imm.closed_form = [=](const SurfacePoint& P) {
        return catenoid_closed_form(alpha, beta, r1, r2, std::abs(P.z),
                                    std::arg(P.z));
      };
      fam.genus = 0;
      fam.ends = {EndId::at(Complex{}), EndId::at_infinity()};
      break;
    }

    case Kind::Flujo: {
      double b = spec.flujo_b, c = spec.flujo_c;
      if (!allow_invalid && !flujo_valid(b, c))
        fail(Errc::InvalidParameters, "flujo family needs b > 3 and c < 2");
      FlujoCoeffs fc{b, c};
      wd.domain = Domain::punctured_plane({Complex{-1, 0}, Complex{1, 0}});
      wd.phi = [fc](const SurfacePoint& P) {
        Complex z = P.z, d = z * z - 1.0, d2 = d * d;
        return CTriple{-kI * fc.p(fc.b, z) / d2, fc.p(fc.c, z) / d2,
                       12.0 / d};
      };
      wd.phi_prime = [fc](const SurfacePoint& P) {
        Complex z = P.z, d = z * z - 1.0, d3 = d * d * d;
        auto dq = [&](double t) {
          return (fc.dp(t, z) * d - 4.0 * z * fc.p(t, z)) / d3;
        };
        return CTriple{-kI * dq(fc.b), dq(fc.c), -24.0 * z / (d * d)};
      };
      imm.basepoint = SurfacePoint(kI);
      imm.closed_form = [b, c](const SurfacePoint& P) {
        Complex z = P.z;
        Complex g = 8.0 * z / (z * z - 1.0);
        return Vec3{((b - 2.0) * z - g).imag(), ((c - 2.0) * z - g).real(),
                    6.0 * std::log(std::abs((z - 1.0) / (z + 1.0)))};
      };
      imm.base_value = imm.closed_form(imm.basepoint);
      fam.genus = 0;
      fam.ends = {EndId::at(Complex{1, 0}), EndId::at(Complex{-1, 0}),
                  EndId::at_infinity()};
      for (const auto& e : fam.ends)
        wd.laurent[end_key(e)] = extract_series(
            wd, e, e.chart == EndId::Chart::AtInfinity ? 0.4 : 0.5, cfg);
      break;
    }

    case Kind::Torus: {
      double a = spec.a;
      fam.torus_b = torus_period_b(a, cfg);
      double b = fam.torus_b;
      wd.domain = Domain::elliptic_curve(a);
      wd.phi = [b](const SurfacePoint& P) {
        Complex z = P.z, w = *P.w, iz = 1.0 / z, iz2 = iz * iz;
        return CTriple{kI * (1.0 - iz2) / w, (1.0 + b * iz + iz2) / w, iz};
      };
      double ca = a;
      wd.phi_prime = [b, ca](const SurfacePoint& P) {
        Complex z = P.z, w = *P.w;
        Complex iz = 1.0 / z, iz2 = iz * iz, iz3 = iz2 * iz;
        Complex g1 = 1.0 - iz2, g1d = 2.0 * iz3;
        Complex g2 = 1.0 + b * iz + iz2, g2d = -b * iz2 - 2.0 * iz3;
        Complex fd = ca - ca * iz2;  // f'(z)
        Complex w3 = w * w * w;
        return CTriple{kI * (g1d / w - g1 * fd / (2.0 * w3)),
                       g2d / w - g2 * fd / (2.0 * w3), -iz2};
      };
      imm.basepoint = SurfacePoint(Complex{-1.0, 0.0}, kI * (1.0 + a));
      fam.genus = 1;
      fam.ends = {EndId::curve_zero(), EndId::curve_infinity()};
      double ur = 0.35 / (1.0 + a);
      for (const auto& e : fam.ends)
        wd.laurent[end_key(e)] = extract_series(wd, e, ur, cfg);
      break;
    }

    case Kind::NonQCExampleY: {
      wd.domain = Domain::punctured_plane({Complex{}});
      wd.phi = [](const SurfacePoint& P) {
        Complex z = P.z, iz = 1.0 / z, iz2 = iz * iz, iz3 = iz2 * iz;
        return CTriple{-kI * (z + iz3), 1.0 - iz2, iz};
      };
      wd.phi_prime = [](const SurfacePoint& P) {
        Complex z = P.z, iz = 1.0 / z, iz2 = iz * iz;
        Complex iz4 = iz2 * iz2;
        return CTriple{-kI * (1.0 - 3.0 * iz4), 2.0 * iz2 * iz, -iz2};
      };
      wd.laurent[end_key(EndId::at(Complex{}))] =
          exact_series({{-3, {-kI, 0.0, 0.0}}, {-2, {0.0, -1.0, 0.0}},
                        {-1, {0.0, 0.0, 1.0}}, {0, {0.0, 1.0, 0.0}},
                        {1, {-kI, 0.0, 0.0}}});
      wd.laurent[end_key(EndId::at_infinity())] =
          exact_series({{-3, {kI, 0.0, 0.0}}, {-2, {0.0, -1.0, 0.0}},
                        {-1, {0.0, 0.0, -1.0}}, {0, {0.0, 1.0, 0.0}},
                        {1, {kI, 0.0, 0.0}}});
      imm.basepoint = SurfacePoint(Complex{1.0, 0.0});
      imm.closed_form = [](const SurfacePoint& P) {
        Complex z = P.z, z2 = z * z;
        return Vec3{((z2 * z2 - 1.0) / (2.0 * z2)).imag(),
                    (1.0 / z + z).real(), std::log(std::abs(z))};
      };
      fam.genus = 0;
      fam.ends = {EndId::at(Complex{}), EndId::at_infinity()};
      break;
    }

    case Kind::RemarkContraExample: {
      wd.domain = Domain::punctured_plane({Complex{}});
      wd.phi = [](const SurfacePoint& P) {
        return CTriple{1.0, kI, -1.0 / (P.z * P.z)};
      };
      wd.phi_prime = [](const SurfacePoint& P) {
        return CTriple{0.0, 0.0, 2.0 / (P.z * P.z * P.z)};
      };
      wd.laurent[end_key(EndId::at(Complex{}))] =
          exact_series({{-2, {0.0, 0.0, -1.0}}, {0, {1.0, kI, 0.0}}});
      wd.laurent[end_key(EndId::at_infinity())] =
          exact_series({{-2, {-1.0, -kI, 0.0}}, {0, {0.0, 0.0, 1.0}}});
      imm.basepoint = SurfacePoint(Complex{1.0, 0.0});
      imm.closed_form = [](const SurfacePoint& P) {
        return Vec3{P.z.real(), -P.z.imag(), (1.0 / P.z).real()};
      };
      fam.genus = 0;
      fam.ends = {EndId::at(Complex{}), EndId::at_infinity()};
      break;
    }
  }

  if (imm.has_closed_form()) imm.base_value = imm.closed_form(imm.basepoint);

  // homology generators
  switch (spec.kind) {
    case Kind::Rotational:
    case Kind::Horn:
    case Kind::Catenoid:
    case Kind::NonQCExampleY:
    case Kind::RemarkContraExample:
      fam.generators = {circle_path(wd.domain, Complex{}, 1.0, 96)};
      break;
    case Kind::Flujo:
      fam.generators = {circle_path(wd.domain, Complex{1, 0}, 0.4, 96),
                        circle_path(wd.domain, Complex{-1, 0}, 0.4, 96)};
      break;
    case Kind::Torus: {
      fam.generators = {torus_gamma1(wd.domain, spec.a),
                        torus_gamma2(wd.domain, spec.a)};
      break;
    }
    default:
      break;
  }

  // surface-integral decomposition
  switch (spec.kind) {
    case Kind::Plane:
    case Kind::HarmonicGraph:
    case Kind::HelicoidY1:
    case Kind::Rotational:
    case Kind::Horn:
    case Kind::Catenoid:
    case Kind::NonQCExampleY:
    case Kind::RemarkContraExample:
      fam.regions.logpolar = {{Complex{}, -1.0, 1.0, true, true, 0, 1.0}};
      break;
    case Kind::HelicoidY2:
      fam.regions.logpolar = {{Complex{}, -4.0, -0.05, true, false, 0, 1.0}};
      break;
    case Kind::Flujo: {
      fam.regions.logpolar = {
          {Complex{}, std::log(0.3), std::log(3.0), true, true, 0, 1.0}};
      fam.regions.bumps = {{Complex{1, 0}, 0.25, 0.5},
                           {Complex{-1, 0}, 0.25, 0.5}};
      fam.regions.cusps = {{Complex{1, 0}, 0.5, 0}, {Complex{-1, 0}, 0.5, 0}};
      break;
    }
    case Kind::Torus: {
      double a = spec.a;
      double rc = 0.3 * std::min(a, 1.0 / a - a);
      fam.regions.logpolar = {{Complex{}, std::log(0.5 * a),
                               std::log(2.0 / a), true, true, 2, 1.0}};
      fam.regions.bumps = {{Complex{a, 0}, rc / 2, rc},
                           {Complex{1.0 / a, 0}, rc / 2, rc}};
      fam.regions.cusps = {{Complex{a, 0}, rc, 2},
                           {Complex{1.0 / a, 0}, rc, 2}};
      break;
    }
  }
  return fam;
}

Family make_torus_with_b(double a, double b, const QuadratureConfig& cfg) {
  Family fam = make_family(FamilySpec::torus(a), cfg);
  fam.torus_b = b;
  WeierstrassData& wd = fam.immersion.wd;
  wd.phi = [b](const SurfacePoint& P) {
    Complex z = P.z, w = *P.w, iz = 1.0 / z, iz2 = iz * iz;
    return CTriple{kI * (1.0 - iz2) / w, (1.0 + b * iz + iz2) / w, iz};
  };
  wd.phi_prime = nullptr;
  wd.laurent.clear();
  return fam;
}

// ==== sampling ==============================================================

SurfacePoint Family::sample(Rng& rng) const {
  switch (spec.kind) {
    case Kind::Plane:
    case Kind::HarmonicGraph:
    case Kind::HelicoidY1:
      return SurfacePoint(rng.box(-3.0, 3.0));
    case Kind::HelicoidY2: {
      double r = 0.8 * std::sqrt(rng.uniform());
      return SurfacePoint(std::polar(r, rng.uniform(0, 2 * kPi)));
    }
    case Kind::Flujo: {
      for (int tries = 0; tries < 64; ++tries) {
        Complex z = std::polar(std::exp(rng.uniform(-2.0, 2.0)),
                               rng.uniform(0, 2 * kPi));
        if (std::abs(z - 1.0) > 0.05 && std::abs(z + 1.0) > 0.05)
          return SurfacePoint(z);
      }
      return SurfacePoint(Complex{0, 2});
    }
    case Kind::Torus: {
      double a = spec.a;
      for (int tries = 0; tries < 64; ++tries) {
        Complex z = std::polar(
            std::exp(rng.uniform(std::log(a) - 1.2, std::log(1 / a) + 1.2)),
            rng.uniform(0, 2 * kPi));
        if (std::abs(z - a) < 1e-2 || std::abs(z - 1 / a) < 1e-2) continue;
        Complex w = wd().domain.curve.w_ref(z);
        return SurfacePoint(z, rng.uniform() < 0.5 ? w : -w);
      }
      return SurfacePoint(Complex{-1, 0}, kI * (1 + a));
    }
    default: {  // punctured at 0
      double rho = rng.uniform(-2.5, 2.5);
      return SurfacePoint(std::polar(std::exp(rho), rng.uniform(0, 2 * kPi)));
    }
  }
}

std::vector<SurfacePoint> Family::verify_grid(int n_rho, int n_theta) const {
  std::vector<SurfacePoint> pts;
  switch (spec.kind) {
    case Kind::Plane:
    case Kind::HarmonicGraph:
    case Kind::HelicoidY1:
      for (int i = 0; i < n_rho; ++i)
        for (int j = 0; j < n_theta; ++j)
          pts.emplace_back(Complex{-6.0 + 12.0 * i / (n_rho - 1),
                                   -6.0 + 12.0 * j / (n_theta - 1)});
      break;
    case Kind::HelicoidY2:
      for (int i = 1; i <= n_rho; ++i)
        for (int j = 0; j < n_theta; ++j)
          pts.emplace_back(std::polar(0.97 * i / n_rho,
                                      2 * kPi * j / n_theta));
      break;
    case Kind::Flujo:
      for (int i = 0; i < n_rho; ++i)
        for (int j = 0; j < n_theta; ++j) {
          Complex z{-10.0 + 20.0 * i / (n_rho - 1),
                    -10.0 + 20.0 * j / (n_theta - 1)};
          if (std::abs(z - 1.0) > 0.1 && std::abs(z + 1.0) > 0.1)
            pts.emplace_back(z);
        }
      break;
    case Kind::Torus: {
      double a = spec.a;
      double r0 = std::log(a) - 2.0, r1 = std::log(1 / a) + 2.0;
      for (int i = 0; i < n_rho; ++i)
        for (int j = 0; j < n_theta; ++j) {
          Complex z = std::polar(std::exp(r0 + (r1 - r0) * i / (n_rho - 1)),
                                 2 * kPi * (j + 0.37) / n_theta);
          if (std::abs(z - a) < 1e-3 || std::abs(z - 1 / a) < 1e-3) continue;
          Complex w = wd().domain.curve.w_ref(z);
          pts.emplace_back(z, w);
          pts.emplace_back(z, -w);
        }
      break;
    }
    default:
      for (int i = 0; i < n_rho; ++i)
        for (int j = 0; j < n_theta; ++j)
          pts.emplace_back(std::polar(
              std::exp(-3.0 + 6.0 * i / (n_rho - 1)), 2 * kPi * j / n_theta));
      break;
  }
  return pts;
}

EndShells Family::end_shells(const EndId& end, int n_shells,
                             int per_shell) const {
  EndShells out;
  out.end = end;
  for (int k = 0; k < n_shells; ++k) {
    std::vector<SurfacePoint> shell;
    double frac = n_shells == 1 ? 0.0 : static_cast<double>(k) / (n_shells - 1);
    if (spec.kind == Kind::HelicoidY1) {
      // the non-conformal direction of the helicoid: strips Re z -> -infinity
      double re0 = -1.2 * (k + 1) - 0.2;
      for (int j = 0; j < per_shell; ++j)
        shell.emplace_back(Complex{re0, -3.5 + 7.0 * j / per_shell});
    } else {
      switch (end.chart) {
        case EndId::Chart::AtPoint: {
          double r = std::pow(10.0, -0.5 - 2.0 * frac);
          for (int j = 0; j < per_shell; ++j)
            shell.emplace_back(end.p + std::polar(r, 2 * kPi * j / per_shell));
          break;
        }
        case EndId::Chart::AtInfinity: {
          double r = std::pow(10.0, 0.5 + 2.0 * frac);
          for (int j = 0; j < per_shell; ++j)
            shell.emplace_back(std::polar(r, 2 * kPi * j / per_shell));
          break;
        }
        case EndId::Chart::CurveZero:
        case EndId::Chart::CurveInfinity: {
          bool near_zero = end.chart == EndId::Chart::CurveZero;
          const CurveEquation& cv = wd().domain.curve;
          double r = 0.2 * std::pow(10.0, -2.0 * frac);
          for (int j = 0; j < per_shell; ++j) {
            Complex u = std::polar(r, 2 * kPi * j / per_shell);
            shell.emplace_back(cv.z_of_u(u, near_zero), 1.0 / u);
          }
          break;
        }
      }
    }
    out.shells.push_back(std::move(shell));
  }
  return out;
}

}  // namespace harmonica
